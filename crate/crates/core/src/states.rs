//! Pure states of one two-mode system in the `S_x` eigenbasis and the Fock basis.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::hopping_eigenbasis;
use crate::spectrum::{ground_index, LevelIndex, ModelParams};

const NORM_TOL: f64 = 1e-12;

fn norm_sqr(amplitudes: &[Complex64]) -> f64 {
    amplitudes.iter().map(|c| c.norm_sqr()).sum()
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn check_norm(amplitudes: &[Complex64]) -> Result<()> {
    let norm = norm_sqr(amplitudes);
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::Validation(format!(
            "state is not normalised: sum |c|^2 = {norm}"
        )));
    }
    Ok(())
}

/// Amplitudes `c_m` over the energy eigenstates `|m>`, ordered from `m = -N/2` upward.
#[derive(Debug, Clone, PartialEq)]
pub struct SxBasisState {
    params: ModelParams,
    amplitudes: Vec<Complex64>,
}

impl SxBasisState {
    /// Wraps amplitudes that are already normalised to within `1e-12`.
    pub fn from_amplitudes(params: ModelParams, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != params.dim() {
            return Err(Error::Validation(format!(
                "expected {} amplitudes, got {}",
                params.dim(),
                amplitudes.len()
            )));
        }
        check_norm(&amplitudes)?;
        Ok(Self { params, amplitudes })
    }

    /// Rescales arbitrary non-zero amplitudes to unit norm.
    pub fn normalized(params: ModelParams, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != params.dim() {
            return Err(Error::Validation(format!(
                "expected {} amplitudes, got {}",
                params.dim(),
                amplitudes.len()
            )));
        }
        let norm = norm_sqr(&amplitudes).sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Construction("cannot normalise a zero vector".into()));
        }
        amplitudes.iter_mut().for_each(|c| *c /= norm);
        Ok(Self { params, amplitudes })
    }

    /// The energy eigenstate `|m>`.
    pub fn eigenstate(params: ModelParams, m: LevelIndex) -> Result<Self> {
        let k = params.index_of(m)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); params.dim()];
        amplitudes[k] = Complex64::new(1.0, 0.0);
        Ok(Self { params, amplitudes })
    }

    pub(crate) fn from_raw(params: ModelParams, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), params.dim());
        Self { params, amplitudes }
    }

    #[inline]
    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, m: LevelIndex) -> Result<Complex64> {
        Ok(self.amplitudes[self.params.index_of(m)?])
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &SxBasisState) -> Result<Complex64> {
        same_params(&self.params, &other.params)?;
        Ok(inner(&self.amplitudes, &other.amplitudes))
    }
}

/// Amplitudes over `|n1, N - n1>` for `n1 = 0..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockBasisState {
    params: ModelParams,
    amplitudes: Vec<Complex64>,
}

impl FockBasisState {
    pub fn from_amplitudes(params: ModelParams, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != params.dim() {
            return Err(Error::Validation(format!(
                "expected {} amplitudes, got {}",
                params.dim(),
                amplitudes.len()
            )));
        }
        check_norm(&amplitudes)?;
        Ok(Self { params, amplitudes })
    }

    /// The occupation state `|n1, N - n1>`.
    pub fn basis(params: ModelParams, n1: usize) -> Result<Self> {
        if n1 > params.n() {
            return Err(Error::Domain(format!(
                "n1 = {n1} exceeds N = {}",
                params.n()
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); params.dim()];
        amplitudes[n1] = Complex64::new(1.0, 0.0);
        Ok(Self { params, amplitudes })
    }

    pub(crate) fn from_raw(params: ModelParams, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), params.dim());
        Self { params, amplitudes }
    }

    #[inline]
    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }

    pub fn inner(&self, other: &FockBasisState) -> Result<Complex64> {
        same_params(&self.params, &other.params)?;
        Ok(inner(&self.amplitudes, &other.amplitudes))
    }
}

pub(crate) fn same_params(a: &ModelParams, b: &ModelParams) -> Result<()> {
    if a != b {
        return Err(Error::ParamsMismatch(format!(
            "(N = {}, gamma = {}) vs (N = {}, gamma = {})",
            a.n(),
            a.gamma(),
            b.n(),
            b.gamma()
        )));
    }
    Ok(())
}

/// `(|m0> + |m1>) / sqrt(2)` with `m1 = m0 - m1_offset`.
pub fn two_level_state(params: ModelParams, m1_offset: i64) -> Result<SxBasisState> {
    if m1_offset == 0 {
        return Err(Error::Construction(
            "m1 coincides with m0: the superposition is a single eigenstate".into(),
        ));
    }
    let m0 = ground_index(&params);
    let m1 = m0.shifted(-m1_offset);
    let k1 = params.index_of(m1)?;
    let k0 = params.index_of(m0)?;
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); params.dim()];
    let c = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    amplitudes[k0] = c;
    amplitudes[k1] = c;
    Ok(SxBasisState::from_raw(params, amplitudes))
}

/// Unnormalised double-Gaussian profile `exp(-(m-m0)^2/4s^2) + exp(-(m-m1)^2/4s^2)`.
pub(crate) fn double_gaussian_profile(
    params: &ModelParams,
    sigma: f64,
    m0: LevelIndex,
    m1: LevelIndex,
) -> Vec<f64> {
    let w = 4.0 * sigma * sigma;
    params
        .levels()
        .map(|m| {
            let d0 = m.distance_to(m0) as f64;
            let d1 = m.distance_to(m1) as f64;
            (-d0 * d0 / w).exp() + (-d1 * d1 / w).exp()
        })
        .collect()
}

/// Two Gaussian wave packets of width `sigma` centred on `m0` and `m1 = m0 - m1_offset`,
/// renormalised to unit norm. Requires `sigma <= |m1_offset| / 3`.
pub fn double_gaussian_state(
    params: ModelParams,
    sigma: f64,
    m1_offset: i64,
) -> Result<SxBasisState> {
    if m1_offset == 0 {
        return Err(Error::Construction(
            "m1 coincides with m0: the two packets overlap completely".into(),
        ));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::Validation(format!(
            "sigma must be positive and finite, got {sigma}"
        )));
    }
    if sigma > m1_offset.abs() as f64 / 3.0 {
        return Err(Error::Validation(format!(
            "sigma = {sigma} is too wide for |m1 - m0| = {}; need sigma <= {}",
            m1_offset.abs(),
            m1_offset.abs() as f64 / 3.0
        )));
    }
    let m0 = ground_index(&params);
    let m1 = m0.shifted(-m1_offset);
    params.index_of(m1)?;
    let profile = double_gaussian_profile(&params, sigma, m0, m1);
    let norm = profile.iter().map(|c| c * c).sum::<f64>().sqrt();
    let amplitudes = profile
        .into_iter()
        .map(|c| Complex64::new(c / norm, 0.0))
        .collect();
    Ok(SxBasisState::from_raw(params, amplitudes))
}

/// Orthogonal change of basis `U[n1][k] = <n1, N - n1 | m_k>` with `m_k = k - N/2`.
/// The first entry of every column is positive.
#[derive(Debug, Clone)]
pub struct BasisTransform {
    params: ModelParams,
    matrix: Array2<f64>,
}

impl BasisTransform {
    #[inline]
    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    #[inline]
    pub fn matrix(&self) -> &Array2<f64> {
        &self.matrix
    }

    /// Fock amplitudes of the eigenstate `|m>`.
    pub fn column(&self, m: LevelIndex) -> Result<Vec<f64>> {
        let k = self.params.index_of(m)?;
        Ok(self.matrix.column(k).to_vec())
    }
}

/// Diagonalises `S_x` in the Fock basis.
pub fn sx_eigenbasis(params: ModelParams) -> BasisTransform {
    BasisTransform {
        params,
        matrix: hopping_eigenbasis(params.n()),
    }
}

/// `U c`.
pub fn to_fock(state: &SxBasisState, transform: &BasisTransform) -> Result<FockBasisState> {
    same_params(&state.params, &transform.params)?;
    let u = &transform.matrix;
    let amplitudes = u
        .rows()
        .into_iter()
        .map(|row| {
            row.iter()
                .zip(&state.amplitudes)
                .map(|(w, c)| c * *w)
                .sum::<Complex64>()
        })
        .collect();
    Ok(FockBasisState::from_raw(state.params, amplitudes))
}

/// `U^T f`, the inverse of [`to_fock`].
pub fn to_sx(state: &FockBasisState, transform: &BasisTransform) -> Result<SxBasisState> {
    same_params(&state.params, &transform.params)?;
    let u = &transform.matrix;
    let amplitudes = u
        .columns()
        .into_iter()
        .map(|col| {
            col.iter()
                .zip(&state.amplitudes)
                .map(|(w, c)| c * *w)
                .sum::<Complex64>()
        })
        .collect();
    Ok(SxBasisState::from_raw(state.params, amplitudes))
}
