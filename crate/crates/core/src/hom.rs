//! Swap-operator readout by Hong-Ou-Mandel interference.
//!
//! Two copies `a` and `b`, each with `N` bosons in modes 1 and 2, are mixed pairwise
//! (`a1` with `b1`, `a2` with `b2`) on 50:50 beam splitters:
//! `a^+ -> (a^+ + b^+) / sqrt 2`, `b^+ -> (a^+ - b^+) / sqrt 2`.
//! After mixing, the copy-b occupations `(n_b1, n_b2)` have equal parity with
//! probability `P(+1)`, and `2 P(+1) - 1 = |<psi_a|psi_b>|^2`.
//!
//! Each pair conserves its own total, so the mixed state splits into sectors
//! `s1 = n_a1 + n_b1` holding `(s1 + 1) x (2N - s1 + 1)` amplitudes over `(n'_a1, n'_a2)`.

use ndarray::{s, Array2, Axis};
use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;

use crate::dynamics::evolve_phase;
use crate::error::{Error, Result};
use crate::linalg::hopping_eigenbasis;
use crate::spectrum::ModelParams;
use crate::states::{same_params, to_fock, BasisTransform, FockBasisState, SxBasisState};

/// Largest `N` for which the exact two-copy simulation runs by default.
pub const DEFAULT_HOM_BOUND: usize = 256;

/// Product state of the two copies, `amplitudes[[n_a1, n_b1]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeState {
    params: ModelParams,
    amplitudes: Array2<Complex64>,
}

impl CompositeState {
    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn amplitudes(&self) -> &Array2<Complex64> {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &CompositeState) -> Result<Complex64> {
        same_params(&self.params, &other.params)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

/// `amplitudes[[n_a1, n_b1]] = a(n_a1) b(n_b1)`.
pub fn compose(state_a: &FockBasisState, state_b: &FockBasisState) -> Result<CompositeState> {
    same_params(state_a.params(), state_b.params())?;
    let a = state_a.amplitudes();
    let b = state_b.amplitudes();
    let amplitudes = Array2::from_shape_fn((a.len(), b.len()), |(i, j)| a[i] * b[j]);
    Ok(CompositeState {
        params: *state_a.params(),
        amplitudes,
    })
}

/// `M[[k', k]] = <k', n - k'| U |k, n - k>` for one mode pair holding `n` bosons,
/// `k` counting copy-a particles.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamSplitterTable {
    pub n_total: usize,
    pub coefficients: Array2<f64>,
}

/// The transformed state `(a^+ + b^+)^k (a^+ - b^+)^(n-k) |0> / sqrt(k! (n-k)! 2^n)` is the
/// hopping eigenvector with eigenvalue `k - n/2` whose `|n, 0>` entry is positive.
pub fn beamsplitter_table(n_total: usize) -> BeamSplitterTable {
    let mut coefficients = hopping_eigenbasis(n_total);
    // The eigenbasis fixes the `|0, n>` entry positive; mode exchange multiplies
    // column k by (-1)^(n - k) between the two ends.
    for (k, mut col) in coefficients.axis_iter_mut(Axis(1)).enumerate() {
        if (n_total - k) % 2 == 1 {
            col.mapv_inplace(|v| -v);
        }
    }
    BeamSplitterTable {
        n_total,
        coefficients,
    }
}

/// Copy-a and copy-b after mixing; `sectors[s1][[n'_a1, n'_a2]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedState {
    params: ModelParams,
    sectors: Vec<Array2<Complex64>>,
}

impl MixedState {
    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// Amplitudes of the sector with `n_a1 + n_b1 = s1`.
    pub fn sector(&self, s1: usize) -> Option<&Array2<Complex64>> {
        self.sectors.get(s1)
    }

    pub fn sectors(&self) -> &[Array2<Complex64>] {
        &self.sectors
    }

    pub fn norm_sqr(&self) -> f64 {
        self.sectors
            .iter()
            .flat_map(|s| s.iter())
            .map(|a| a.norm_sqr())
            .sum()
    }
}

fn check_bound(params: &ModelParams, bound: usize) -> Result<()> {
    if params.n() > bound {
        return Err(Error::Resource(format!(
            "N = {} exceeds the two-copy simulation bound {bound}; lower N or raise the bound",
            params.n()
        )));
    }
    Ok(())
}

fn check_unit_norm(state: &CompositeState) -> Result<()> {
    let norm = state.norm_sqr();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::Validation(format!(
            "composite state must be normalised, |psi|^2 = {norm}"
        )));
    }
    Ok(())
}

/// Mixes one sector: `out[[k1, k2]] = sum_n M_{s1}[[k1, n]] M_{s2}[[k2, N - n]] c[[n, s1 - n]]`.
fn mix_sector(state: &CompositeState, s1: usize) -> Array2<Complex64> {
    let n = state.params.n();
    let s2 = 2 * n - s1;
    let lo = s1.saturating_sub(n);
    let hi = s1.min(n);
    let m1 = beamsplitter_table(s1).coefficients;
    let m2 = beamsplitter_table(s2).coefficients;
    let len = hi - lo + 1;
    let v: Vec<Complex64> = (lo..=hi)
        .map(|na| state.amplitudes[[na, s1 - na]])
        .collect();
    // Left factor M_{s1}[:, n] v_n, split into real and imaginary parts.
    let left = m1.slice(s![.., lo..=hi]);
    let mut left_re = Array2::<f64>::zeros((s1 + 1, len));
    let mut left_im = Array2::<f64>::zeros((s1 + 1, len));
    for (c, vc) in v.iter().enumerate() {
        let col = left.column(c);
        left_re.column_mut(c).assign(&col.mapv(|x| x * vc.re));
        left_im.column_mut(c).assign(&col.mapv(|x| x * vc.im));
    }
    // Right factor M_{s2}[:, N - n]^T, rows in the same n order.
    let mut right = Array2::<f64>::zeros((len, s2 + 1));
    for (r, na) in (lo..=hi).enumerate() {
        right.row_mut(r).assign(&m2.column(n - na));
    }
    let re = left_re.dot(&right);
    let im = left_im.dot(&right);
    ndarray::Zip::from(&re)
        .and(&im)
        .map_collect(|&r, &i| Complex64::new(r, i))
}

/// Applies both beam splitters. `N` is limited to [`DEFAULT_HOM_BOUND`].
pub fn apply_hom(state: &CompositeState) -> Result<MixedState> {
    apply_hom_with_bound(state, DEFAULT_HOM_BOUND)
}

pub fn apply_hom_with_bound(state: &CompositeState, bound: usize) -> Result<MixedState> {
    check_bound(&state.params, bound)?;
    check_unit_norm(state)?;
    let n = state.params.n();
    let sectors = (0..=2 * n)
        .into_par_iter()
        .map(|s1| mix_sector(state, s1))
        .collect();
    Ok(MixedState {
        params: state.params,
        sectors,
    })
}

/// Joint distribution of the copy-b counts, `probabilities[[n_b1, n_b2]]`, marginalised over
/// the copy-a counts.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeTable {
    pub params: ModelParams,
    pub probabilities: Array2<f64>,
}

fn accumulate_sector(table: &mut Array2<f64>, n: usize, s1: usize, amps: &Array2<Complex64>) {
    let s2 = 2 * n - s1;
    for ((k1, k2), a) in amps.indexed_iter() {
        table[[s1 - k1, s2 - k2]] += a.norm_sqr();
    }
}

impl OutcomeTable {
    pub fn from_mixed(state: &MixedState) -> Self {
        let n = state.params.n();
        let mut probabilities = Array2::zeros((2 * n + 1, 2 * n + 1));
        for (s1, amps) in state.sectors.iter().enumerate() {
            accumulate_sector(&mut probabilities, n, s1, amps);
        }
        Self {
            params: state.params,
            probabilities,
        }
    }

    /// Mixes and tabulates sector by sector without holding the full mixed state.
    /// Sectors are summed in increasing `s1`, so the table does not depend on the worker count.
    pub fn from_composite(state: &CompositeState, bound: usize) -> Result<Self> {
        check_bound(&state.params, bound)?;
        check_unit_norm(state)?;
        let n = state.params.n();
        let mut probabilities = Array2::zeros((2 * n + 1, 2 * n + 1));
        let chunk = 2 * rayon::current_num_threads().max(1);
        let sectors: Vec<usize> = (0..=2 * n).collect();
        for batch in sectors.chunks(chunk) {
            let mixed: Vec<Array2<Complex64>> =
                batch.par_iter().map(|&s1| mix_sector(state, s1)).collect();
            for (&s1, amps) in batch.iter().zip(&mixed) {
                accumulate_sector(&mut probabilities, n, s1, amps);
            }
        }
        Ok(Self {
            params: state.params,
            probabilities,
        })
    }

    /// Probability that `n_b1` and `n_b2` have equal parity.
    pub fn parity_plus(&self) -> f64 {
        self.probabilities
            .indexed_iter()
            .filter(|((b1, b2), _)| (b1 + b2) % 2 == 0)
            .map(|(_, p)| p)
            .sum()
    }

    pub fn total(&self) -> f64 {
        self.probabilities.sum()
    }
}

/// `P(V = +1)` of a mixed state.
pub fn parity_distribution(state: &MixedState) -> f64 {
    OutcomeTable::from_mixed(state).parity_plus()
}

/// One measured copy-b outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParityShot {
    pub n_b1: usize,
    pub n_b2: usize,
    pub v: i8,
}

impl ParityShot {
    pub fn new(n_b1: usize, n_b2: usize) -> Self {
        let v = if (n_b1 + n_b2).is_multiple_of(2) {
            1
        } else {
            -1
        };
        Self { n_b1, n_b2, v }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorResult {
    pub mean: f64,
    pub std_error: f64,
    pub shots: u64,
    pub seed: u64,
}

/// Inverse-CDF sampler over an outcome table with one counter-addressed random
/// stream per shot.
#[derive(Debug, Clone)]
pub struct ShotSampler {
    width: usize,
    cumulative: Vec<f64>,
    base: ChaCha8Rng,
}

impl ShotSampler {
    pub fn new(table: &OutcomeTable, seed: u64) -> Self {
        let mut acc = 0.0;
        let cumulative = table
            .probabilities
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        Self {
            width: table.probabilities.ncols(),
            cumulative,
            base: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Uniform draw in `[0, 1)` for shot `index`.
    fn uniform(&self, index: u64) -> f64 {
        let mut rng = self.base.clone();
        rng.set_word_pos(2 * index as u128);
        (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn shot(&self, index: u64) -> ParityShot {
        let total = *self.cumulative.last().expect("non-empty table");
        let x = self.uniform(index) * total;
        let k = self
            .cumulative
            .partition_point(|&c| c <= x)
            .min(self.cumulative.len() - 1);
        ParityShot::new(k / self.width, k % self.width)
    }
}

/// Monte Carlo estimate of `<V>` from `shots` draws. Shot `i` uses stream `(seed, i)`,
/// so the result is identical for any worker count.
pub fn sample_shots(table: &OutcomeTable, shots: u64, seed: u64) -> Result<EstimatorResult> {
    if shots == 0 {
        return Err(Error::Validation("shots must be at least 1".into()));
    }
    let sampler = ShotSampler::new(table, seed);
    let plus: u64 = (0..shots)
        .into_par_iter()
        .filter(|&i| sampler.shot(i).v == 1)
        .count() as u64;
    let n = shots as f64;
    let mean = (2.0 * plus as f64 - n) / n;
    let std_error = if shots > 1 {
        // Unbiased variance of +/-1 samples: (1 - mean^2) n / (n - 1).
        ((1.0 - mean * mean).max(0.0) * n / (n - 1.0) / n).sqrt()
    } else {
        0.0
    };
    Ok(EstimatorResult {
        mean,
        std_error,
        shots,
        seed,
    })
}

/// `|<psi_a|psi_b>|^2` straight from the amplitudes.
pub fn swap_expectation_exact(state_a: &FockBasisState, state_b: &FockBasisState) -> Result<f64> {
    Ok(state_a.inner(state_b)?.norm_sqr())
}

/// `<V>` for the copies `|Psi(0)>` and `|Psi(t)>`, both read out through the parity protocol.
pub fn time_crystal_readout(
    state: &SxBasisState,
    transform: &BasisTransform,
    t: f64,
    bound: usize,
) -> Result<OutcomeTable> {
    let a = to_fock(state, transform)?;
    let b = to_fock(&evolve_phase(state, t), transform)?;
    OutcomeTable::from_composite(&compose(&a, &b)?, bound)
}

/// `2 P(+1) - 1`.
pub fn swap_from_parity(p_plus: f64) -> f64 {
    2.0 * p_plus - 1.0
}
