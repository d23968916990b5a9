//! Model parameters and the exact spectrum of `H' = -S_x + (2 gamma / N) S_x^2`.
//!
//! Every eigenstate of the two-mode model is an `S_x` eigenstate `|m>`, with
//! `m = -N/2, ..., N/2` and energy `E_m = (2 gamma / N) m^2 - m`. For
//! `gamma > 1/2` the minimum sits in the interior of the band and the levels
//! close to it collapse onto the ground state as `1/N`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Particle number and dimensionless coupling of the two-mode model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    n: usize,
    gamma: f64,
}

impl ModelParams {
    pub fn new(n: usize, gamma: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("particle number must be at least 1".into()));
        }
        if !gamma.is_finite() || gamma < 0.0 {
            return Err(Error::Domain(format!(
                "gamma must be finite and non-negative, got {gamma}"
            )));
        }
        Ok(Self { n, gamma })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Total spin `S = N/2`.
    #[inline]
    pub fn spin(&self) -> f64 {
        self.n as f64 / 2.0
    }

    /// Hilbert-space dimension `N + 1`.
    #[inline]
    pub fn dim(&self) -> usize {
        self.n + 1
    }

    /// True when the minimum lies inside the band (`gamma > 1/2`).
    #[inline]
    pub fn degenerate(&self) -> bool {
        self.gamma > 0.5
    }

    /// Curvature `2 gamma / N` of the parabola `E_m`.
    #[inline]
    pub fn curvature(&self) -> f64 {
        2.0 * self.gamma / self.n as f64
    }

    #[inline]
    pub fn contains(&self, m: LevelIndex) -> bool {
        let n = self.n as i64;
        m.twice.abs() <= n && (m.twice + n) % 2 == 0
    }

    /// Position of `m` in arrays ordered from `m = -N/2` upward.
    pub fn index_of(&self, m: LevelIndex) -> Result<usize> {
        if !self.contains(m) {
            return Err(Error::Domain(format!(
                "level m = {m} is not in [-{0}/2, {0}/2]",
                self.n
            )));
        }
        Ok(((m.twice + self.n as i64) / 2) as usize)
    }

    /// Inverse of [`ModelParams::index_of`]; `k` must be `<= N`.
    #[inline]
    pub fn level_at(&self, k: usize) -> LevelIndex {
        debug_assert!(k <= self.n);
        LevelIndex {
            twice: 2 * k as i64 - self.n as i64,
        }
    }

    /// All levels in ascending order of `m`.
    pub fn levels(&self) -> impl Iterator<Item = LevelIndex> + '_ {
        (0..=self.n).map(move |k| self.level_at(k))
    }
}

/// An `S_x` quantum number. Stored as `2m` so odd `N` (half-integer `m`) is exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LevelIndex {
    twice: i64,
}

impl LevelIndex {
    /// Integer level `m`.
    #[inline]
    pub const fn new(m: i64) -> Self {
        Self { twice: 2 * m }
    }

    /// Level with `2m = twice`.
    #[inline]
    pub const fn from_twice(twice: i64) -> Self {
        Self { twice }
    }

    #[inline]
    pub const fn twice(self) -> i64 {
        self.twice
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }

    /// `Some(m)` when `m` is an integer.
    pub fn as_integer(self) -> Option<i64> {
        (self.twice % 2 == 0).then_some(self.twice / 2)
    }

    /// The level `m + delta`.
    #[inline]
    pub const fn shifted(self, delta: i64) -> Self {
        Self {
            twice: self.twice + 2 * delta,
        }
    }

    /// `m - other` (always an integer for levels of the same model).
    #[inline]
    pub fn distance_to(self, other: LevelIndex) -> i64 {
        (self.twice - other.twice) / 2
    }
}

impl fmt::Display for LevelIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_integer() {
            Some(m) => write!(f, "{m}"),
            None => write!(f, "{}/2", self.twice),
        }
    }
}

/// `E_m` without range checking.
#[inline]
pub(crate) fn energy_unchecked(params: &ModelParams, m: f64) -> f64 {
    params.curvature() * m * m - m
}

/// `E_m - E_ref`, factored to avoid cancelling two O(N) numbers.
#[inline]
pub(crate) fn energy_difference(params: &ModelParams, m: f64, reference: f64) -> f64 {
    (m - reference) * (params.curvature() * (m + reference) - 1.0)
}

pub fn energy_level(params: &ModelParams, m: LevelIndex) -> Result<f64> {
    params.index_of(m)?;
    Ok(energy_unchecked(params, m.value()))
}

/// `E_m - E_{m-1} = (2 gamma / N)(2m - 1) - 1`.
pub fn neighbor_gap(params: &ModelParams, m: LevelIndex) -> Result<f64> {
    params.index_of(m)?;
    if m.twice == -(params.n as i64) {
        return Err(Error::Domain(format!(
            "level m = {m} is the bottom of the band and has no lower neighbour"
        )));
    }
    Ok(params.curvature() * (2.0 * m.value() - 1.0) - 1.0)
}

/// The level of lowest energy. Ties go to the larger `m`.
pub fn ground_index(params: &ModelParams) -> LevelIndex {
    let n = params.n;
    let top = params.level_at(n);
    if params.gamma == 0.0 {
        return top;
    }
    // The parabola's vertex N/(4 gamma) in array-index units.
    let vertex = params.n as f64 / (4.0 * params.gamma) + params.spin();
    if vertex >= n as f64 {
        return top;
    }
    let lower = vertex.floor().max(0.0) as usize;
    let upper = (lower + 1).min(n);
    if upper == lower {
        return params.level_at(lower);
    }
    let m_up = params.level_at(upper).value();
    // E_up - E_low = 2 gamma (2 m_up - 1) / N - 1 <= 0  <=>  2 gamma (2 m_up - 1) <= N
    if 2.0 * params.gamma * (2.0 * m_up - 1.0) <= params.n as f64 {
        params.level_at(upper)
    } else {
        params.level_at(lower)
    }
}

/// The textbook rule `floor(N / (4 gamma))`, kept for comparison with [`ground_index`].
/// `None` when `gamma <= 1/2` or for odd `N` (where levels are half-integers).
pub fn floor_ground_index(params: &ModelParams) -> Option<LevelIndex> {
    if !params.degenerate() || params.n % 2 == 1 {
        return None;
    }
    let m = (params.n as f64 / (4.0 * params.gamma)).floor() as i64;
    Some(LevelIndex::new(m))
}

/// `E_m - E_{m0}`, non-negative.
pub fn gap_to_ground(params: &ModelParams, m: LevelIndex) -> Result<f64> {
    params.index_of(m)?;
    let m0 = ground_index(params);
    Ok(energy_difference(params, m.value(), m0.value()))
}

/// Levels with `|m - m0| <= N^(1/2 - delta)`, ascending.
pub fn quasi_ground_set(params: &ModelParams, delta: f64) -> Result<Vec<LevelIndex>> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::Domain(format!(
            "delta must lie in (0, 1/2), got {delta}"
        )));
    }
    if !params.degenerate() {
        return Err(Error::Regime(format!(
            "gamma = {} <= 1/2 has a unique gapped ground state",
            params.gamma
        )));
    }
    let threshold = (params.n as f64).powf(0.5 - delta);
    let m0 = ground_index(params);
    Ok(params
        .levels()
        .filter(|m| (m.distance_to(m0).abs() as f64) <= threshold)
        .collect())
}

/// Logarithm used in the `m1` offset `floor(sqrt(N / log N))`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum LogBase {
    #[default]
    Natural,
    Two,
    Ten,
    Custom(f64),
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Natural => x.ln(),
            LogBase::Two => x.log2(),
            LogBase::Ten => x.log10(),
            LogBase::Custom(b) => x.ln() / b.ln(),
        }
    }
}

impl FromStr for LogBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "e" | "ln" | "natural" => Ok(LogBase::Natural),
            "2" => Ok(LogBase::Two),
            "10" => Ok(LogBase::Ten),
            other => match other.parse::<f64>() {
                Ok(b) if b > 0.0 && b != 1.0 && b.is_finite() => Ok(LogBase::Custom(b)),
                _ => Err(Error::Validation(format!(
                    "log base must be 'e', '2', '10' or a positive number != 1, got '{other}'"
                ))),
            },
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogBase::Natural => f.write_str("e"),
            LogBase::Two => f.write_str("2"),
            LogBase::Ten => f.write_str("10"),
            LogBase::Custom(b) => write!(f, "{b}"),
        }
    }
}

/// `floor(sqrt(N / log N))`, the distance from `m0` to the partner level `m1`.
pub fn m1_offset(params: &ModelParams, base: LogBase) -> Result<i64> {
    if !params.degenerate() {
        return Err(Error::Regime(format!(
            "gamma = {} <= 1/2: no quasi-degenerate partner level",
            params.gamma
        )));
    }
    let log_n = base.log(params.n as f64);
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(log_n > 0.0) {
        return Err(Error::Construction(format!(
            "log N = {log_n} is not positive for N = {}",
            params.n
        )));
    }
    let offset = (params.n as f64 / log_n).sqrt().floor() as i64;
    if offset == 0 {
        return Err(Error::Construction(format!(
            "floor(sqrt(N / log N)) = 0 for N = {}",
            params.n
        )));
    }
    Ok(offset)
}

/// `m1 = m0 - floor(sqrt(N / log N))`.
pub fn m1_index(params: &ModelParams, base: LogBase) -> Result<LevelIndex> {
    let offset = m1_offset(params, base)?;
    let m1 = ground_index(params).shifted(-offset);
    params.index_of(m1)?;
    Ok(m1)
}

/// Every level with its energy, plus the ground level.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub params: ModelParams,
    pub energies: Vec<(LevelIndex, f64)>,
    pub m0: LevelIndex,
}

impl Spectrum {
    pub fn new(params: ModelParams) -> Self {
        let energies = params
            .levels()
            .map(|m| (m, energy_unchecked(&params, m.value())))
            .collect();
        Self {
            params,
            energies,
            m0: ground_index(&params),
        }
    }

    pub fn ground_energy(&self) -> f64 {
        energy_unchecked(&self.params, self.m0.value())
    }
}
