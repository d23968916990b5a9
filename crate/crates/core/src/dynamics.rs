//! Time evolution in the energy eigenbasis, overlap (Loschmidt) dynamics and
//! the `S_z` autocorrelation.
//!
//! The Hamiltonian is diagonal in the `|m>` basis, so evolution is a phase per
//! level. Phases are measured from the ground level `m0`, i.e. every evolved
//! state carries an extra global factor `exp(i E_{m0} t)` that no observable sees.
//!
//! The closed-form envelope replaces the overlap sum by a Gaussian integral
//! around each packet. With `d = m1 - m0` and `b(t) = 4 gamma sigma^2 t / N`:
//!
//! ```text
//! <Psi(0)|Psi(t)> ~ A(t) [1 + exp(-d^2 / 2 Sigma(t)^2) exp(-2 pi i t / T(t))]
//!   A(t)     = (1/2) sqrt(N / (N + 4 i gamma sigma^2 t))
//!   T(t)     = (2 pi / Delta E_{m1}) (1 + b^2)
//!   Sigma(t) = sqrt((N / (4 gamma sigma t))^2 + sigma^2)
//! ```
//!
//! For `d^2 = N / ln N` the base period `2 pi / Delta E_{m1}` is `(pi / gamma) ln N`.

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spectrum::{energy_difference, gap_to_ground, ground_index, LevelIndex, ModelParams};
use crate::states::{BasisTransform, SxBasisState};

/// Samples per expected period used when callers do not choose a grid.
pub const DEFAULT_SAMPLES_PER_PERIOD: usize = 256;

/// Largest `N` for which [`sz_correlation_brute`] builds the dense `S_z` matrix.
pub const DEFAULT_SZ_ORACLE_BOUND: usize = 2000;

/// Level energies relative to the ground level, `E_m - E_{m0}`.
fn relative_energies(params: &ModelParams) -> Vec<f64> {
    let m0 = ground_index(params).value();
    params
        .levels()
        .map(|m| energy_difference(params, m.value(), m0))
        .collect()
}

/// `c_m -> c_m exp(-i (E_m - E_{m0}) t)`.
pub fn evolve_phase(state: &SxBasisState, t: f64) -> SxBasisState {
    let energies = relative_energies(state.params());
    let amplitudes = state
        .amplitudes()
        .iter()
        .zip(&energies)
        .map(|(c, e)| c * Complex64::from_polar(1.0, -e * t))
        .collect();
    SxBasisState::from_raw(*state.params(), amplitudes)
}

/// Populations `|c_m|^2` with their relative energies, zero weights dropped.
/// Dropping exact zeros leaves every sum bit-identical.
fn weighted_levels(state: &SxBasisState) -> Vec<(f64, f64)> {
    let energies = relative_energies(state.params());
    state
        .amplitudes()
        .iter()
        .zip(energies)
        .filter_map(|(c, e)| {
            let w = c.norm_sqr();
            (w != 0.0).then_some((w, e))
        })
        .collect()
}

fn overlap_from_weights(weights: &[(f64, f64)], t: f64) -> Complex64 {
    weights
        .iter()
        .map(|&(w, e)| Complex64::from_polar(w, -e * t))
        .sum()
}

/// `<Psi(0)|Psi(t)> = sum_m |c_m|^2 exp(-i (E_m - E_{m0}) t)`.
pub fn overlap_exact(state: &SxBasisState, t: f64) -> Complex64 {
    overlap_from_weights(&weighted_levels(state), t)
}

/// [`overlap_exact`] on a time grid. Samples are evaluated in parallel; each one is
/// reduced in a fixed level order, so the result does not depend on the worker count.
pub fn overlap_exact_series(state: &SxBasisState, times: &[f64]) -> Vec<Complex64> {
    let weights = weighted_levels(state);
    times
        .par_iter()
        .map(|&t| overlap_from_weights(&weights, t))
        .collect()
}

/// Instantaneous period, packet width and amplitude of the closed-form envelope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeParams {
    /// `T(t)`.
    pub period: f64,
    /// `Sigma(t)`; infinite at `t = 0`.
    pub width: f64,
    /// `A(t)`.
    pub amplitude: Complex64,
    /// `T(0) = 2 pi / Delta E_{m1}`.
    pub base_period: f64,
}

/// Continuum approximation of the overlap of the double-Gaussian state.
///
/// `sigma = 0` gives the exact two-level result `(1 + exp(-i Delta E_{m1} t)) / 2`.
pub fn overlap_closed_form(
    params: &ModelParams,
    sigma: f64,
    m1_offset: i64,
    t: f64,
) -> Result<(Complex64, EnvelopeParams)> {
    let base_period = base_period(params, m1_offset)?;
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::Validation(format!(
            "sigma must be finite and non-negative, got {sigma}"
        )));
    }
    let n = params.n() as f64;
    let gamma = params.gamma();
    let b = 4.0 * gamma * sigma * sigma * t / n;
    let amplitude = 0.5 / Complex64::new(1.0, b).sqrt();
    let period = base_period * (1.0 + b * b);
    let spread = 4.0 * gamma * sigma * t.abs();
    let width = if spread == 0.0 {
        f64::INFINITY
    } else {
        ((n / spread).powi(2) + sigma * sigma).sqrt()
    };
    let d = m1_offset as f64;
    let envelope = if width.is_infinite() {
        1.0
    } else {
        (-d * d / (2.0 * width * width)).exp()
    };
    let value = amplitude * (1.0 + envelope * Complex64::from_polar(1.0, -2.0 * PI * t / period));
    Ok((
        value,
        EnvelopeParams {
            period,
            width,
            amplitude,
            base_period,
        },
    ))
}

/// `2 pi / (E_{m1} - E_{m0})`, the oscillation period of the pair `m0, m1 = m0 - m1_offset`.
pub fn base_period(params: &ModelParams, m1_offset: i64) -> Result<f64> {
    if !params.degenerate() {
        return Err(Error::Regime(format!(
            "gamma = {} <= 1/2: no quasi-degenerate partner level",
            params.gamma()
        )));
    }
    if m1_offset == 0 {
        return Err(Error::Construction("m1 coincides with m0".into()));
    }
    let m1 = ground_index(params).shifted(-m1_offset);
    let gap = gap_to_ground(params, m1)?;
    if gap <= 0.0 {
        return Err(Error::Construction(format!(
            "m1 = {m1} is degenerate with m0: no oscillation"
        )));
    }
    Ok(2.0 * PI / gap)
}

/// `(pi / gamma) ln N`.
pub fn log_period(params: &ModelParams) -> f64 {
    PI / params.gamma() * (params.n() as f64).ln()
}

/// Uniform grid of `samples` points on `[0, t_max]` (both ends included).
pub fn time_grid(t_max: f64, samples: usize) -> Vec<f64> {
    match samples {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => {
            let dt = t_max / (samples - 1) as f64;
            (0..samples).map(|i| i as f64 * dt).collect()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapSample {
    pub t: f64,
    pub exact: Complex64,
    pub closed_form: Complex64,
    pub envelope: EnvelopeParams,
}

/// Exact and closed-form overlaps on a time grid.
#[derive(Debug, Clone)]
pub struct OverlapSeries {
    pub params: ModelParams,
    /// Packet width; `0` for the two-level state.
    pub sigma: f64,
    pub m1_offset: i64,
    pub samples: Vec<OverlapSample>,
}

impl OverlapSeries {
    pub fn compute(
        state: &SxBasisState,
        sigma: f64,
        m1_offset: i64,
        times: &[f64],
    ) -> Result<Self> {
        let params = *state.params();
        base_period(&params, m1_offset)?;
        let exact = overlap_exact_series(state, times);
        let samples = times
            .iter()
            .zip(exact)
            .map(|(&t, exact)| {
                let (closed_form, envelope) = overlap_closed_form(&params, sigma, m1_offset, t)?;
                Ok(OverlapSample {
                    t,
                    exact,
                    closed_form,
                    envelope,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            params,
            sigma,
            m1_offset,
            samples,
        })
    }

    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    /// `|exact|^2` per sample.
    pub fn exact_probability(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.exact.norm_sqr()).collect()
    }

    /// Largest `| |exact| - |closed form| |` over the samples.
    pub fn max_abs_deviation(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| (s.exact.norm() - s.closed_form.norm()).abs())
            .fold(0.0, f64::max)
    }
}

/// Mean spacing of the maxima of `|exact|^2`.
pub fn extract_period(series: &OverlapSeries) -> Result<f64> {
    extract_period_from(&series.times(), &series.exact_probability())
}

/// Interior local maxima of `values`, refined by a parabola through each peak and its
/// neighbours. Peaks below half the series' range are ignored.
pub fn find_peaks(times: &[f64], values: &[f64]) -> Vec<f64> {
    if times.len() != values.len() || values.len() < 3 {
        return Vec::new();
    }
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let floor = lo + 0.5 * (hi - lo);
    let mut peaks = Vec::new();
    for i in 1..values.len() - 1 {
        let (y0, y1, y2) = (values[i - 1], values[i], values[i + 1]);
        if !(y1 > y0 && y1 >= y2 && y1 >= floor && hi > lo) {
            continue;
        }
        let curvature = y0 - 2.0 * y1 + y2;
        let shift = if curvature < 0.0 {
            0.5 * (y0 - y2) / curvature
        } else {
            0.0
        };
        let dt = if shift >= 0.0 {
            times[i + 1] - times[i]
        } else {
            times[i] - times[i - 1]
        };
        peaks.push(times[i] + shift * dt);
    }
    peaks
}

/// Mean spacing between successive peaks of a sampled signal.
///
/// A peak that falls below the detection floor is bridged: consecutive detected peaks
/// are assigned integer cycle numbers from the median spacing, and the result is the
/// elapsed time divided by the number of elapsed cycles.
pub fn extract_period_from(times: &[f64], values: &[f64]) -> Result<f64> {
    let peaks = find_peaks(times, values);
    if peaks.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "found {} interior maxima, need at least 2",
            peaks.len()
        )));
    }
    let mut spacings: Vec<f64> = peaks.windows(2).map(|w| w[1] - w[0]).collect();
    spacings.sort_by(f64::total_cmp);
    let median = spacings[spacings.len() / 2];
    let cycles = ((peaks[peaks.len() - 1] - peaks[0]) / median).round();
    if cycles < 1.0 {
        return Err(Error::InsufficientData("peaks do not span a cycle".into()));
    }
    Ok((peaks[peaks.len() - 1] - peaks[0]) / cycles)
}

/// One term `amplitude * exp(-i frequency t)` of the `S_z` autocorrelation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SzCorrelationTerm {
    /// The populated level `m_j`.
    pub level: LevelIndex,
    /// `+1` for the transition to `m_j + 1`, `-1` for `m_j - 1`.
    pub branch: i8,
    /// Ladder weight `(N/2 + 1)(N/2) - m_j (m_j +/- 1)`.
    pub ladder_weight: f64,
    /// `|c_j|^2 ladder_weight / 4`.
    pub amplitude: f64,
    /// `E_{m_j +/- 1} - E_{m_j}`.
    pub frequency: f64,
}

/// The four terms of `<S_z e^{-iH't} S_z e^{iH't}>` for `(|m0> + |m1>) / sqrt 2`.
///
/// `S_z` connects `|m>` only to `|m +/- 1>`, so for `|m1 - m0| != 2` no cross terms
/// between the two populated levels survive.
pub fn sz_correlation_terms(
    params: &ModelParams,
    m1_offset: i64,
) -> Result<Vec<SzCorrelationTerm>> {
    if !params.degenerate() {
        return Err(Error::Regime(format!(
            "gamma = {} <= 1/2: no quasi-degenerate partner level",
            params.gamma()
        )));
    }
    match m1_offset.abs() {
        0 => return Err(Error::Construction("m1 coincides with m0".into())),
        2 => {
            return Err(Error::Domain(
                "|m1 - m0| = 2: S_z^2 couples the two levels and the four-term form does not apply"
                    .into(),
            ))
        }
        _ => {}
    }
    let m0 = ground_index(params);
    let m1 = m0.shifted(-m1_offset);
    let s = params.spin();
    let mut terms = Vec::with_capacity(4);
    for mj in [m0, m1] {
        for branch in [1i8, -1] {
            let target = mj.shifted(branch as i64);
            params.index_of(target).map_err(|_| {
                Error::Domain(format!(
                    "level {mj} has no neighbour {target} inside the band"
                ))
            })?;
            let m = mj.value();
            let ladder_weight = s * (s + 1.0) - m * (m + branch as f64);
            terms.push(SzCorrelationTerm {
                level: mj,
                branch,
                ladder_weight,
                amplitude: 0.5 * ladder_weight / 4.0,
                frequency: energy_difference(params, target.value(), m),
            });
        }
    }
    Ok(terms)
}

/// Closed-form `S_z` autocorrelation of the two-level time-crystal state.
pub fn sz_correlation_closed_form(
    params: &ModelParams,
    m1_offset: i64,
    t: f64,
) -> Result<Complex64> {
    Ok(sz_correlation_terms(params, m1_offset)?
        .iter()
        .map(|term| Complex64::from_polar(term.amplitude, -term.frequency * t))
        .sum())
}

/// `S_z` in the energy eigenbasis, built numerically from the Fock transform.
#[derive(Debug, Clone)]
pub struct SzCorrelator {
    params: ModelParams,
    /// Row-wise non-negligible entries of `U^T diag(n1 - N/2) U`.
    rows: Vec<Vec<(usize, f64)>>,
    energies: Vec<f64>,
}

impl SzCorrelator {
    pub fn new(transform: &BasisTransform, bound: usize) -> Result<Self> {
        let params = *transform.params();
        if params.n() > bound {
            return Err(Error::Resource(format!(
                "N = {} exceeds the dense S_z oracle bound {bound}",
                params.n()
            )));
        }
        let u = transform.matrix();
        let half = params.spin();
        let mut scaled: Array2<f64> = u.clone();
        for (n1, mut row) in scaled.rows_mut().into_iter().enumerate() {
            row *= n1 as f64 - half;
        }
        let dense = u.t().dot(&scaled);
        let cutoff = 1e-13 * dense.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let rows = dense
            .rows()
            .into_iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, v)| v.abs() > cutoff)
                    .map(|(j, v)| (j, *v))
                    .collect()
            })
            .collect();
        Ok(Self {
            params,
            rows,
            energies: relative_energies(&params),
        })
    }

    fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(j, z)| v[j] * z).sum())
            .collect()
    }

    /// `<Psi| S_z e^{-iH't} S_z e^{iH't} |Psi>`.
    pub fn correlation(&self, state: &SxBasisState, t: f64) -> Result<Complex64> {
        crate::states::same_params(&self.params, state.params())?;
        let c = state.amplitudes();
        let left = self.apply(c);
        let forward: Vec<Complex64> = c
            .iter()
            .zip(&self.energies)
            .map(|(a, e)| a * Complex64::from_polar(1.0, e * t))
            .collect();
        let right = self.apply(&forward);
        Ok(left
            .iter()
            .zip(&right)
            .zip(&self.energies)
            .map(|((l, r), e)| l.conj() * r * Complex64::from_polar(1.0, -e * t))
            .sum())
    }

    pub fn correlation_series(
        &self,
        state: &SxBasisState,
        times: &[f64],
    ) -> Result<Vec<Complex64>> {
        crate::states::same_params(&self.params, state.params())?;
        times
            .par_iter()
            .map(|&t| self.correlation(state, t))
            .collect()
    }
}

/// Brute-force `S_z` autocorrelation via the dense `S_z` matrix. `N` is limited to
/// [`DEFAULT_SZ_ORACLE_BOUND`]; use [`SzCorrelator`] to reuse the matrix or raise the bound.
pub fn sz_correlation_brute(
    state: &SxBasisState,
    transform: &BasisTransform,
    t: f64,
) -> Result<Complex64> {
    SzCorrelator::new(transform, DEFAULT_SZ_ORACLE_BOUND)?.correlation(state, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{m1_offset, LogBase};
    use crate::states::{double_gaussian_state, sx_eigenbasis, two_level_state};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn p(n: usize, g: f64) -> ModelParams {
        ModelParams::new(n, g).unwrap()
    }

    #[test]
    fn evolve_identity_and_norm() {
        let params = p(200, 0.75);
        let s = double_gaussian_state(params, 2.0, 12).unwrap();
        assert_eq!(evolve_phase(&s, 0.0), s);
        let e = evolve_phase(&s, 123.4);
        assert_abs_diff_eq!(e.norm_sqr(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn eigenstate_only_gains_a_phase() {
        let params = p(50, 0.75);
        let m = LevelIndex::new(3);
        let s = SxBasisState::eigenstate(params, m).unwrap();
        let e = evolve_phase(&s, 7.0);
        let k = params.index_of(m).unwrap();
        assert_abs_diff_eq!(e.amplitudes()[k].norm(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(overlap_exact(&s, 7.0).norm(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn relative_phase_reaches_pi_at_half_period() {
        let params = p(10_000, 0.75);
        let offset = m1_offset(&params, LogBase::Natural).unwrap();
        let s = two_level_state(params, offset).unwrap();
        let m0 = ground_index(&params);
        let m1 = m0.shifted(-offset);
        let gap = gap_to_ground(&params, m1).unwrap();
        let t = PI / gap;
        let e = evolve_phase(&s, t);
        let ratio = e.amplitude(m1).unwrap() / e.amplitude(m0).unwrap();
        assert_abs_diff_eq!(ratio.re, -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(overlap_exact(&s, t).norm_sqr(), 0.0, epsilon = 1e-24);
    }

    #[test]
    fn overlap_starts_at_one() {
        let params = p(1000, 0.75);
        let s = double_gaussian_state(params, 1.0, 12).unwrap();
        assert_abs_diff_eq!(overlap_exact(&s, 0.0).re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(overlap_exact(&s, 0.0).im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn closed_form_limits() {
        let params = p(29240, 0.75);
        let (v, env) = overlap_closed_form(&params, 1.0, 53, 0.0).unwrap();
        assert_abs_diff_eq!(v.re, 1.0, epsilon = 1e-15);
        assert_eq!(env.amplitude, Complex64::new(0.5, 0.0));
        assert!(env.width.is_infinite());
        assert_eq!(env.period, env.base_period);

        // Ideal pair: m0 = N / (4 gamma) exactly and d^2 = N / ln N gives T(0) = (pi/gamma) ln N.
        let params = p(1000, 1000.0 / (4.0 * 250.0));
        let d2 = 1000.0 / (1000f64).ln();
        let expected = PI / params.gamma() * (1000f64).ln();
        let ideal = 2.0 * PI / (params.curvature() * d2);
        assert_abs_diff_eq!(ideal, expected, epsilon = 1e-9);

        // |A| strictly decreasing.
        let mut last = f64::INFINITY;
        for i in 0..50 {
            let (_, env) = overlap_closed_form(&params, 1.0, 12, i as f64 * 10.0).unwrap();
            assert!(env.amplitude.norm() < last);
            assert!(env.amplitude.norm() <= 0.5);
            assert!(env.period >= env.base_period);
            last = env.amplitude.norm();
        }
    }

    #[test]
    fn zero_width_closed_form_is_exact_two_level() {
        let params = p(10_000, 0.75);
        let offset = m1_offset(&params, LogBase::Natural).unwrap();
        let s = two_level_state(params, offset).unwrap();
        for i in 0..100 {
            let t = i as f64 * 0.73;
            let (cf, _) = overlap_closed_form(&params, 0.0, offset, t).unwrap();
            assert!((cf - overlap_exact(&s, t)).norm() < 1e-12);
        }
    }

    #[test]
    fn closed_form_tracks_sum_for_log_offsets() {
        let params = p(29240, 0.75);
        let offset = m1_offset(&params, LogBase::Natural).unwrap();
        let s = double_gaussian_state(params, 1.0, offset).unwrap();
        let times = time_grid(5.0 * log_period(&params), 1200);
        let series = OverlapSeries::compute(&s, 1.0, offset, &times).unwrap();
        assert!(
            series.max_abs_deviation() < 5e-3,
            "{}",
            series.max_abs_deviation()
        );
        for sample in &series.samples {
            assert!(sample.exact.norm() <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn closed_form_errors() {
        assert!(matches!(
            overlap_closed_form(&p(100, 0.25), 1.0, 3, 1.0),
            Err(Error::Regime(_))
        ));
        assert!(overlap_closed_form(&p(100, 1.0), -1.0, 3, 1.0).is_err());
        assert!(overlap_closed_form(&p(100, 1.0), 1.0, 0, 1.0).is_err());
        assert!(matches!(
            overlap_closed_form(&p(100, 1.0), 1.0, 200, 1.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn period_of_two_level_state() {
        let params = p(10_000, 0.75);
        let offset = m1_offset(&params, LogBase::Natural).unwrap();
        let s = two_level_state(params, offset).unwrap();
        let expected = base_period(&params, offset).unwrap();
        let times = time_grid(6.0 * expected, 6 * DEFAULT_SAMPLES_PER_PERIOD + 1);
        let series = OverlapSeries::compute(&s, 0.0, offset, &times).unwrap();
        let period = extract_period(&series).unwrap();
        assert!((period - expected).abs() / expected < 1e-3);
    }

    #[test]
    fn constant_series_has_no_period() {
        let times = time_grid(10.0, 100);
        let flat = vec![0.3; 100];
        assert!(matches!(
            extract_period_from(&times, &flat),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn period_bridges_missing_peaks() {
        let times = time_grid(100.0, 10_001);
        // Period 7, every third peak suppressed below the detection floor.
        let values: Vec<f64> = times
            .iter()
            .map(|&t| {
                let cycle = (t / 7.0).round() as i64;
                let damp = if cycle % 3 == 2 { 0.1 } else { 1.0 };
                damp * (2.0 * PI * t / 7.0).cos().powi(2)
            })
            .collect();
        let period = extract_period_from(&times, &values).unwrap();
        assert_abs_diff_eq!(period, 3.5, epsilon = 1e-3);
    }

    #[test]
    fn sz_terms_ladder_weights() {
        let params = p(4, 1.0);
        // m0 = 1; offset -1 puts m1 = 2 at the top of the band: the raising branch leaves it.
        assert!(sz_correlation_terms(&params, -1).is_err());
        let params = p(4, 3.0);
        // m0 = round(1/3) = 0, m1 = -1 (offset 1).
        let terms = sz_correlation_terms(&params, 1).unwrap();
        assert_eq!(terms[0].ladder_weight, 6.0);
        assert_eq!(terms[1].ladder_weight, 6.0);
        assert!(matches!(
            sz_correlation_terms(&p(40, 1.0), 2),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn sz_matrix_elements_match_ladder_weights() {
        // |<m +/- 1|S_z|m>|^2 = (S(S+1) - m(m +/- 1)) / 4.
        let params = p(4, 0.0);
        let t = sx_eigenbasis(params);
        let corr = SzCorrelator::new(&t, 10).unwrap();
        let k = params.index_of(LevelIndex::new(0)).unwrap();
        let row = &corr.rows[k];
        let weights: Vec<(usize, f64)> = row.iter().map(|&(j, z)| (j, z * z)).collect();
        assert_eq!(weights.len(), 2);
        for (_, w) in weights {
            assert_abs_diff_eq!(w, 6.0 / 4.0, epsilon = 1e-12);
        }
        let top = params.index_of(LevelIndex::new(2)).unwrap();
        assert_eq!(corr.rows[top].len(), 1);
    }

    #[test]
    fn sz_brute_matches_closed_form() {
        for &(n, g, offset) in &[
            (30usize, 0.75, 3i64),
            (60, 1.0, 5),
            (41, 0.8, -4),
            (30, 0.75, 1),
        ] {
            let params = p(n, g);
            let s = two_level_state(params, offset).unwrap();
            let t = sx_eigenbasis(params);
            let corr = SzCorrelator::new(&t, 100).unwrap();
            for i in 0..40 {
                let time = i as f64 * 3.1;
                let brute = corr.correlation(&s, time).unwrap();
                let closed = sz_correlation_closed_form(&params, offset, time).unwrap();
                assert!(
                    (brute - closed).norm() < 1e-9 * closed.norm().max(1.0),
                    "N={n} t={time}"
                );
            }
        }
    }

    #[test]
    fn sz_brute_at_zero_is_real_positive() {
        let params = p(40, 0.75);
        let s = double_gaussian_state(params, 1.0, 4).unwrap();
        let t = sx_eigenbasis(params);
        let v = sz_correlation_brute(&s, &t, 0.0).unwrap();
        assert!(v.re > 0.0);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn sz_oracle_bound() {
        let t = sx_eigenbasis(p(40, 0.75));
        assert!(matches!(SzCorrelator::new(&t, 39), Err(Error::Resource(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn overlap_is_bounded_and_hermitian(
            amps in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 61),
            t in -500.0f64..500.0,
        ) {
            prop_assume!(amps.iter().any(|x| x.0.abs() + x.1.abs() > 1e-3));
            let params = p(60, 0.9);
            let c = amps.iter().map(|&(r, i)| Complex64::new(r, i)).collect();
            let s = SxBasisState::normalized(params, c).unwrap();
            let fwd = overlap_exact(&s, t);
            let back = overlap_exact(&s, -t);
            prop_assert!(fwd.norm() <= 1.0 + 1e-9);
            prop_assert!((fwd - back.conj()).norm() < 1e-12);
            prop_assert!((evolve_phase(&s, t).norm_sqr() - 1.0).abs() < 1e-12);
        }
    }
}
