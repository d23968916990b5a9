//! One function per subcommand. Every function validates the whole config before it
//! starts computing and returns its tables in a fixed row order.

use logcrystal_core::dynamics::{
    base_period, extract_period, extract_period_from, log_period, overlap_exact, time_grid,
    OverlapSeries, DEFAULT_SAMPLES_PER_PERIOD,
};
use logcrystal_core::hom::{sample_shots, swap_from_parity, time_crystal_readout};
use logcrystal_core::meanfield::{landscape_grid, minimum_energy, minimum_locus};
use logcrystal_core::phasespace::husimi;
use logcrystal_core::spectrum::{
    energy_level, gap_to_ground, ground_index, m1_offset, neighbor_gap, quasi_ground_set,
    ModelParams,
};
use logcrystal_core::states::{double_gaussian_state, sx_eigenbasis, two_level_state};
use logcrystal_core::{Error, SxBasisState};
use serde_json::json;

use crate::config::{RunConfig, StateKind};
use crate::error::CliError;
use crate::output::{Cell, Table};

/// Tables produced by a command: the main one, plus an optional companion written next to it.
#[derive(Debug, Clone)]
pub struct Output {
    pub main: Table,
    /// `(file-name infix, table)`.
    pub companion: Option<(&'static str, Table)>,
}

impl From<Table> for Output {
    fn from(main: Table) -> Self {
        Self {
            main,
            companion: None,
        }
    }
}

fn float(v: f64) -> Cell {
    Cell::Float(v)
}

pub fn spectrum(config: &RunConfig) -> Result<Output, CliError> {
    let params = config.params()?;
    let m0 = ground_index(&params);
    let quasi = match quasi_ground_set(&params, config.spectrum.delta) {
        Ok(set) => set,
        // Below the transition only the ground level is (trivially) quasi-degenerate.
        Err(Error::Regime(_)) => vec![m0],
        Err(e) => return Err(CliError::at("spectrum.delta")(e)),
    };
    let mut table = Table::new(vec![
        "m",
        "E_m",
        "neighbor_gap",
        "gap_to_ground",
        "in_quasi_set",
    ]);
    for m in params.levels() {
        let gap = neighbor_gap(&params, m).map(float).unwrap_or(Cell::Missing);
        table.push(vec![
            Cell::Level(m),
            float(energy_level(&params, m)?),
            gap,
            float(gap_to_ground(&params, m)?),
            Cell::Bool(quasi.binary_search(&m).is_ok()),
        ]);
    }
    table.footer = Some(json!({
        "m0": m0.value(),
        "quasi_ground_levels": quasi.len(),
    }));
    Ok(table.into())
}

/// The configured initial state, its partner offset, and the packet width used by the
/// closed form (zero for the two-level state).
fn prepared_state(
    config: &RunConfig,
    params: &ModelParams,
) -> Result<(SxBasisState, i64, f64), CliError> {
    if !params.degenerate() {
        return Err(CliError::config(
            "model.gamma",
            format!(
                "gamma = {} must exceed 1/2 for a time-crystal state",
                params.gamma()
            ),
        ));
    }
    config.check_sigma()?;
    let offset = match config.state.m1_offset {
        Some(d) => d,
        None => m1_offset(params, config.log_base()?).map_err(CliError::at("state.m1_offset"))?,
    };
    let (state, sigma) = match config.state.kind {
        StateKind::TwoLevel => (
            two_level_state(*params, offset).map_err(CliError::at("state.m1_offset"))?,
            0.0,
        ),
        StateKind::DoubleGaussian => {
            let sigma = config.state.sigma;
            let state = double_gaussian_state(*params, sigma, offset).map_err(|e| match e {
                Error::Validation(_) => CliError::at("state.sigma")(e),
                other => CliError::at("state.m1_offset")(other),
            })?;
            (state, sigma)
        }
    };
    base_period(params, offset).map_err(CliError::at("state.m1_offset"))?;
    Ok((state, offset, sigma))
}

pub fn dynamics(config: &RunConfig) -> Result<Output, CliError> {
    let params = config.params()?;
    config.check_time()?;
    let (state, offset, sigma) = prepared_state(config, &params)?;
    let base = base_period(&params, offset)?;
    let t_max = config.time.t_max.unwrap_or(10.0 * log_period(&params));
    let samples = config
        .time
        .samples
        .unwrap_or((t_max / base).ceil() as usize * DEFAULT_SAMPLES_PER_PERIOD + 1);
    let series = OverlapSeries::compute(&state, sigma, offset, &time_grid(t_max, samples))?;
    let mut table = Table::new(vec![
        "t",
        "re_exact",
        "im_exact",
        "abs2_exact",
        "re_cf",
        "im_cf",
        "abs2_cf",
        "T_of_t",
        "Sigma_of_t",
        "absA",
    ]);
    for s in &series.samples {
        table.push(vec![
            float(s.t),
            float(s.exact.re),
            float(s.exact.im),
            float(s.exact.norm_sqr()),
            float(s.closed_form.re),
            float(s.closed_form.im),
            float(s.closed_form.norm_sqr()),
            float(s.envelope.period),
            float(s.envelope.width),
            float(s.envelope.amplitude.norm()),
        ]);
    }
    let period = match extract_period(&series) {
        Ok(t) => Some(t),
        Err(e) => {
            eprintln!("warning: {e}");
            None
        }
    };
    let m0 = ground_index(&params);
    table.footer = Some(json!({
        "period": period,
        "base_period": base,
        "log_period": log_period(&params),
        "max_abs_deviation": series.max_abs_deviation(),
        "m0": m0.value(),
        "m1": m0.shifted(-offset).value(),
    }));
    Ok(table.into())
}

pub fn landscape(config: &RunConfig) -> Result<Output, CliError> {
    let params = config.params()?;
    config.check_grid()?;
    let gamma = params.gamma();
    let grid = landscape_grid(gamma, config.grid.n_q, config.grid.n_p)?;
    let mut table = Table::new(vec!["Q", "P", "H"]);
    for ((i, j), v) in grid.values.indexed_iter() {
        table.push(vec![float(grid.q[i]), float(grid.p[j]), float(*v)]);
    }
    let (i, j, min) = grid.argmin();
    table.footer = Some(json!({
        "min": min,
        "argmin_Q": grid.q[i],
        "argmin_P": grid.p[j],
        "analytic_min": minimum_energy(gamma),
    }));
    Ok(table.into())
}

pub fn husimi_grid(config: &RunConfig) -> Result<Output, CliError> {
    let params = config.params()?;
    config.check_grid()?;
    let level = config.level()?.unwrap_or_else(|| ground_index(&params));
    params.index_of(level).map_err(CliError::at("grid.level"))?;
    let transform = sx_eigenbasis(params);
    let grid = husimi(&params, level, &transform, config.grid.n_q, config.grid.n_p)?;
    let mut table = Table::new(vec!["Q", "P", "value"]);
    for ((i, j), v) in grid.values.indexed_iter() {
        table.push(vec![float(grid.q[i]), float(grid.p[j]), float(*v)]);
    }
    let (i, j, peak) = grid.argmax();
    let distance = grid.locus_distance();
    let near: f64 = grid
        .values
        .iter()
        .zip(distance.iter())
        .filter(|(_, d)| **d <= 3.0)
        .map(|(v, _)| v)
        .sum();
    table.footer = Some(json!({
        "level": level.value(),
        "argmax_Q": grid.q[i],
        "argmax_P": grid.p[j],
        "max": peak,
        "argmax_locus_distance_cells": distance[[i, j]],
        "mass_within_3_cells": near / grid.total(),
    }));
    let mut locus = Table::new(vec!["Q", "P"]);
    for point in minimum_locus(params.gamma(), 2 * config.grid.n_p) {
        locus.push(vec![float(point.q()), float(point.p())]);
    }
    Ok(Output {
        main: table,
        companion: Some(("locus", locus)),
    })
}

/// Seed of the Monte Carlo stream for time sample `row`.
pub fn row_seed(seed: u64, row: usize) -> u64 {
    seed.wrapping_add((row as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

pub fn hom(config: &RunConfig) -> Result<Output, CliError> {
    let params = config.params()?;
    config.check_time()?;
    if config.hom.shots == 0 {
        return Err(CliError::config("hom.shots", "must be at least 1"));
    }
    let (state, _, _) = prepared_state(config, &params)?;
    if params.n() > config.hom.bound {
        return Err(CliError::Resource(format!(
            "N = {} exceeds the exact two-copy bound hom.bound = {}; lower model.n or raise hom.bound \
             (memory and time grow like N^3)",
            params.n(),
            config.hom.bound
        )));
    }
    let t_max = config.time.t_max.unwrap_or(4.0 * log_period(&params));
    let samples = config.time.samples.unwrap_or(64);
    let times = time_grid(t_max, samples);
    let transform = sx_eigenbasis(params);
    let mut table = Table::new(vec!["t", "exact_V", "mc_mean", "mc_stderr", "abs2_overlap"]);
    let mut column = Vec::with_capacity(times.len());
    for (row, &t) in times.iter().enumerate() {
        let outcomes = time_crystal_readout(&state, &transform, t, config.hom.bound)?;
        let exact_v = swap_from_parity(outcomes.parity_plus());
        let est = sample_shots(&outcomes, config.hom.shots, row_seed(config.hom.seed, row))?;
        table.push(vec![
            float(t),
            float(exact_v),
            float(est.mean),
            float(est.std_error),
            float(overlap_exact(&state, t).norm_sqr()),
        ]);
        column.push(exact_v);
    }
    let period = match extract_period_from(&times, &column) {
        Ok(t) => Some(t),
        Err(e) => {
            eprintln!("warning: {e}");
            None
        }
    };
    table.footer = Some(json!({
        "period": period,
        "log_period": log_period(&params),
    }));
    Ok(table.into())
}
