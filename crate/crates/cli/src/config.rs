//! Run configuration: a JSON file, defaults for anything it omits, and flag overrides.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use logcrystal_core::spectrum::{LevelIndex, LogBase, ModelParams};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum StateKind {
    TwoLevel,
    DoubleGaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelConfig {
    pub n: usize,
    pub gamma: f64,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            n: 440,
            gamma: 0.75,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StateConfig {
    pub kind: StateKind,
    /// Packet width; ignored for the two-level state.
    pub sigma: f64,
    /// `m0 - m1`; `floor(sqrt(N / log N))` when absent.
    pub m1_offset: Option<i64>,
    pub log_base: String,
}

impl Default for StateConfig {
    fn default() -> Self {
        Self {
            kind: StateKind::DoubleGaussian,
            sigma: 1.0,
            m1_offset: None,
            log_base: "e".into(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TimeConfig {
    /// Defaults depend on the command; see the README.
    pub t_max: Option<f64>,
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    #[serde(rename = "nQ")]
    pub n_q: usize,
    #[serde(rename = "nP")]
    pub n_p: usize,
    /// Level shown by `husimi`; the ground level when absent.
    pub level: Option<f64>,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            n_q: 200,
            n_p: 200,
            level: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HomConfig {
    pub shots: u64,
    pub seed: u64,
    /// Largest `N` simulated exactly.
    pub bound: usize,
}

impl Default for HomConfig {
    fn default() -> Self {
        Self {
            shots: 10_000,
            seed: 0,
            bound: logcrystal_core::hom::DEFAULT_HOM_BOUND,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumConfig {
    /// Exponent in the quasi-ground window `|m - m0| <= N^(1/2 - delta)`.
    pub delta: f64,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        Self { delta: 0.3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    pub format: Format,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            path: None,
            format: Format::Csv,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelConfig,
    pub state: StateConfig,
    pub time: TimeConfig,
    pub grid: GridConfig,
    pub hom: HomConfig,
    pub spectrum: SpectrumConfig,
    pub output: OutputConfig,
}

/// Flags shared by every subcommand. Each one overrides the matching config field.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// JSON config file; flags win over its values.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Particle number N.
    #[arg(long)]
    pub n: Option<usize>,
    /// Interaction strength gamma.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Initial state for `dynamics` and `hom`.
    #[arg(long, value_enum)]
    pub state: Option<StateKind>,
    /// Gaussian packet width.
    #[arg(long)]
    pub sigma: Option<f64>,
    /// m0 - m1 (negative puts m1 above m0).
    #[arg(long, allow_hyphen_values = true)]
    pub offset: Option<i64>,
    /// Logarithm base for the default offset: e, 2, 10 or a number.
    #[arg(long)]
    pub log_base: Option<String>,
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Grid nodes along Q.
    #[arg(long)]
    pub nq: Option<usize>,
    /// Grid nodes along P.
    #[arg(long)]
    pub np: Option<usize>,
    /// Level m for `husimi` (half-integers allowed for odd N).
    #[arg(long, allow_hyphen_values = true)]
    pub level: Option<f64>,
    /// Quasi-ground window exponent for `spectrum`.
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub shots: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Worker threads (0 = one per core).
    #[arg(long, env = "LOGCRYSTAL_THREADS")]
    pub threads: Option<usize>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            CliError::config(
                if path == "." { "config".into() } else { path },
                e.into_inner().to_string(),
            )
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config("--config", format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Config file (if any), then flags.
    pub fn resolve(flags: &Overrides) -> Result<Self, CliError> {
        let mut config = match &flags.config {
            Some(path) => Self::load(path)?,
            None => Self::default(),
        };
        config.apply(flags);
        Ok(config)
    }

    pub fn apply(&mut self, flags: &Overrides) {
        fn set<T: Clone>(slot: &mut T, value: &Option<T>) {
            if let Some(v) = value {
                *slot = v.clone();
            }
        }
        set(&mut self.model.n, &flags.n);
        set(&mut self.model.gamma, &flags.gamma);
        set(&mut self.state.kind, &flags.state);
        set(&mut self.state.sigma, &flags.sigma);
        if flags.offset.is_some() {
            self.state.m1_offset = flags.offset;
        }
        set(&mut self.state.log_base, &flags.log_base);
        if flags.t_max.is_some() {
            self.time.t_max = flags.t_max;
        }
        if flags.samples.is_some() {
            self.time.samples = flags.samples;
        }
        set(&mut self.grid.n_q, &flags.nq);
        set(&mut self.grid.n_p, &flags.np);
        if flags.level.is_some() {
            self.grid.level = flags.level;
        }
        set(&mut self.spectrum.delta, &flags.delta);
        set(&mut self.hom.shots, &flags.shots);
        set(&mut self.hom.seed, &flags.seed);
        if flags.out.is_some() {
            self.output.path = flags.out.clone();
        }
        set(&mut self.output.format, &flags.format);
    }

    pub fn params(&self) -> Result<ModelParams, CliError> {
        if !(self.model.gamma.is_finite() && self.model.gamma >= 0.0) {
            return Err(CliError::config(
                "model.gamma",
                "must be finite and non-negative",
            ));
        }
        if self.model.n < 2 {
            return Err(CliError::config(
                "model.n",
                format!("must be at least 2, got {}", self.model.n),
            ));
        }
        ModelParams::new(self.model.n, self.model.gamma)
            .map_err(|e| CliError::config("model", e.to_string()))
    }

    pub fn log_base(&self) -> Result<LogBase, CliError> {
        LogBase::from_str(&self.state.log_base)
            .map_err(|e| CliError::config("state.log_base", e.to_string()))
    }

    pub fn level(&self) -> Result<Option<LevelIndex>, CliError> {
        let Some(m) = self.grid.level else {
            return Ok(None);
        };
        let twice = 2.0 * m;
        if !twice.is_finite() || twice.fract() != 0.0 {
            return Err(CliError::config(
                "grid.level",
                format!("{m} is not a multiple of 1/2"),
            ));
        }
        Ok(Some(LevelIndex::from_twice(twice as i64)))
    }

    /// Time grid bounds: `t_max > 0` and at least two samples.
    pub fn check_time(&self) -> Result<(), CliError> {
        if let Some(t) = self.time.t_max {
            if !(t.is_finite() && t > 0.0) {
                return Err(CliError::config(
                    "time.t_max",
                    format!("must be positive, got {t}"),
                ));
            }
        }
        if let Some(s) = self.time.samples {
            if s < 2 {
                return Err(CliError::config(
                    "time.samples",
                    format!("must be at least 2, got {s}"),
                ));
            }
        }
        Ok(())
    }

    pub fn check_grid(&self) -> Result<(), CliError> {
        for (path, v) in [("grid.nQ", self.grid.n_q), ("grid.nP", self.grid.n_p)] {
            if v < 16 {
                return Err(CliError::config(
                    path,
                    format!("must be at least 16, got {v}"),
                ));
            }
        }
        Ok(())
    }

    pub fn check_sigma(&self) -> Result<(), CliError> {
        let s = self.state.sigma;
        if !(s.is_finite() && s >= 0.0) {
            return Err(CliError::config(
                "state.sigma",
                format!("must be finite and non-negative, got {s}"),
            ));
        }
        Ok(())
    }
}
