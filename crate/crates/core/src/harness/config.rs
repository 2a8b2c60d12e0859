//! Experiment configuration, read from JSON.
//!
//! ```json
//! {
//!   "task": "coverage",
//!   "n_grid": [4, 5],
//!   "params": { "pq": [[0.8, 0.2]] },
//!   "replicates": 500,
//!   "base_seed": 7,
//!   "level": { "prior_fraction": 0.1 },
//!   "k_n": { "fixed": 1 },
//!   "engine": "exact"
//! }
//! ```
//!
//! Omitted keys take the defaults of [`ExperimentConfig::default`].

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bounds::DEFAULT_CONTIGUITY_C;
use crate::error::{Error, Result};
use crate::graphmodel::{ModelParams, DEFAULT_ENUMERATION_CAP};
use crate::numeric::ln_num_assignments;
use crate::posterior::ChainConfig;
use crate::uncertainty::Construction;

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "PBM_OUTPUT_DIR";

/// Output directory used when neither the config nor the environment
/// names one.
pub const DEFAULT_OUTPUT_DIR: &str = "pbm-out";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Recovery,
    Detection,
    Coverage,
    BoundCheck,
    PosteriorDump,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Recovery => "recovery",
            Task::Detection => "detection",
            Task::Coverage => "coverage",
            Task::BoundCheck => "bound-check",
            Task::PosteriorDump => "posterior-dump",
        }
    }
}

/// Edge probabilities, either directly or through a sparse scaling in `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamSpec {
    /// `(p, q)` pairs.
    Pq(Vec<(f64, f64)>),
    /// `(a, b)` pairs with `p = a log(n) / n`, `q = b log(n) / n`.
    Ab(Vec<(f64, f64)>),
    /// `(c, d)` pairs with `p = c / n`, `q = d / n`.
    Cd(Vec<(f64, f64)>),
}

impl ParamSpec {
    pub fn len(&self) -> usize {
        match self {
            ParamSpec::Pq(v) | ParamSpec::Ab(v) | ParamSpec::Cd(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Model parameters for every pair at this `n`.
    pub fn resolve(&self, n: usize) -> Result<Vec<ModelParams>> {
        let build = |&(x, y): &(f64, f64)| match self {
            ParamSpec::Pq(_) => ModelParams::new(n, x, y),
            ParamSpec::Ab(_) => ModelParams::from_log_scaling(n, x, y),
            ParamSpec::Cd(_) => ModelParams::from_linear_scaling(n, x, y),
        };
        let pairs = match self {
            ParamSpec::Pq(v) | ParamSpec::Ab(v) | ParamSpec::Cd(v) => v,
        };
        pairs
            .iter()
            .map(|pair| {
                build(pair).map_err(|e| Error::Config(format!("at n = {n}, pair {pair:?}: {e}")))
            })
            .collect()
    }
}

/// Rule for the credible deficit `a_n`; the credible level is `1 - a_n`.
/// `b_n = 1/|Θ_n|` is the prior mass of a single assignment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelSchedule {
    Fixed(f64),
    /// `a_n = b_n / n`.
    PriorOverN,
    /// `a_n = b_n · fraction`.
    PriorFraction(f64),
}

impl LevelSchedule {
    pub fn deficit(&self, n: usize) -> f64 {
        let b_n = (-ln_num_assignments(n)).exp();
        match *self {
            LevelSchedule::Fixed(a) => a,
            LevelSchedule::PriorOverN => b_n / n as f64,
            LevelSchedule::PriorFraction(f) => b_n * f,
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            LevelSchedule::Fixed(a) => (0.0..1.0).contains(&a),
            LevelSchedule::PriorOverN => true,
            LevelSchedule::PriorFraction(f) => f >= 0.0 && f.is_finite(),
        };
        if !ok {
            return Err(Error::Config(format!("invalid level schedule {self:?}")));
        }
        Ok(())
    }
}

/// Rule for the enlargement radius `k_n`, clamped to `⌊n/2⌋`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KnRule {
    Fixed(usize),
    /// `⌈βn⌉`.
    Beta(f64),
    Zero,
    /// `⌈√n⌉`.
    Sqrt,
}

impl KnRule {
    pub fn k_n(&self, n: usize) -> usize {
        let raw = match *self {
            KnRule::Fixed(k) => k,
            KnRule::Beta(beta) => (beta * n as f64).ceil() as usize,
            KnRule::Zero => 0,
            KnRule::Sqrt => (n as f64).sqrt().ceil() as usize,
        };
        raw.min(n / 2)
    }

    fn validate(&self) -> Result<()> {
        if let KnRule::Beta(beta) = *self {
            if !(beta > 0.0 && beta < 1.0) {
                return Err(Error::Config(format!(
                    "k_n beta = {beta} must lie in (0, 1)"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EngineKind {
    Exact,
    Mcmc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub task: Task,
    pub n_grid: Vec<usize>,
    pub params: ParamSpec,
    pub replicates: u64,
    /// Replicate `r` uses seed `base_seed + r`.
    pub base_seed: u64,
    /// Use the block assignment as `θ0` in every replicate instead of a
    /// uniform draw.
    pub fixed_theta0: bool,
    pub level: LevelSchedule,
    pub k_n: KnRule,
    pub engine: EngineKind,
    /// Chain settings for the MCMC engine; its `seed` field is replaced by
    /// the replicate seed.
    pub chain: ChainConfig,
    pub credible: Construction,
    pub output_dir: Option<PathBuf>,
    /// Only `"chacha8"` is supported.
    pub rng: String,
    pub enumeration_cap: u64,
    #[serde(rename = "C")]
    pub contiguity_c: f64,
    pub delta: f64,
    #[serde(rename = "A")]
    pub dyer_frieze_a: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            task: Task::Recovery,
            n_grid: vec![4],
            params: ParamSpec::Pq(vec![(0.8, 0.2)]),
            replicates: 100,
            base_seed: 0,
            fixed_theta0: false,
            level: LevelSchedule::PriorFraction(0.1),
            k_n: KnRule::Sqrt,
            engine: EngineKind::Exact,
            chain: ChainConfig::default(),
            credible: Construction::MinimalOrder,
            output_dir: None,
            rng: "chacha8".into(),
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            contiguity_c: DEFAULT_CONTIGUITY_C,
            delta: 0.1,
            dyer_frieze_a: 1.0,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Checks everything that does not depend on running a cell, including
    /// that every derived `(p, q)` lies in `[0, 1]`.
    pub fn validate(&self) -> Result<()> {
        if self.n_grid.is_empty() || self.n_grid.contains(&0) {
            return Err(Error::Config("n_grid must list positive integers".into()));
        }
        if self.params.is_empty() {
            return Err(Error::Config("params must list at least one pair".into()));
        }
        if self.replicates == 0 && self.task != Task::BoundCheck {
            return Err(Error::Config("replicates must be positive".into()));
        }
        if self.rng != "chacha8" {
            return Err(Error::Config(format!(
                "unsupported rng {:?}; only \"chacha8\" is available",
                self.rng
            )));
        }
        if self.contiguity_c.is_nan() || self.contiguity_c <= 1.0 {
            return Err(Error::Config(format!(
                "C = {} must exceed 1",
                self.contiguity_c
            )));
        }
        if self.delta.is_nan() || self.delta <= 0.0 {
            return Err(Error::Config(format!(
                "delta = {} must be positive",
                self.delta
            )));
        }
        self.level.validate()?;
        self.k_n.validate()?;
        if self.engine == EngineKind::Mcmc {
            self.chain.validate()?;
            if self.n_grid.contains(&1) {
                return Err(Error::Config("the MCMC engine needs n >= 2".into()));
            }
        }
        for &n in &self.n_grid {
            self.params.resolve(n)?;
        }
        Ok(())
    }

    /// `output_dir`, else the environment variable, else [`DEFAULT_OUTPUT_DIR`].
    pub fn resolved_output_dir(&self) -> PathBuf {
        self.output_dir
            .clone()
            .or_else(|| std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR))
    }

    pub fn replicate_seed(&self, replicate: u64) -> u64 {
        self.base_seed.wrapping_add(replicate)
    }
}
