use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphmodel::{
    enumerate_assignments_capped, log_likelihood, ClassAssignment, Graph, ModelParams,
    DEFAULT_ENUMERATION_CAP,
};
use crate::numeric::{ln_num_assignments, log_sum_exp};

/// Where a table's weights came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableSource {
    /// Full enumeration of `Θ_n` with exact weights.
    Exact,
    /// Relative frequencies of MCMC draws; only visited assignments appear.
    Empirical,
}

/// Posterior over `Θ_n` under the uniform prior, stored as log-weights
/// aligned with lexicographically sorted assignments.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorTable {
    n: usize,
    assignments: Vec<ClassAssignment>,
    log_weights: Vec<f64>,
    log_evidence: Option<f64>,
    source: TableSource,
}

impl PosteriorTable {
    /// Assembles a table from parts; `assignments` must be strictly sorted
    /// and share one `n`. Weights are renormalized unless they already sum
    /// to one within `1e-12`, so stored tables read back unchanged.
    pub fn from_log_weights(
        n: usize,
        assignments: Vec<ClassAssignment>,
        mut log_weights: Vec<f64>,
        source: TableSource,
    ) -> Result<Self> {
        if assignments.len() != log_weights.len() {
            return Err(Error::Parameter(format!(
                "{} assignments but {} weights",
                assignments.len(),
                log_weights.len()
            )));
        }
        if let Some(bad) = assignments.iter().find(|a| a.n() != n) {
            return Err(Error::DimensionMismatch {
                left: n,
                right: bad.n(),
            });
        }
        if !assignments.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Parameter(
                "assignments must be strictly increasing".into(),
            ));
        }
        let total = log_sum_exp(&log_weights);
        if !total.is_finite() {
            return Err(Error::UndefinedPosterior);
        }
        if total.abs() > 1e-12 {
            for w in &mut log_weights {
                *w -= total;
            }
        }
        Ok(Self {
            n,
            assignments,
            log_weights,
            log_evidence: None,
            source,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn assignments(&self) -> &[ClassAssignment] {
        &self.assignments
    }

    pub fn log_weights(&self) -> &[f64] {
        &self.log_weights
    }

    /// Log prior-predictive density of the observed graph; `None` for
    /// empirical tables and tables read back from disk.
    pub fn log_evidence(&self) -> Option<f64> {
        self.log_evidence
    }

    pub fn source(&self) -> TableSource {
        self.source
    }

    pub fn is_exact(&self) -> bool {
        self.source == TableSource::Exact
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ClassAssignment, f64)> {
        self.assignments
            .iter()
            .zip(self.log_weights.iter().copied())
    }

    pub fn index_of(&self, theta: &ClassAssignment) -> Option<usize> {
        self.assignments.binary_search(theta).ok()
    }

    /// Posterior log-mass of a single assignment (`-inf` if absent).
    pub fn log_weight_of(&self, theta: &ClassAssignment) -> f64 {
        self.index_of(theta)
            .map_or(f64::NEG_INFINITY, |i| self.log_weights[i])
    }

    pub fn weight_of(&self, theta: &ClassAssignment) -> f64 {
        self.log_weight_of(theta).exp()
    }
}

/// Exact posterior by enumerating `Θ_n` (default cap).
pub fn exact_posterior(graph: &Graph, params: &ModelParams) -> Result<PosteriorTable> {
    exact_posterior_capped(graph, params, DEFAULT_ENUMERATION_CAP)
}

pub fn exact_posterior_capped(
    graph: &Graph,
    params: &ModelParams,
    cap: u64,
) -> Result<PosteriorTable> {
    if graph.n() != params.n() {
        return Err(Error::DimensionMismatch {
            left: graph.n(),
            right: params.n(),
        });
    }
    let assignments = enumerate_assignments_capped(params.n(), cap)?;
    let log_lik: Vec<f64> = assignments
        .par_iter()
        .map(|theta| log_likelihood(graph, theta, params))
        .collect::<Result<_>>()?;
    // Sequential reduction keeps the result independent of thread count.
    let total = log_sum_exp(&log_lik);
    if total == f64::NEG_INFINITY {
        return Err(Error::UndefinedPosterior);
    }
    let log_weights = log_lik.iter().map(|&l| l - total).collect();
    Ok(PosteriorTable {
        n: params.n(),
        assignments,
        log_weights,
        log_evidence: Some(total - ln_num_assignments(params.n())),
        source: TableSource::Exact,
    })
}

/// Posterior mass of the assignments selected by `member`.
pub fn posterior_mass(table: &PosteriorTable, member: impl Fn(&ClassAssignment) -> bool) -> f64 {
    let selected: Vec<f64> = table
        .iter()
        .filter(|(a, _)| member(a))
        .map(|(_, w)| w)
        .collect();
    log_sum_exp(&selected).exp().min(1.0)
}

/// Posterior mass of an explicit set of assignments; duplicates count once.
pub fn posterior_mass_of(table: &PosteriorTable, subset: &[ClassAssignment]) -> f64 {
    let mut idx: Vec<usize> = subset.iter().filter_map(|a| table.index_of(a)).collect();
    idx.sort_unstable();
    idx.dedup();
    let selected: Vec<f64> = idx.iter().map(|&i| table.log_weights[i]).collect();
    log_sum_exp(&selected).exp().min(1.0)
}
