//! Metropolis–Hastings over balanced partitions with a pair-swap proposal.
//!
//! A move picks one vertex uniformly from each class and exchanges their
//! classes. The proposal is symmetric (both directions have probability
//! `1/n^2`) and keeps the chain inside `Θ_n`, so with the uniform prior the
//! acceptance probability is `min(1, p_θ'(X) / p_θ(X))`. The log-ratio is
//! computed from the `O(n)` pairs touching the two swapped vertices.

use std::collections::{BTreeMap, HashMap};

use rand::distributions::{Distribution, Uniform};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::table::{PosteriorTable, TableSource};
use crate::error::{Error, Result};
use crate::graphmodel::{
    log_likelihood_from_counts, suff_stats, ClassAssignment, Graph, ModelParams,
};

const CHAIN_STREAM: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ChainConfig {
    /// Total steps per chain, including burn-in.
    pub steps: u64,
    pub burn_in: u64,
    pub thin: u64,
    /// Chain `c` runs ChaCha8 seeded with `seed + c`, on its own stream.
    pub seed: u64,
    pub chains: u32,
}

impl Default for ChainConfig {
    fn default() -> Self {
        Self {
            steps: 1_000_000,
            burn_in: 100_000,
            thin: 10,
            seed: 0,
            chains: 4,
        }
    }
}

impl ChainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.steps == 0 || self.thin == 0 || self.chains == 0 {
            return Err(Error::Config(
                "steps, thin and chains must be positive".into(),
            ));
        }
        if self.burn_in >= self.steps {
            return Err(Error::Config(format!(
                "burn_in ({}) must be smaller than steps ({})",
                self.burn_in, self.steps
            )));
        }
        if self.thin > self.steps - self.burn_in {
            return Err(Error::Config(format!(
                "thin ({}) exceeds the post-burn-in length ({})",
                self.thin,
                self.steps - self.burn_in
            )));
        }
        Ok(())
    }

    /// Retained draws per chain.
    pub fn draws_per_chain(&self) -> u64 {
        (self.steps - self.burn_in).div_ceil(self.thin)
    }
}

/// Multiset of retained draws.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SampleSet {
    counts: BTreeMap<ClassAssignment, u64>,
    total: u64,
}

impl SampleSet {
    pub fn from_counts(counts: impl IntoIterator<Item = (ClassAssignment, u64)>) -> Self {
        let mut out = Self::default();
        for (a, c) in counts {
            out.add(a, c);
        }
        out
    }

    fn add(&mut self, a: ClassAssignment, count: u64) {
        if count > 0 {
            *self.counts.entry(a).or_insert(0) += count;
            self.total += count;
        }
    }

    pub fn merge(&mut self, other: SampleSet) {
        for (a, c) in other.counts {
            self.add(a, c);
        }
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    pub fn count_of(&self, theta: &ClassAssignment) -> u64 {
        self.counts.get(theta).copied().unwrap_or(0)
    }

    pub fn frequency(&self, theta: &ClassAssignment) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        self.count_of(theta) as f64 / self.total as f64
    }

    /// Draws in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (&ClassAssignment, u64)> {
        self.counts.iter().map(|(a, &c)| (a, c))
    }

    /// Most frequent draw; ties go to the lexicographically smallest.
    pub fn most_frequent(&self) -> Option<&ClassAssignment> {
        let mut best: Option<(&ClassAssignment, u64)> = None;
        for (a, &c) in &self.counts {
            if best.is_none_or(|(_, bc)| c > bc) {
                best = Some((a, c));
            }
        }
        best.map(|(a, _)| a)
    }

    /// Relative frequencies as an (approximate) posterior table over the
    /// visited assignments.
    pub fn to_empirical_table(&self) -> Result<PosteriorTable> {
        let n = self
            .counts
            .keys()
            .next()
            .map(ClassAssignment::n)
            .ok_or(Error::UndefinedPosterior)?;
        let total = (self.total as f64).ln();
        let (assignments, weights): (Vec<_>, Vec<_>) = self
            .counts
            .iter()
            .map(|(a, &c)| (a.clone(), (c as f64).ln() - total))
            .unzip();
        PosteriorTable::from_log_weights(n, assignments, weights, TableSource::Empirical)
    }
}

/// Log-likelihood change from exchanging the classes of `u` and `v` in
/// `theta` (which must lie in different classes).
pub fn swap_log_ratio(
    graph: &Graph,
    theta: &ClassAssignment,
    u: usize,
    v: usize,
    params: &ModelParams,
) -> Result<f64> {
    if graph.n() != theta.n() || params.n() != theta.n() {
        return Err(Error::DimensionMismatch {
            left: graph.n(),
            right: theta.n(),
        });
    }
    if theta.class_of(u) == theta.class_of(v) {
        return Err(Error::Parameter(format!(
            "vertices {u} and {v} are in the same class"
        )));
    }
    let s = suff_stats(graph, theta)?;
    let delta = within_delta(graph, theta.words(), u, v, theta.class_of(u));
    let within = (s.within as i64 + delta) as u64;
    let before = log_likelihood_from_counts(params, s.within, s.between);
    let after = log_likelihood_from_counts(params, within, graph.edge_count() - within);
    Ok(after - before)
}

/// Change in the within-class edge count when `u` (in `class_u`) and `v`
/// (in the other class) swap.
#[inline]
fn within_delta(graph: &Graph, class_words: &[u64], u: usize, v: usize, class_u: u8) -> i64 {
    let e = graph.has_edge(u, v) as i64;
    let (u_ones, u_zeros) = graph.class_degrees(u, class_words);
    let (v_ones, v_zeros) = graph.class_degrees(v, class_words);
    let (u_same, u_other, v_same, v_other) = if class_u == 0 {
        (u_zeros, u_ones, v_ones, v_zeros)
    } else {
        (u_ones, u_zeros, v_zeros, v_ones)
    };
    (u_other as i64 - e) - u_same as i64 + (v_other as i64 - e) - v_same as i64
}

/// Runs `cfg.chains` independent chains (chain `c` seeded with
/// `cfg.seed + c`, started from a uniform draw) and pools their draws.
pub fn mh_sampler(graph: &Graph, params: &ModelParams, cfg: &ChainConfig) -> Result<SampleSet> {
    cfg.validate()?;
    let sets: Vec<SampleSet> = (0..cfg.chains)
        .into_par_iter()
        .map(|c| run_chain(graph, params, cfg, c, None))
        .collect::<Result<_>>()?;
    let mut out = SampleSet::default();
    for s in sets {
        out.merge(s);
    }
    Ok(out)
}

/// A single chain. With `start = None` the initial state is drawn uniformly
/// from the chain's own stream.
///
/// While the current state has zero likelihood (possible only for boundary
/// `p, q`) every proposal is accepted, so the chain walks until it reaches
/// the support; afterwards zero-likelihood proposals are always rejected.
pub fn run_chain(
    graph: &Graph,
    params: &ModelParams,
    cfg: &ChainConfig,
    chain_index: u32,
    start: Option<&ClassAssignment>,
) -> Result<SampleSet> {
    cfg.validate()?;
    let n = params.n();
    if graph.n() != n {
        return Err(Error::DimensionMismatch {
            left: graph.n(),
            right: n,
        });
    }
    if n < 2 {
        return Err(Error::Parameter("the sampler needs n >= 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(chain_index as u64));
    // graph sampling uses stream 0 of the same seeds
    rng.set_stream(CHAIN_STREAM);
    let init = match start {
        Some(s) if s.n() != n => {
            return Err(Error::DimensionMismatch {
                left: n,
                right: s.n(),
            })
        }
        Some(s) => s.clone(),
        None => ClassAssignment::random(n, &mut rng),
    };

    let mut words = init.words().to_vec();
    let mut zeros = init.zero_class();
    let mut ones = init.one_class();
    let mut within = suff_stats(graph, &init)?.within;
    let edges = graph.edge_count();
    // the log-likelihood depends on the state only through `within`
    let max_within = edges.min(params.within_pairs());
    let min_within = edges.saturating_sub(params.between_pairs());
    let by_within: Vec<f64> = (min_within..=max_within)
        .map(|w| log_likelihood_from_counts(params, w, edges - w))
        .collect();
    let ll = |w: u64| by_within[(w - min_within) as usize];
    let mut log_lik = ll(within);

    let mut counts: HashMap<Vec<u64>, u64> = HashMap::new();
    let mut canon = words.clone();
    let pick = Uniform::new(0, n as u32);
    for step in 0..cfg.steps {
        let iu = pick.sample(&mut rng) as usize;
        let iv = pick.sample(&mut rng) as usize;
        let (u, v) = (zeros[iu], ones[iv]);
        let delta = within_delta(graph, &words, u, v, 0);
        let proposed_within = (within as i64 + delta) as u64;
        let proposed = ll(proposed_within);
        let accept = if log_lik == f64::NEG_INFINITY {
            true
        } else if proposed == f64::NEG_INFINITY {
            false
        } else {
            let log_ratio = proposed - log_lik;
            log_ratio >= 0.0 || rng.gen::<f64>().ln() < log_ratio
        };
        if accept {
            words[u / 64] ^= 1 << (u % 64);
            words[v / 64] ^= 1 << (v % 64);
            zeros[iu] = v;
            ones[iv] = u;
            within = proposed_within;
            log_lik = proposed;
        }
        if step >= cfg.burn_in && (step - cfg.burn_in).is_multiple_of(cfg.thin) {
            canonical_into(n, &words, &mut canon);
            match counts.get_mut(canon.as_slice()) {
                Some(c) => *c += 1,
                None => {
                    counts.insert(canon.clone(), 1);
                }
            }
        }
    }
    Ok(SampleSet::from_counts(counts.into_iter().map(|(w, c)| {
        (ClassAssignment::from_balanced_words(n, w), c)
    })))
}

fn canonical_into(n: usize, words: &[u64], out: &mut [u64]) {
    let flip = words[0] & 1 == 1;
    for (w, (o, &x)) in out.iter_mut().zip(words).enumerate() {
        *o = if flip {
            !x & crate::graphmodel::valid_mask_for(n, w)
        } else {
            x
        };
    }
}
