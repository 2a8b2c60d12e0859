//! Log-likelihoods and likelihood ratios, with `0 log 0 = 0` and
//! `log 0 = -inf`.

use super::assignment::{k_distance, ClassAssignment};
use super::graph::{suff_stats, Graph};
use super::params::ModelParams;
use crate::error::{Error, Result};
use crate::numeric::xlogy;

/// Log-likelihood as a function of the within/between edge counts.
pub fn log_likelihood_from_counts(params: &ModelParams, within: u64, between: u64) -> f64 {
    let (p, q) = (params.p(), params.q());
    if p == q {
        // Erdős–Rényi submodel: keep the value bit-identical across assignments.
        let edges = within + between;
        let pairs = params.within_pairs() + params.between_pairs();
        return xlogy(edges, p) + xlogy(pairs - edges, 1.0 - p);
    }
    xlogy(within, p)
        + xlogy(params.within_pairs() - within, 1.0 - p)
        + xlogy(between, q)
        + xlogy(params.between_pairs() - between, 1.0 - q)
}

pub fn log_likelihood(graph: &Graph, theta: &ClassAssignment, params: &ModelParams) -> Result<f64> {
    check_n(params.n(), graph.n())?;
    let s = suff_stats(graph, theta)?;
    Ok(log_likelihood_from_counts(params, s.within, s.between))
}

/// `λ = log((1-p)/p · q/(1-q))`, the log of the per-edge factor of the
/// likelihood ratio. Zero when `p == q`; `±inf` at boundary points.
pub fn log_odds_gap(p: f64, q: f64) -> f64 {
    if p == q {
        return 0.0;
    }
    // grouped so that swapping p and q negates the result exactly
    ((1.0 - p).ln() + q.ln()) - (p.ln() + (1.0 - q).ln())
}

/// Pairs whose class relation differs between `theta0` and `theta`, with
/// their observed edge counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExchangeSets {
    /// Same class under `theta0`, different under `theta`.
    pub within_to_between: Vec<(usize, usize)>,
    /// Different class under `theta0`, same under `theta`.
    pub between_to_within: Vec<(usize, usize)>,
    /// Edges of the graph in `within_to_between`.
    pub s: u64,
    /// Edges of the graph in `between_to_within`.
    pub t: u64,
}

pub fn exchange_sets(
    graph: &Graph,
    theta: &ClassAssignment,
    theta0: &ClassAssignment,
) -> Result<ExchangeSets> {
    check_n(theta.n(), theta0.n())?;
    check_n(graph.n(), theta.n())?;
    let mut out = ExchangeSets {
        within_to_between: Vec::new(),
        between_to_within: Vec::new(),
        s: 0,
        t: 0,
    };
    let m = graph.vertex_count();
    for i in 0..m {
        for j in i + 1..m {
            let same0 = theta0.class_of(i) == theta0.class_of(j);
            let same = theta.class_of(i) == theta.class_of(j);
            let edge = graph.has_edge(i, j) as u64;
            match (same0, same) {
                (true, false) => {
                    out.within_to_between.push((i, j));
                    out.s += edge;
                }
                (false, true) => {
                    out.between_to_within.push((i, j));
                    out.t += edge;
                }
                _ => {}
            }
        }
    }
    debug_assert_eq!(out.within_to_between.len(), {
        let k = k_distance(theta, theta0).unwrap_or(0);
        2 * k * (theta.n() - k)
    });
    Ok(out)
}

/// `log(p_θ / p_θ0)(X)`.
///
/// For interior `(p, q)` this is `(S - T) λ` over the exchange sets. At
/// boundary points it is the log-likelihood difference, taken as `-inf`
/// whenever the graph is impossible under `theta0` (the ratio is the density
/// of the `P_θ0`-absolutely-continuous part of `P_θ`).
pub fn log_likelihood_ratio(
    graph: &Graph,
    theta: &ClassAssignment,
    theta0: &ClassAssignment,
    params: &ModelParams,
) -> Result<f64> {
    check_n(params.n(), graph.n())?;
    if params.is_interior() {
        let sets = exchange_sets(graph, theta, theta0)?;
        if sets.s == sets.t {
            return Ok(0.0);
        }
        let diff = sets.s as f64 - sets.t as f64;
        return Ok(diff * log_odds_gap(params.p(), params.q()));
    }
    let base = log_likelihood(graph, theta0, params)?;
    if base == f64::NEG_INFINITY {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(log_likelihood(graph, theta, params)? - base)
}

fn check_n(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::DimensionMismatch { left, right });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphmodel::enumerate_assignments;

    #[test]
    fn erdos_renyi_likelihood_is_constant() {
        let m = ModelParams::new(3, 0.5, 0.5).unwrap();
        let g = Graph::from_edges(3, [(0, 1), (2, 5), (3, 4)]).unwrap();
        let expected = 15.0 * 0.5f64.ln();
        for theta in enumerate_assignments(3).unwrap() {
            let ll = log_likelihood(&g, &theta, &m).unwrap();
            assert!((ll - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn boundary_likelihoods() {
        let theta = ClassAssignment::block(3);
        let m = ModelParams::new(3, 1.0, 0.0).unwrap();
        let cliques = Graph::class_cliques(&theta);
        assert_eq!(log_likelihood(&cliques, &theta, &m).unwrap(), 0.0);
        let mut edges: Vec<_> = cliques.edges().collect();
        edges.push((0, 5));
        let spoiled = Graph::from_edges(3, edges).unwrap();
        assert_eq!(
            log_likelihood(&spoiled, &theta, &m).unwrap(),
            f64::NEG_INFINITY
        );
    }

    #[test]
    fn ratio_examples() {
        let theta0 = ClassAssignment::block(3);
        let theta: ClassAssignment = "010011".parse().unwrap();
        let g = Graph::from_edges(3, [(0, 1), (1, 2), (2, 4), (3, 5)]).unwrap();
        let m = ModelParams::new(3, 0.7, 0.2).unwrap();
        assert_eq!(log_likelihood_ratio(&g, &theta0, &theta0, &m).unwrap(), 0.0);
        let eq = ModelParams::new(3, 0.3, 0.3).unwrap();
        assert_eq!(log_likelihood_ratio(&g, &theta, &theta0, &eq).unwrap(), 0.0);
        let direct =
            log_likelihood(&g, &theta, &m).unwrap() - log_likelihood(&g, &theta0, &m).unwrap();
        let ratio = log_likelihood_ratio(&g, &theta, &theta0, &m).unwrap();
        assert!((direct - ratio).abs() < 1e-12);
    }

    #[test]
    fn boundary_ratio_convention() {
        let theta0 = ClassAssignment::block(2);
        let theta: ClassAssignment = "0101".parse().unwrap();
        let m = ModelParams::new(2, 1.0, 0.0).unwrap();
        let g = Graph::class_cliques(&theta);
        // impossible under theta0, certain under theta
        assert_eq!(
            log_likelihood_ratio(&g, &theta, &theta0, &m).unwrap(),
            f64::NEG_INFINITY
        );
        assert_eq!(
            log_likelihood_ratio(&g, &theta0, &theta, &m).unwrap(),
            f64::NEG_INFINITY
        );
        assert_eq!(log_likelihood_ratio(&g, &theta, &theta, &m).unwrap(), 0.0);
    }

    #[test]
    fn log_odds_gap_values() {
        assert_eq!(log_odds_gap(0.4, 0.4), 0.0);
        assert!((log_odds_gap(0.8, 0.2) - 2.0 * 0.25f64.ln()).abs() < 1e-12);
        assert_eq!(log_odds_gap(1.0, 0.0), f64::NEG_INFINITY);
        assert_eq!(log_odds_gap(0.0, 1.0), f64::INFINITY);
    }
}
