//! Point estimators and the overlap statistic.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::mcmc::{mh_sampler, ChainConfig};
use super::table::{exact_posterior, PosteriorTable};
use crate::error::{Error, Result};
use crate::graphmodel::{enumerate_assignments, suff_stats, ClassAssignment, Graph, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Exact,
    Mcmc(ChainConfig),
}

/// Highest-weight assignment; ties go to the lexicographically smallest.
pub fn map_from_table(table: &PosteriorTable) -> Option<&ClassAssignment> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &w) in table.log_weights().iter().enumerate() {
        if best.is_none_or(|(_, bw)| w > bw) {
            best = Some((i, w));
        }
    }
    best.map(|(i, _)| &table.assignments()[i])
}

/// Maximum a posteriori assignment. Under the uniform prior this is the
/// maximum-likelihood assignment.
pub fn map_estimate(
    graph: &Graph,
    params: &ModelParams,
    engine: &Engine,
) -> Result<ClassAssignment> {
    match engine {
        Engine::Exact => {
            let table = exact_posterior(graph, params)?;
            Ok(map_from_table(&table)
                .expect("exact tables are never empty")
                .clone())
        }
        Engine::Mcmc(cfg) => {
            let draws = mh_sampler(graph, params, cfg)?;
            draws
                .most_frequent()
                .cloned()
                .ok_or(Error::UndefinedPosterior)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BisectionMode {
    /// Exhaustive search over `Θ_n`.
    Exact,
    /// Kernighan–Lin passes from `restarts` random starts.
    Greedy { restarts: u32, seed: u64 },
}

/// Number of edges between the two classes of `theta`.
pub fn cut_size(graph: &Graph, theta: &ClassAssignment) -> Result<u64> {
    Ok(suff_stats(graph, theta)?.between)
}

/// Balanced partition with the fewest between-class edges. Ties go to the
/// lexicographically smallest assignment.
pub fn min_bisection_estimate(graph: &Graph, mode: BisectionMode) -> Result<ClassAssignment> {
    match mode {
        BisectionMode::Exact => {
            let mut best: Option<(ClassAssignment, u64)> = None;
            for theta in enumerate_assignments(graph.n())? {
                let cut = cut_size(graph, &theta)?;
                if best.as_ref().is_none_or(|(_, bc)| cut < *bc) {
                    best = Some((theta, cut));
                }
            }
            Ok(best.expect("Θ_n is never empty").0)
        }
        BisectionMode::Greedy { restarts, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut best: Option<(ClassAssignment, u64)> = None;
            for _ in 0..restarts.max(1) {
                let start = ClassAssignment::random(graph.n(), &mut rng);
                let local = kernighan_lin(graph, &start);
                let cut = cut_size(graph, &local)?;
                let better = match &best {
                    None => true,
                    Some((b, bc)) => cut < *bc || (cut == *bc && local < *b),
                };
                if better {
                    best = Some((local, cut));
                }
            }
            Ok(best.expect("at least one restart").0)
        }
    }
}

/// Kernighan–Lin refinement: each pass tentatively swaps the best unlocked
/// pair until all vertices are locked, then keeps the prefix of swaps with
/// the largest cumulative gain. Stops when a pass gains nothing.
pub fn kernighan_lin(graph: &Graph, start: &ClassAssignment) -> ClassAssignment {
    let m = graph.vertex_count();
    let n = graph.n();
    let mut side: Vec<u8> = start.bits().collect();
    loop {
        // d[v] = external - internal degree
        let mut d: Vec<i64> = (0..m)
            .map(|v| {
                (0..m)
                    .filter(|&w| w != v && graph.has_edge(v, w))
                    .map(|w| if side[w] == side[v] { -1 } else { 1 })
                    .sum()
            })
            .collect();
        let mut locked = vec![false; m];
        let mut swaps = Vec::with_capacity(n);
        let mut gains = Vec::with_capacity(n);
        for _ in 0..n {
            let mut best: Option<(i64, usize, usize)> = None;
            for a in (0..m).filter(|&a| side[a] == 0 && !locked[a]) {
                for b in (0..m).filter(|&b| side[b] == 1 && !locked[b]) {
                    let g = d[a] + d[b] - 2 * graph.has_edge(a, b) as i64;
                    if best.is_none_or(|(bg, _, _)| g > bg) {
                        best = Some((g, a, b));
                    }
                }
            }
            let Some((g, a, b)) = best else { break };
            locked[a] = true;
            locked[b] = true;
            for x in (0..m).filter(|&x| !locked[x]) {
                let ea = graph.has_edge(x, a) as i64;
                let eb = graph.has_edge(x, b) as i64;
                if side[x] == 0 {
                    d[x] += 2 * ea - 2 * eb;
                } else {
                    d[x] += 2 * eb - 2 * ea;
                }
            }
            swaps.push((a, b));
            gains.push(g);
        }
        let mut running = 0;
        let mut best_prefix = (0, 0);
        for (i, g) in gains.iter().enumerate() {
            running += g;
            if running > best_prefix.1 {
                best_prefix = (i + 1, running);
            }
        }
        if best_prefix.1 <= 0 {
            break;
        }
        for &(a, b) in &swaps[..best_prefix.0] {
            side.swap(a, b);
        }
    }
    ClassAssignment::canonicalize(&side).expect("swaps preserve balance")
}

/// Fraction of correctly classified vertices, `|Σ (-1)^θ̂_i (-1)^θ0_i| / 2n`.
/// Equals `1 - 2 k(θ̂, θ0) / n`.
pub fn overlap(theta_hat: &ClassAssignment, theta0: &ClassAssignment) -> Result<f64> {
    if theta_hat.n() != theta0.n() {
        return Err(Error::DimensionMismatch {
            left: theta_hat.n(),
            right: theta0.n(),
        });
    }
    let signed: i64 = theta_hat
        .bits()
        .zip(theta0.bits())
        .map(|(a, b)| if a == b { 1 } else { -1 })
        .sum();
    Ok(signed.unsigned_abs() as f64 / theta0.vertex_count() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphmodel::{enumerate_assignments, k_distance, sample_graph};

    #[test]
    fn clique_graph_estimates() {
        let theta0: ClassAssignment = "01101001".parse().unwrap();
        let g = Graph::class_cliques(&theta0);
        let m = ModelParams::new(4, 1.0, 0.0).unwrap();
        assert_eq!(map_estimate(&g, &m, &Engine::Exact).unwrap(), theta0);
        assert_eq!(
            min_bisection_estimate(&g, BisectionMode::Exact).unwrap(),
            theta0
        );
        let greedy = BisectionMode::Greedy {
            restarts: 5,
            seed: 1,
        };
        assert_eq!(min_bisection_estimate(&g, greedy).unwrap(), theta0);
        assert_eq!(cut_size(&g, &theta0).unwrap(), 0);
    }

    #[test]
    fn ties_break_lexicographically() {
        let g = Graph::complete(3);
        let smallest = enumerate_assignments(3).unwrap()[0].clone();
        assert_eq!(smallest.to_bit_string(), "000111");
        assert_eq!(
            min_bisection_estimate(&g, BisectionMode::Exact).unwrap(),
            smallest
        );
        let m = ModelParams::new(3, 0.3, 0.3).unwrap();
        let g = sample_graph(&m, &ClassAssignment::block(3), 8).unwrap();
        assert_eq!(map_estimate(&g, &m, &Engine::Exact).unwrap(), smallest);
    }

    #[test]
    fn greedy_matches_exact_small() {
        let m = ModelParams::new(3, 0.6, 0.3).unwrap();
        let g = sample_graph(&m, &ClassAssignment::block(3), 2024).unwrap();
        let exact = min_bisection_estimate(&g, BisectionMode::Exact).unwrap();
        let greedy = min_bisection_estimate(
            &g,
            BisectionMode::Greedy {
                restarts: 20,
                seed: 7,
            },
        )
        .unwrap();
        assert_eq!(
            cut_size(&g, &greedy).unwrap(),
            cut_size(&g, &exact).unwrap()
        );
        assert_eq!(greedy, exact);
    }

    #[test]
    fn overlap_examples() {
        let t0 = ClassAssignment::block(4);
        assert_eq!(overlap(&t0, &t0).unwrap(), 1.0);
        let one_swap: ClassAssignment = "00011011".parse().unwrap();
        assert_eq!(k_distance(&t0, &one_swap).unwrap(), 1);
        assert_eq!(overlap(&one_swap, &t0).unwrap(), 0.5);
        let half: ClassAssignment = "00111100".parse().unwrap();
        assert_eq!(k_distance(&t0, &half).unwrap(), 2);
        assert_eq!(overlap(&half, &t0).unwrap(), 0.0);
        assert!(overlap(&t0, &ClassAssignment::block(2)).is_err());
    }
}
