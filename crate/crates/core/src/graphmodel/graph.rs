use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::assignment::{valid_mask, words_for, ClassAssignment};
use super::params::ModelParams;
use crate::error::{Error, Result};

/// Undirected simple graph on `2n` labelled vertices, stored as packed
/// adjacency rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words_per_row: usize,
    rows: Vec<u64>,
    edge_count: u64,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        assert!(n > 0, "n must be positive");
        let words_per_row = words_for(n);
        Self {
            n,
            words_per_row,
            rows: vec![0; 2 * n * words_per_row],
            edge_count: 0,
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for i in 0..2 * n {
            for j in i + 1..2 * n {
                g.insert(i, j);
            }
        }
        g
    }

    /// Builds a graph from unordered vertex pairs. Duplicates are merged;
    /// loops and out-of-range vertices are rejected.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parameter("n must be positive".into()));
        }
        let mut g = Self::empty(n);
        for (i, j) in edges {
            if i == j {
                return Err(Error::Parameter(format!("self-loop at vertex {i}")));
            }
            if i >= 2 * n || j >= 2 * n {
                return Err(Error::Parameter(format!(
                    "edge ({i}, {j}) out of range for {} vertices",
                    2 * n
                )));
            }
            if !g.has_edge(i, j) {
                g.insert(i, j);
            }
        }
        Ok(g)
    }

    /// The two disjoint `n`-cliques induced by the classes of `theta`.
    pub fn class_cliques(theta: &ClassAssignment) -> Self {
        let n = theta.n();
        let mut g = Self::empty(n);
        for i in 0..2 * n {
            for j in i + 1..2 * n {
                if theta.class_of(i) == theta.class_of(j) {
                    g.insert(i, j);
                }
            }
        }
        g
    }

    fn insert(&mut self, i: usize, j: usize) {
        self.rows[i * self.words_per_row + j / 64] |= 1 << (j % 64);
        self.rows[j * self.words_per_row + i / 64] |= 1 << (i % 64);
        self.edge_count += 1;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.n
    }

    pub fn edge_count(&self) -> u64 {
        self.edge_count
    }

    /// `(2n)(2n-1)/2 = 2n^2 - n`.
    pub fn pair_count(&self) -> u64 {
        (2 * self.n * self.n - self.n) as u64
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        (self.rows[i * self.words_per_row + j / 64] >> (j % 64)) & 1 == 1
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.rows[i * self.words_per_row..(i + 1) * self.words_per_row]
    }

    /// Edges as `(i, j)` with `i < j`, in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..2 * self.n).flat_map(move |i| {
            (i + 1..2 * self.n)
                .filter(move |&j| self.has_edge(i, j))
                .map(move |j| (i, j))
        })
    }

    /// Number of neighbours of `v` in class 1 of `theta`, and in class 0.
    #[inline]
    pub(crate) fn class_degrees(&self, v: usize, class_words: &[u64]) -> (u32, u32) {
        let mut ones = 0;
        let mut zeros = 0;
        for (w, (&row, &cls)) in self.row(v).iter().zip(class_words).enumerate() {
            ones += (row & cls).count_ones();
            zeros += (row & !cls & valid_mask(self.n, w)).count_ones();
        }
        (ones, zeros)
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("vertices", &(2 * self.n))
            .field("edges", &self.edge_count)
            .finish()
    }
}

/// Edge counts of a graph split by a class assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuffStats {
    pub within: u64,
    pub between: u64,
    pub within_pairs: u64,
    pub between_pairs: u64,
}

pub fn suff_stats(graph: &Graph, theta: &ClassAssignment) -> Result<SuffStats> {
    if graph.n != theta.n() {
        return Err(Error::DimensionMismatch {
            left: graph.n,
            right: theta.n(),
        });
    }
    let cls = theta.words();
    let mut twice_within = 0u64;
    for v in 0..2 * graph.n {
        let (ones, zeros) = graph.class_degrees(v, cls);
        twice_within += if theta.class_of(v) == 1 { ones } else { zeros } as u64;
    }
    let within = twice_within / 2;
    let n = graph.n as u64;
    Ok(SuffStats {
        within,
        between: graph.edge_count - within,
        within_pairs: n * (n - 1),
        between_pairs: n * n,
    })
}

/// Draws a graph from the planted bi-section model with truth `theta0`.
///
/// Pairs are visited row-major over `i < j` and each consumes one uniform
/// draw from a ChaCha8 stream seeded with `seed`, so the graph is a pure
/// function of `(params, theta0, seed)`.
pub fn sample_graph(params: &ModelParams, theta0: &ClassAssignment, seed: u64) -> Result<Graph> {
    let n = params.n();
    if n != theta0.n() {
        return Err(Error::DimensionMismatch {
            left: n,
            right: theta0.n(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::empty(n);
    for i in 0..2 * n {
        for j in i + 1..2 * n {
            let prob = if theta0.class_of(i) == theta0.class_of(j) {
                params.p()
            } else {
                params.q()
            };
            if rng.gen::<f64>() < prob {
                g.insert(i, j);
            }
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_extremes() {
        let theta = ClassAssignment::canonicalize(&[0, 1, 1, 0, 1, 0]).unwrap();
        let m = ModelParams::new(3, 1.0, 0.0).unwrap();
        assert_eq!(
            sample_graph(&m, &theta, 9).unwrap(),
            Graph::class_cliques(&theta)
        );
        let m = ModelParams::new(3, 1.0, 1.0).unwrap();
        assert_eq!(sample_graph(&m, &theta, 9).unwrap(), Graph::complete(3));
        let m = ModelParams::new(3, 0.0, 0.0).unwrap();
        assert_eq!(sample_graph(&m, &theta, 9).unwrap(), Graph::empty(3));
    }

    #[test]
    fn same_seed_same_graph() {
        let theta = ClassAssignment::block(8);
        let m = ModelParams::new(8, 0.4, 0.2).unwrap();
        let a = sample_graph(&m, &theta, 77).unwrap();
        let b = sample_graph(&m, &theta, 77).unwrap();
        let c = sample_graph(&m, &theta, 78).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn suff_stats_examples() {
        let theta = ClassAssignment::canonicalize(&[0, 1, 0, 1, 1, 0, 0, 1]).unwrap();
        let s = suff_stats(&Graph::complete(4), &theta).unwrap();
        assert_eq!((s.within, s.between), (12, 16));
        let s = suff_stats(&Graph::empty(4), &theta).unwrap();
        assert_eq!((s.within, s.between), (0, 0));
        let s = suff_stats(&Graph::class_cliques(&theta), &theta).unwrap();
        assert_eq!((s.within, s.between), (12, 0));
        assert!(suff_stats(&Graph::empty(3), &theta).is_err());
    }

    #[test]
    fn suff_stats_across_words() {
        let theta = ClassAssignment::block(40);
        let g = Graph::class_cliques(&theta);
        let s = suff_stats(&g, &theta).unwrap();
        assert_eq!((s.within, s.between), (40 * 39, 0));
        let other =
            ClassAssignment::canonicalize(&(0..80).map(|i| (i % 2) as u8).collect::<Vec<_>>())
                .unwrap();
        let s = suff_stats(&g, &other).unwrap();
        assert_eq!(s.within + s.between, g.edge_count());
        let brute = g
            .edges()
            .filter(|&(i, j)| other.class_of(i) == other.class_of(j))
            .count() as u64;
        assert_eq!(s.within, brute);
    }

    #[test]
    fn from_edges_validation() {
        assert!(Graph::from_edges(2, [(0, 0)]).is_err());
        assert!(Graph::from_edges(2, [(0, 4)]).is_err());
        let g = Graph::from_edges(2, [(0, 1), (1, 0), (2, 3)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (2, 3)]);
        assert_eq!(g.pair_count(), 6);
    }
}
