//! Shared helpers and reference values for the integration tests.
//!
//! The constants below were produced by `tests/oracles/oracle.py` (mpmath,
//! 50 digits) and are frozen here.

#![allow(dead_code)]

use planted_bisection::{ClassAssignment, Graph};

#[allow(clippy::excessive_precision)]
pub mod oracle {
    pub const MU_08_02: f64 = 0.36;
    pub const RHO_08_02: f64 = 0.0625;
    pub const LAMBDA_08_02: f64 = -2.7725887222397812;
    pub const MU_05_01: f64 = 0.2;
    pub const MU_07_01: f64 = 0.3850454583026496;
    pub const BHATT_09_01: f64 = 0.6;

    /// `(n, k, p, q, a_{n,k})`.
    pub const TEST_POWER: [(usize, usize, f64, f64, f64); 4] = [
        (2, 1, 0.8, 0.2, 0.4096),
        (4, 2, 0.7, 0.3, 0.2478758911082496),
        (10, 3, 0.6, 0.4, 0.1800494452733831),
        (50, 7, 0.3, 0.05, 3.193282659395778e-34),
    ];

    /// `(n, k_n, α)`.
    pub const ALPHA: [(usize, usize, f64); 3] = [
        (2, 1, 1.6),
        (10, 3, 40.626890959699867),
        (6, 2, 15.114503816793893),
    ];
    /// `d_n` at `n = 10, k_n = 3, p = 0.7, q = 0.3, C = 2`.
    pub const D_RATE_10_3: f64 = 1.2033601598308449e-24;

    /// `(β, f(β))`.
    pub const ENLARGEMENT: [(f64, f64); 3] = [
        (0.25, 3.0792014356780041),
        (0.05, 1.4874012753042712),
        (0.5, 4.0),
    ];

    pub const RECOVERY_32_07_01: f64 = 0.027127040443257505;
    pub const RECOVERY_6_08_01: f64 = 3.1098906728584552;
    pub const RECOVERY_200_05_002: f64 = 1.6598062275523972e-17;

    pub const DETECT_EXPR_100_10: f64 = 0.00014272476927059599;
    pub const DETECT_BOUND_100_10: f64 = 0.00038802152310974788;

    /// `(misclass, deficit, margin)` at `n = 10, p = 0.9, q = 0.1, δ = 0.1`.
    pub const MINIMAX_10: (f64, f64, f64) = (0.0060466176, 92004.956539030924, 0.67276941193911798);
    /// Same at `n = 400`.
    pub const MINIMAX_400: (f64, f64, f64) = (
        1.8217977168218728e-89,
        5.0777541709062945e+195,
        0.60729439808568848,
    );

    /// Posterior at `n = 2, p = 0.8, q = 0.2`, edges `{0-1, 2-3}`.
    pub const POST_N2: [(&str, f64); 3] = [
        ("0011", 0.99224806201550388),
        ("0101", 0.003875968992248062),
        ("0110", 0.003875968992248062),
    ];
    pub const ORDER_N2_0995: (&[&str], f64) = (&["0011", "0101"], 0.99612403100775194);

    pub const EDGES_N3: [(usize, usize); 6] = [(0, 1), (0, 2), (2, 3), (3, 4), (3, 5), (4, 5)];
    /// `(level, members, achieved)` at `n = 3, p = 0.6, q = 0.4`.
    pub const ORDER_N3: [(f64, &[&str], f64); 3] = [
        (0.5, &["000111", "001101"], 0.5923105917828873),
        (
            0.8,
            &["000111", "001011", "001101", "001110", "010011"],
            0.83113456464379947,
        ),
        (
            0.95,
            &[
                "000111", "001011", "001101", "001110", "010011", "010101", "010110", "011100",
            ],
            0.96140218620429702,
        ),
    ];
    /// `n = 3, p = 0.8, q = 0.2`, level 0.8: radius-0 ball at the top.
    pub const DIAM_N3_08: (&str, usize, f64) = ("000111", 0, 0.98743408166340214);

    pub const EDGES_N4: [(usize, usize); 12] = [
        (0, 1),
        (0, 2),
        (1, 3),
        (2, 3),
        (1, 2),
        (3, 4),
        (4, 5),
        (4, 6),
        (5, 7),
        (6, 7),
        (5, 6),
        (0, 6),
    ];
    /// `(level, center, radius, achieved)` at `n = 4, p = 0.7, q = 0.3`.
    pub const DIAM_N4: [(f64, &str, usize, f64); 3] = [
        (0.5, "00001111", 0, 0.94067531176735192),
        (0.9, "00001111", 0, 0.94067531176735192),
        (0.99, "00001111", 1, 0.99630468927104409),
    ];
    pub const ORDER_N4_099: (&[&str], f64) = (
        &[
            "00001111", "00010111", "00011101", "00011110", "01110001", "01111000",
        ],
        0.99096687160840397,
    );
}

pub fn bits(s: &str) -> ClassAssignment {
    s.parse().unwrap()
}

/// `|a - b| <= tol · max(1, |b|)`.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

/// Agreement to `digits` significant digits.
pub fn sig_close(a: f64, b: f64, digits: i32) -> bool {
    if b == 0.0 {
        return a == 0.0;
    }
    ((a - b) / b).abs() <= 0.5 * 10f64.powi(1 - digits)
}

pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    let m = 2 * n;
    (0..m)
        .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
        .collect()
}

/// Every graph on `2n` vertices (`n <= 3`).
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let ps = pairs(n);
    assert!(ps.len() < 32);
    (0u64..1 << ps.len()).map(move |mask| {
        Graph::from_edges(
            n,
            ps.iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &e)| e),
        )
        .unwrap()
    })
}

/// 5 x 5 interior grid.
pub fn pq_grid() -> Vec<(f64, f64)> {
    let v = [0.1, 0.3, 0.5, 0.7, 0.9];
    v.iter()
        .flat_map(|&p| v.iter().map(move |&q| (p, q)))
        .collect()
}

/// Graph with each pair included independently with probability 1/2.
pub fn coin_graph(n: usize, seed: u64) -> Graph {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    Graph::from_edges(n, pairs(n).into_iter().filter(|_| rng.gen::<bool>())).unwrap()
}
