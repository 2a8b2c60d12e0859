mod common;

use common::{all_graphs, bits, pq_grid};
use planted_bisection::graphmodel::{
    enumerate_assignments, enumerate_assignments_capped, enumerate_ring, exchange_sets, k_distance,
    log_likelihood, log_likelihood_ratio, sample_graph, suff_stats,
};
use planted_bisection::{ClassAssignment, Error, Graph, ModelParams};

#[test]
fn canonicalization_examples() {
    assert_eq!(
        ClassAssignment::canonicalize(&[0, 1, 1, 0]).unwrap(),
        bits("0110")
    );
    assert_eq!(
        ClassAssignment::canonicalize(&[1, 0, 0, 1]).unwrap(),
        bits("0110")
    );
    assert!(matches!(
        ClassAssignment::canonicalize(&[0, 1, 1, 1]),
        Err(Error::InvalidAssignment(_))
    ));
    assert!(matches!(
        ClassAssignment::canonicalize(&[0, 1, 1]),
        Err(Error::InvalidAssignment(_))
    ));
}

#[test]
fn distance_examples() {
    let a = bits("0011");
    assert_eq!(k_distance(&a, &a).unwrap(), 0);
    assert_eq!(k_distance(&a, &bits("0101")).unwrap(), 1);
    assert_eq!(k_distance(&a, &bits("1100")).unwrap(), 0);
    assert!(matches!(
        k_distance(&a, &bits("000111")),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn enumeration_counts() {
    assert_eq!(enumerate_assignments(2).unwrap().len(), 3);
    assert_eq!(enumerate_assignments(4).unwrap().len(), 35);
    assert_eq!(enumerate_assignments(1).unwrap(), vec![bits("01")]);
    let err = enumerate_assignments_capped(5, 100).unwrap_err();
    assert!(matches!(err, Error::EnumerationTooLarge { cap: 100, .. }));
    assert!(err.to_string().contains("100"));
}

#[test]
fn ring_examples() {
    let theta0 = ClassAssignment::block(4);
    assert_eq!(enumerate_ring(&theta0, 1).unwrap().len(), 16);
    assert_eq!(enumerate_ring(&theta0, 2).unwrap().len(), 18);
    assert_eq!(enumerate_ring(&theta0, 0).unwrap(), vec![theta0.clone()]);
    assert!(matches!(
        enumerate_ring(&theta0, 3),
        Err(Error::OutOfRange { .. })
    ));
}

#[test]
fn metric_axioms_exhaustive() {
    for n in 1..=5 {
        let all = enumerate_assignments(n).unwrap();
        let d: Vec<Vec<usize>> = all
            .iter()
            .map(|a| all.iter().map(|b| k_distance(a, b).unwrap()).collect())
            .collect();
        for i in 0..all.len() {
            assert_eq!(d[i][i], 0);
            for j in 0..all.len() {
                assert_eq!(d[i][j], d[j][i]);
                assert_eq!(d[i][j] == 0, i == j);
                assert!(d[i][j] <= n / 2);
                for l in 0..all.len() {
                    assert!(d[i][l] <= d[i][j] + d[j][l]);
                }
            }
        }
    }
}

#[test]
fn exchange_set_sizes_exhaustive() {
    for n in 1..=6 {
        let g = Graph::empty(n);
        let all = enumerate_assignments(n).unwrap();
        let theta0 = &all[all.len() / 2];
        for theta in &all {
            let k = k_distance(theta, theta0).unwrap();
            let s = exchange_sets(&g, theta, theta0).unwrap();
            assert_eq!(s.within_to_between.len(), 2 * k * (n - k));
            assert_eq!(s.between_to_within.len(), 2 * k * (n - k));
        }
    }
}

#[test]
fn deterministic_sampling() {
    let params = ModelParams::new(3, 1.0, 0.0).unwrap();
    let theta = bits("010101");
    let g = sample_graph(&params, &theta, 5).unwrap();
    assert_eq!(g, Graph::class_cliques(&theta));
    let params = ModelParams::new(3, 1.0, 1.0).unwrap();
    assert_eq!(
        sample_graph(&params, &theta, 5).unwrap(),
        Graph::complete(3)
    );
}

#[test]
fn sampling_is_reproducible() {
    let params = ModelParams::new(8, 0.6, 0.3).unwrap();
    let theta = ClassAssignment::block(8);
    assert_eq!(
        sample_graph(&params, &theta, 42).unwrap(),
        sample_graph(&params, &theta, 42).unwrap()
    );
    assert_ne!(
        sample_graph(&params, &theta, 42).unwrap(),
        sample_graph(&params, &theta, 43).unwrap()
    );
}

#[test]
fn mean_edge_count_erdos_renyi() {
    let n = 16;
    let params = ModelParams::new(n, 0.5, 0.5).unwrap();
    let theta = ClassAssignment::block(n);
    let m = 10_000;
    let counts: Vec<f64> = (0..m)
        .map(|s| sample_graph(&params, &theta, s).unwrap().edge_count() as f64)
        .collect();
    let mean = counts.iter().sum::<f64>() / m as f64;
    let expected = 0.5 * (2 * n * n - n) as f64;
    let se = (0.25 * (2 * n * n - n) as f64 / m as f64).sqrt();
    assert_eq!(expected, 248.0);
    assert!((mean - expected).abs() < 3.0 * se, "{mean}");
}

#[test]
fn class_frequencies_match_p_and_q() {
    let n = 8;
    let (p, q) = (0.7, 0.2);
    let params = ModelParams::new(n, p, q).unwrap();
    let theta = ClassAssignment::block(n);
    let reps = 10_000u64;
    let (mut within, mut between) = (0u64, 0u64);
    for s in 0..reps {
        let st = suff_stats(&sample_graph(&params, &theta, s).unwrap(), &theta).unwrap();
        within += st.within;
        between += st.between;
    }
    let wn = (reps * params.within_pairs()) as f64;
    let bn = (reps * params.between_pairs()) as f64;
    let (fw, fb) = (within as f64 / wn, between as f64 / bn);
    assert!((fw - p).abs() < 3.0 * (p * (1.0 - p) / wn).sqrt(), "{fw}");
    assert!((fb - q).abs() < 3.0 * (q * (1.0 - q) / bn).sqrt(), "{fb}");
}

#[test]
fn sufficient_statistic_examples() {
    let n = 3;
    let theta = bits("001011");
    let full = suff_stats(&Graph::complete(n), &theta).unwrap();
    assert_eq!((full.within, full.between), (6, 9));
    let empty = suff_stats(&Graph::empty(n), &theta).unwrap();
    assert_eq!((empty.within, empty.between), (0, 0));
    let cliques = suff_stats(&Graph::class_cliques(&theta), &theta).unwrap();
    assert_eq!((cliques.within, cliques.between), (6, 0));
}

#[test]
fn likelihood_examples() {
    let n = 2;
    let g = Graph::from_edges(n, [(0, 2), (1, 3)]).unwrap();
    let er = ModelParams::new(n, 0.5, 0.5).unwrap();
    for theta in enumerate_assignments(n).unwrap() {
        assert_eq!(log_likelihood(&g, &theta, &er).unwrap(), 6.0 * 0.5f64.ln());
    }
    let sure = ModelParams::new(n, 1.0, 0.0).unwrap();
    let theta = bits("0011");
    let cliques = Graph::class_cliques(&theta);
    assert_eq!(log_likelihood(&cliques, &theta, &sure).unwrap(), 0.0);
    let crossed = Graph::from_edges(n, [(0, 1), (2, 3), (1, 2)]).unwrap();
    assert_eq!(
        log_likelihood(&crossed, &theta, &sure).unwrap(),
        f64::NEG_INFINITY
    );
}

#[test]
fn ratio_examples() {
    let n = 2;
    let g = Graph::from_edges(n, [(0, 1), (1, 2)]).unwrap();
    let theta0 = bits("0011");
    let params = ModelParams::new(n, 0.8, 0.3).unwrap();
    assert_eq!(
        log_likelihood_ratio(&g, &theta0, &theta0, &params).unwrap(),
        0.0
    );
    let er = ModelParams::new(n, 0.4, 0.4).unwrap();
    for theta in enumerate_assignments(n).unwrap() {
        assert_eq!(log_likelihood_ratio(&g, &theta, &theta0, &er).unwrap(), 0.0);
    }
}

#[test]
fn ratio_matches_difference_n2() {
    let thetas = enumerate_assignments(2).unwrap();
    for g in all_graphs(2) {
        for (p, q) in pq_grid() {
            let m = ModelParams::new(2, p, q).unwrap();
            for a in &thetas {
                for b in &thetas {
                    let r = log_likelihood_ratio(&g, a, b, &m).unwrap();
                    let d = log_likelihood(&g, a, &m).unwrap() - log_likelihood(&g, b, &m).unwrap();
                    assert!((r - d).abs() < 1e-10);
                }
            }
        }
    }
}

#[test]
fn boundary_ratio_is_minus_infinity_when_theta0_impossible() {
    let n = 2;
    let sure = ModelParams::new(n, 1.0, 0.0).unwrap();
    let theta0 = bits("0011");
    let g = Graph::class_cliques(&bits("0101"));
    assert_eq!(
        log_likelihood_ratio(&g, &bits("0101"), &theta0, &sure).unwrap(),
        f64::NEG_INFINITY
    );
}
