mod common;

use common::{bits, oracle};
use planted_bisection::graphmodel::sample_graph;
use planted_bisection::harness::io::{
    format_float, load_assignment, load_graph, load_posterior, read_graph, read_posterior_csv,
    read_rows_csv, read_samples_csv, read_summaries_csv, save_assignment, save_graph,
    save_posterior, write_graph, write_rows_csv, write_samples_csv, write_summaries_csv, Manifest,
};
use planted_bisection::harness::{run_experiment, ExperimentConfig, Task};
use planted_bisection::posterior::{exact_posterior, mh_sampler, ChainConfig};
use planted_bisection::{ClassAssignment, Error, Graph, ModelParams};

fn graph_text(g: &Graph) -> String {
    let mut buf = Vec::new();
    write_graph(g, &mut buf).unwrap();
    String::from_utf8(buf).unwrap()
}

#[test]
fn empty_graph_round_trip() {
    let g = Graph::empty(3);
    let text = graph_text(&g);
    assert_eq!(text, "2n 6\n");
    assert_eq!(read_graph(text.as_bytes()).unwrap(), g);
}

#[test]
fn sampled_graph_round_trips_exactly() {
    let params = ModelParams::new(8, 0.6, 0.2).unwrap();
    let g = sample_graph(&params, &ClassAssignment::block(8), 99).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    save_graph(&g, &path).unwrap();
    let back = load_graph(&path).unwrap();
    assert_eq!(back, g);
    assert_eq!(graph_text(&back), std::fs::read_to_string(&path).unwrap());
}

#[test]
fn truncated_graph_reports_line() {
    let err = read_graph("2n 4\n0 1\n2 3".as_bytes()).unwrap_err();
    match err {
        Error::Parse { line, .. } => assert_eq!(line, 3),
        other => panic!("{other:?}"),
    }
    let err = read_graph("2n 4\n0 1\n2".as_bytes()).unwrap_err();
    assert!(err.to_string().contains("line 3"), "{err}");
}

#[test]
fn malformed_graphs_are_rejected() {
    for bad in [
        "",
        "3n 4\n",
        "2n 5\n",
        "2n 4\n1 0\n",
        "2n 4\n0 4\n",
        "2n 4\n2 3\n0 1\n",
        "2n 4\n0 1\n0 1\n",
        "2n 4\nx y\n",
    ] {
        assert!(
            matches!(read_graph(bad.as_bytes()), Err(Error::Parse { .. })),
            "{bad:?}"
        );
    }
}

#[test]
fn assignment_round_trip_canonicalizes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("theta.txt");
    std::fs::write(&path, "110100\n").unwrap();
    assert_eq!(load_assignment(&path).unwrap(), bits("001011"));
    let theta = bits("01011010");
    save_assignment(&theta, &path).unwrap();
    assert_eq!(load_assignment(&path).unwrap(), theta);
    std::fs::write(&path, "0111\n").unwrap();
    assert!(load_assignment(&path).is_err());
}

#[test]
fn posterior_round_trip() {
    let g = Graph::from_edges(3, oracle::EDGES_N3).unwrap();
    let t = exact_posterior(&g, &ModelParams::new(3, 0.7, 0.2).unwrap()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("post.csv");
    save_posterior(&t, &path).unwrap();
    let back = load_posterior(&path).unwrap();
    assert_eq!(back.assignments(), t.assignments());
    assert_eq!(back.log_weights(), t.log_weights());
    assert!(back.is_exact());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("assignment,log_weight\n"));
}

#[test]
fn partial_posterior_reads_as_empirical() {
    let csv = "assignment,log_weight\n0011,-0.1\n0101,-2.5\n";
    let t = read_posterior_csv(csv.as_bytes()).unwrap();
    assert!(!t.is_exact());
    let total: f64 = t.log_weights().iter().map(|w| w.exp()).sum();
    assert!((total - 1.0).abs() < 1e-12);
    let err = read_posterior_csv("assignment,log_weight\n0011,abc\n".as_bytes()).unwrap_err();
    assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
}

#[test]
fn samples_round_trip() {
    let g = Graph::from_edges(3, oracle::EDGES_N3).unwrap();
    let cfg = ChainConfig {
        steps: 5_000,
        burn_in: 500,
        thin: 5,
        seed: 2,
        chains: 2,
    };
    let s = mh_sampler(&g, &ModelParams::new(3, 0.7, 0.2).unwrap(), &cfg).unwrap();
    let mut buf = Vec::new();
    write_samples_csv(&s, &mut buf).unwrap();
    assert_eq!(read_samples_csv(buf.as_slice()).unwrap(), s);
}

#[test]
fn rows_and_summaries_round_trip() {
    let cfg = ExperimentConfig {
        task: Task::Coverage,
        n_grid: vec![3],
        replicates: 5,
        ..Default::default()
    };
    let out = run_experiment(&cfg).unwrap();
    let mut buf = Vec::new();
    write_rows_csv(&out.rows, &mut buf).unwrap();
    assert_eq!(read_rows_csv(buf.as_slice()).unwrap(), out.rows);
    let mut buf = Vec::new();
    write_summaries_csv(&out.summaries, &mut buf).unwrap();
    let back = read_summaries_csv(buf.as_slice()).unwrap();
    assert_eq!(back.len(), out.summaries.len());
    for (a, b) in back.iter().zip(&out.summaries) {
        assert_eq!(a.statistic, b.statistic);
        assert!(a.mean == b.mean || (a.mean.is_nan() && b.mean.is_nan()));
    }
}

#[test]
fn float_format_round_trips() {
    for x in [
        0.0,
        1.0,
        -2.5,
        0.1 + 0.2,
        1e-7,
        123456789.125,
        3.3e20,
        f64::MIN_POSITIVE,
    ] {
        let s = format_float(x);
        assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
    }
    assert_eq!(format_float(0.25), "0.25");
    assert_eq!(format_float(1e-7), "1e-7");
}

#[test]
fn manifest_hash_is_stable() {
    let cfg = ExperimentConfig::default();
    let a = Manifest::new(std::path::Path::new("out/rows.csv"), &cfg, Some(4)).unwrap();
    let b = Manifest::new(std::path::Path::new("rows.csv"), &cfg, Some(4)).unwrap();
    assert_eq!(a.config_sha256, b.config_sha256);
    assert_eq!(a.config_sha256.len(), 64);
    assert_eq!(a.file, "rows.csv");
    assert_eq!(
        Manifest::path_for(std::path::Path::new("d/rows.csv")),
        std::path::Path::new("d/rows.csv.manifest.json")
    );
    let other = ExperimentConfig {
        base_seed: 1,
        ..Default::default()
    };
    let c = Manifest::new(std::path::Path::new("rows.csv"), &other, Some(4)).unwrap();
    assert_ne!(a.config_sha256, c.config_sha256);
}
