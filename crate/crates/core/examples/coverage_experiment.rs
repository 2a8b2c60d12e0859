//! Frequentist coverage of credible sets and their enlargements, written
//! to CSV with manifests.
//!
//!     cargo run --release --example coverage_experiment [output-dir]

use planted_bisection::harness::io::write_experiment;
use planted_bisection::harness::{
    run_experiment, ExperimentConfig, KnRule, LevelSchedule, ParamSpec, Task,
};

fn main() -> planted_bisection::Result<()> {
    let cfg = ExperimentConfig {
        task: Task::Coverage,
        n_grid: vec![4, 5],
        params: ParamSpec::Pq(vec![(0.8, 0.2), (0.6, 0.4)]),
        replicates: 200,
        base_seed: 99,
        level: LevelSchedule::PriorFraction(0.1),
        k_n: KnRule::Fixed(1),
        ..ExperimentConfig::default()
    };
    let out = run_experiment(&cfg)?;
    for s in out
        .summaries
        .iter()
        .filter(|s| s.statistic.starts_with("theta0_in_"))
    {
        println!(
            "n {} p {} q {}  {:<22} {:.3} [{:.3}, {:.3}]  bound {:.3}",
            s.n,
            s.p,
            s.q,
            s.statistic,
            s.mean,
            s.ci_low,
            s.ci_high,
            s.bound.unwrap()
        );
    }

    let dir = std::env::args()
        .nth(1)
        .map(Into::into)
        .unwrap_or_else(|| std::env::temp_dir().join("pbm-coverage"));
    for path in write_experiment(&out, &cfg, &dir)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}
