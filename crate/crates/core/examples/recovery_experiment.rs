//! Monte Carlo check of the recovery bound and of MAP recovery.
//!
//!     cargo run --release --example recovery_experiment

use planted_bisection::harness::{run_experiment, ExperimentConfig, ParamSpec, Task};

fn main() -> planted_bisection::Result<()> {
    let cfg = ExperimentConfig {
        task: Task::Recovery,
        n_grid: vec![4, 6],
        params: ParamSpec::Pq(vec![(0.9, 0.05), (0.8, 0.1), (0.55, 0.45)]),
        replicates: 100,
        base_seed: 2024,
        ..ExperimentConfig::default()
    };
    let out = run_experiment(&cfg)?;
    println!(
        "{:>3} {:>5} {:>5} {:>12} {:>10} {:>12} {:>10}",
        "n", "p", "q", "mass(θ0)", "MAP=θ0", "off-mass", "bound"
    );
    for s in out.summaries.iter().filter(|s| s.statistic == "off_mass") {
        let mass = out.summary(s.n, s.p, s.q, "post_mass_theta0").unwrap();
        let hit = out.summary(s.n, s.p, s.q, "map_is_theta0").unwrap();
        println!(
            "{:>3} {:>5} {:>5} {:>12.4} {:>10.2} {:>7.4}±{:.4} {:>10.4}",
            s.n,
            s.p,
            s.q,
            mass.mean,
            hit.mean,
            s.mean,
            s.std_error,
            s.bound.unwrap()
        );
    }
    Ok(())
}
