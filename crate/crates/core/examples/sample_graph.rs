//! Sample a planted bi-section graph and look at its edge counts.
//!
//!     cargo run --example sample_graph

use planted_bisection::graphmodel::{sample_graph, suff_stats, ClassAssignment, ModelParams};
use planted_bisection::harness::io::write_graph;

fn main() -> planted_bisection::Result<()> {
    let params = ModelParams::new(6, 0.7, 0.15)?;
    let theta0 = ClassAssignment::block(6);
    let graph = sample_graph(&params, &theta0, 42)?;

    let s = suff_stats(&graph, &theta0)?;
    println!("theta0 = {theta0}");
    println!(
        "within: {}/{} ({:.3}), between: {}/{} ({:.3})",
        s.within,
        s.within_pairs,
        s.within as f64 / s.within_pairs as f64,
        s.between,
        s.between_pairs,
        s.between as f64 / s.between_pairs as f64,
    );

    // sparse parametrizations
    let sparse = ModelParams::from_log_scaling(6, 2.0, 0.5)?;
    println!(
        "a = 2, b = 0.5 at n = 6 gives p = {:.4}, q = {:.4}",
        sparse.p(),
        sparse.q()
    );

    println!("\nedge list:");
    write_graph(&graph, std::io::stdout())?;
    Ok(())
}
