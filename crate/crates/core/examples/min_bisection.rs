//! MAP and minimum bisection coincide when p > q.
//!
//!     cargo run --release --example min_bisection

use planted_bisection::graphmodel::{sample_graph, ClassAssignment, ModelParams};
use planted_bisection::posterior::{
    cut_size, map_estimate, min_bisection_estimate, overlap, BisectionMode, Engine,
};

fn main() -> planted_bisection::Result<()> {
    let theta0 = ClassAssignment::block(6);
    let params = ModelParams::new(6, 0.6, 0.2)?;
    for seed in 0..5 {
        let graph = sample_graph(&params, &theta0, seed)?;
        let map = map_estimate(&graph, &params, &Engine::Exact)?;
        let exact = min_bisection_estimate(&graph, BisectionMode::Exact)?;
        let kl = min_bisection_estimate(&graph, BisectionMode::Greedy { restarts: 8, seed })?;
        println!(
            "seed {seed}: cut(MAP) {} cut(exact) {} cut(KL) {}  same {}  overlap {:.2}",
            cut_size(&graph, &map)?,
            cut_size(&graph, &exact)?,
            cut_size(&graph, &kl)?,
            map == exact,
            overlap(&map, &theta0)?,
        );
    }

    // larger n: only the heuristic is practical
    let theta0 = ClassAssignment::block(40);
    let params = ModelParams::new(40, 0.5, 0.1)?;
    let graph = sample_graph(&params, &theta0, 3)?;
    let kl = min_bisection_estimate(
        &graph,
        BisectionMode::Greedy {
            restarts: 4,
            seed: 3,
        },
    )?;
    println!(
        "n = 40: KL cut {} vs planted cut {}, overlap {:.3}",
        cut_size(&graph, &kl)?,
        cut_size(&graph, &theta0)?,
        overlap(&kl, &theta0)?
    );
    Ok(())
}
