//! Metropolis-Hastings with pair swaps against the exact posterior.
//!
//!     cargo run --release --example mcmc_posterior

use planted_bisection::graphmodel::{sample_graph, ClassAssignment, ModelParams};
use planted_bisection::posterior::{exact_posterior, mh_sampler, ChainConfig};

fn main() -> planted_bisection::Result<()> {
    let params = ModelParams::new(4, 0.8, 0.2)?;
    let graph = sample_graph(&params, &ClassAssignment::block(4), 1)?;
    let exact = exact_posterior(&graph, &params)?;

    let cfg = ChainConfig {
        steps: 400_000,
        burn_in: 40_000,
        thin: 4,
        seed: 9,
        chains: 4,
    };
    let draws = mh_sampler(&graph, &params, &cfg)?;

    let mut tv = 0.0;
    println!("{:<10} {:>10} {:>10}", "theta", "exact", "mcmc");
    for (theta, lw) in exact.iter() {
        let (e, f) = (lw.exp(), draws.frequency(theta));
        tv += (e - f).abs();
        if e > 0.01 {
            println!("{:<10} {e:>10.5} {f:>10.5}", theta.to_bit_string());
        }
    }
    println!(
        "draws {}, distinct {}, TV {:.4}",
        draws.total(),
        draws.distinct(),
        tv / 2.0
    );
    Ok(())
}
