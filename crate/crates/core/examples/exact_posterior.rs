//! Exact posterior by enumerating every balanced partition.
//!
//!     cargo run --example exact_posterior

use planted_bisection::graphmodel::{k_distance, sample_graph, ClassAssignment, ModelParams};
use planted_bisection::posterior::{exact_posterior, map_from_table, overlap, posterior_mass};

fn main() -> planted_bisection::Result<()> {
    let n = 5;
    let theta0 = ClassAssignment::block(n);
    for (p, q) in [(0.9, 0.1), (0.7, 0.3), (0.5, 0.5)] {
        let params = ModelParams::new(n, p, q)?;
        let graph = sample_graph(&params, &theta0, 7)?;
        let table = exact_posterior(&graph, &params)?;
        let map = map_from_table(&table).expect("non-empty");

        println!("p = {p}, q = {q}: {} assignments", table.len());
        println!("  log evidence     {:.6}", table.log_evidence().unwrap());
        println!("  mass at theta0   {:.6}", table.weight_of(&theta0));
        for k in 1..=n / 2 {
            let ring = posterior_mass(&table, |a| k_distance(a, &theta0).unwrap() == k);
            println!("  mass at k = {k}    {ring:.6}");
        }
        println!("  MAP {map}, overlap {:.2}", overlap(map, &theta0)?);
    }
    Ok(())
}
