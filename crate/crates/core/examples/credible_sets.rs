//! Credible sets, their enlargement and the JSON export.
//!
//!     cargo run --example credible_sets

use planted_bisection::graphmodel::{sample_graph, ClassAssignment, ModelParams};
use planted_bisection::posterior::exact_posterior;
use planted_bisection::uncertainty::{
    coverage_lower_bound, enlarge, minimal_diameter_credible, minimal_order_credible,
};

fn main() -> planted_bisection::Result<()> {
    let theta0 = ClassAssignment::block(5);
    let params = ModelParams::new(5, 0.7, 0.3)?;
    let graph = sample_graph(&params, &theta0, 5)?;
    let table = exact_posterior(&graph, &params)?;

    for level in [0.5, 0.9, 0.99] {
        let d = minimal_order_credible(&table, level)?;
        let b = minimal_diameter_credible(&table, level)?;
        println!(
            "level {level}: minimal-order {} members (diam {}, achieved {:.4}); \
             ball radius {} around {}, {} members",
            d.len(),
            d.diameter(),
            d.level_achieved(),
            b.radius().unwrap(),
            b.center().unwrap(),
            b.len(),
        );
    }

    let d = minimal_order_credible(&table, 0.9)?;
    let report = enlarge(&d, 1)?;
    println!(
        "\n1-enlargement: {} -> {} members, theta0 covered: {}",
        d.len(),
        report.confidence_members.len(),
        report.contains(&theta0)
    );

    // coverage guarantee needs a deficit below 1/|Θ_n| = 1/126
    for a in [0.1, 1e-3, 1e-4] {
        let bound = coverage_lower_bound(5, a)?;
        println!(
            "a = {a}: coverage >= {:.4} (vacuous {})",
            bound.value, bound.vacuous
        );
    }

    let export = enlarge(&minimal_order_credible(&table, 0.5)?, 0)?.export();
    println!("\n{}", serde_json::to_string_pretty(&export).unwrap());
    Ok(())
}
