//! Closed-form bounds across a range of n.
//!
//!     cargo run --example bounds_report

use planted_bisection::bounds::{
    bounds_report, detect_mass_bound, enlargement_factor, hellinger_quantities,
    recovery_mass_bound, test_power, DEFAULT_CONTIGUITY_C,
};

fn main() -> planted_bisection::Result<()> {
    let (p, q) = (0.8, 0.2);
    let h = hellinger_quantities(p, q, 1)?;
    println!(
        "p = {p}, q = {q}: mu = {:.6}, lambda = {:.6}, rho = {:.6}",
        h.mu, h.lambda, h.rho
    );

    println!(
        "\n{:>5} {:>14} {:>14} {:>14}",
        "n", "a_{n,1}", "recovery", "detect(k=n/10)"
    );
    for n in [10, 20, 50, 100, 200] {
        let det = detect_mass_bound(n, (n / 10).max(1), p, q)?;
        println!(
            "{n:>5} {:>14.4e} {:>14.4e} {:>14.4e}{}",
            test_power(n, 1, p, q)?,
            recovery_mass_bound(n, p, q)?,
            det.value,
            if det.vacuous { "  (vacuous)" } else { "" }
        );
    }

    for beta in [0.05, 0.25, 0.5] {
        println!("f({beta}) = {:.6}", enlargement_factor(beta)?);
    }

    let report = bounds_report(100, 0.5, 0.1, 10, DEFAULT_CONTIGUITY_C, 0.1, 1.0)?;
    println!("\n{}", serde_json::to_string_pretty(&report).unwrap());
    Ok(())
}
