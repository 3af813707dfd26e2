//! Outer bound next to the achievable region, row by row, and an exact
//! check that the achievable polytope lies inside the bound.
//!
//! cargo run --example outer_bound

use cyclic_ic::channel::{classify_regime, ChannelRatios};
use cyclic_ic::gap::gap_report;
use cyclic_ic::hk::{achievable_constraints, etw_split, hk_parameters};
use cyclic_ic::outer::{outer_constraints, outer_parameters};
use cyclic_ic::polytope::contains;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let r = ChannelRatios::new(vec![1000.0, 250.0, 80.0, 3000.0], vec![40.0, 12.0, 9.0, 200.0])?;
    let regime = classify_regime(&r);
    let ach = achievable_constraints(&hk_parameters(&r, &etw_split(&r))?)?;
    let out = outer_constraints(&outer_parameters(&r))?;

    let report = gap_report(&ach, &out, regime)?;
    println!("{:<14} {:>9} {:>9} {:>8} {:>6}", "kind", "inner", "outer", "delta", "bound");
    for p in &report.pairs {
        println!(
            "{:<14} {:>9.4} {:>9.4} {:>8.4} {:>6}",
            p.kind.to_string(),
            p.achievable_rhs,
            p.outer_rhs,
            p.delta,
            p.bound
        );
    }
    println!("max gap per rate term: {:.4} bits", report.max_normalized_gap);

    let inside = contains(&out.to_system()?, &ach.to_system()?)?;
    println!("achievable region inside outer bound: {}", inside.holds());
    Ok(())
}
