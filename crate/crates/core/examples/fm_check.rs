//! Re-derives the achievable region by eliminating the private and common
//! rates from the rate-split system with exact Fourier-Motzkin.
//!
//! cargo run --release --example fm_check

use std::time::Instant;

use cyclic_ic::channel::ChannelRatios;
use cyclic_ic::hk::{achievable_constraints, check_elimination, etw_split, hk_parameters, pre_elimination_system};
use cyclic_ic::polytope::FmOptions;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let channels = [
        ChannelRatios::symmetric(2, 100.0, 10.0)?,
        ChannelRatios::new(vec![300.0, 40.0, 900.0], vec![20.0, 3.0, 60.0])?,
        ChannelRatios::new(vec![1000.0, 250.0, 80.0, 3000.0], vec![40.0, 12.0, 9.0, 200.0])?,
    ];
    for r in &channels {
        let p = hk_parameters(r, &etw_split(r))?;
        let closed = achievable_constraints(&p)?;
        let lifted = pre_elimination_system(&p)?;
        let start = Instant::now();
        let check = check_elimination(&p, &closed, &FmOptions::default())?;
        println!(
            "K={}: {} rows in {} variables -> {} rows in R; equal to closed form: {} ({:.2?})",
            r.users(),
            lifted.len(),
            lifted.dim(),
            check.projected.len(),
            check.is_equal(),
            start.elapsed()
        );
    }
    Ok(())
}
