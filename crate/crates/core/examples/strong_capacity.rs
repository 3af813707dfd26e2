//! Strong-interference capacity: the MAC intersection reduces to the strong
//! region, and the very strong region is a box.
//!
//! cargo run --example strong_capacity

use cyclic_ic::channel::{classify_regime, ChannelRatios};
use cyclic_ic::constraint::ConstraintSet;
use cyclic_ic::outer::{mac_intersection, outer_parameters, strong_capacity};
use cyclic_ic::polytope::{remove_redundant, set_equal};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for inr in [30.0, 100.0, 200.0] {
        let r = ChannelRatios::symmetric(3, 10.0, inr)?;
        let region = strong_capacity(&r)?;
        let mac = remove_redundant(&mac_intersection(&r).to_system()?)?;
        let same = set_equal(&mac, &region.to_system()?)?.is_equal();
        println!(
            "INR = {inr:>5}: {:<11} {:?} with {} rows; reduced MAC matches: {same}",
            classify_regime(&r).to_string(),
            region.family,
            region.len()
        );
        for note in &region.notes {
            println!("    {note}");
        }
        if region.len() == 3 {
            let boxed = ConstraintSet::box_system(&outer_parameters(&r).lambda)?;
            println!("    equals the box: {}", set_equal(&boxed, &region.to_system()?)?.is_equal());
        }
    }

    let weak = ChannelRatios::symmetric(3, 100.0, 10.0)?;
    if let Err(e) = strong_capacity(&weak) {
        println!("weak channel: {e}");
    }
    Ok(())
}
