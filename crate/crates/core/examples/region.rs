//! Achievable region of a symmetric three-user weak channel, with the
//! minimizing branch of every constraint and the polytope's vertices.
//!
//! cargo run --example region

use cyclic_ic::channel::{classify_regime, ChannelRatios};
use cyclic_ic::hk::{achievable_constraints, etw_split, hk_parameters, PowerSplit};
use cyclic_ic::polytope::{enumerate_vertices, to_f64};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let r = ChannelRatios::symmetric(3, 100.0, 10.0)?;
    println!("regime: {}", classify_regime(&r));

    let params = hk_parameters(&r, &etw_split(&r))?;
    println!("a = {:.4}, d = {:.4}, e = {:.4}, g = {:.4}", params.a[0], params.d[0], params.e[0], params.g[0]);

    let set = achievable_constraints(&params)?;
    for row in &set.rows {
        let alternatives: Vec<String> = row.branches.iter().map(|b| b.to_string()).collect();
        println!(
            "{:<14} {:?} <= {:.4}   via {}   (of {})",
            row.kind.to_string(),
            row.coeffs,
            row.rhs,
            row.attained(),
            alternatives.join(", ")
        );
    }

    let vertices = enumerate_vertices(&set.to_system()?, false)?;
    println!("{} vertices", vertices.len());
    for v in &vertices {
        let coords: Vec<String> = v.iter().map(|x| format!("{:.4}", to_f64(x))).collect();
        println!("  ({})", coords.join(", "));
    }

    // treating all interference as private noise shrinks the region
    let private = achievable_constraints(&hk_parameters(&r, &PowerSplit::all_private(&r))?)?;
    println!("sum rate: ETW split {:.4}, all private {:.4}", set.rows[9].rhs, private.rows[9].rhs);
    Ok(())
}
