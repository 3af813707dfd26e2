//! Vertex lists for plotting: the two-user strong region, and a 2D slice of a
//! four-user achievable region.
//!
//! cargo run --example vertices

use cyclic_ic::channel::ChannelRatios;
use cyclic_ic::hk::{achievable_constraints, etw_split, hk_parameters};
use cyclic_ic::outer::strong_capacity;
use cyclic_ic::polytope::{dyadic, enumerate_vertices, format_q, to_f64, Q};

fn show(title: &str, vertices: &[Vec<Q>]) {
    println!("{title}");
    for v in vertices {
        let approx: Vec<String> = v.iter().map(|x| format!("{:.4}", to_f64(x))).collect();
        let exact: Vec<String> = v.iter().map(format_q).collect();
        println!("  ({})  = ({})", approx.join(", "), exact.join(", "));
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let strong = strong_capacity(&ChannelRatios::symmetric(2, 10.0, 100.0)?)?;
    show("strong K=2 pentagon, counterclockwise:", &enumerate_vertices(&strong.to_system()?, false)?);

    let r = ChannelRatios::new(vec![1000.0, 250.0, 80.0, 3000.0], vec![40.0, 12.0, 9.0, 200.0])?;
    let sys = achievable_constraints(&hk_parameters(&r, &etw_split(&r))?)?.to_system()?;
    let slice = sys.fix(&[(2, dyadic(1.0)?), (3, dyadic(2.5)?)]);
    show("K=4 achievable region at R3 = 1, R4 = 2.5:", &enumerate_vertices(&slice, false)?);
    Ok(())
}
