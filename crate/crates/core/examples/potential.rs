//! The well, its near-origin and far-field asymptotes, and the coordinate
//! map `z(x)` used by the exact solutions.
//!
//! Run with `cargo run --example potential`.

use sqrtwell::PhysParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = PhysParams::new(1.0, 1.0, 4.0, 2.0)?;
    println!(
        "{:>8} {:>12} {:>12} {:>12} {:>8}",
        "x", "V", "near", "far", "z"
    );
    for x in [1e-4, 1e-2, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0] {
        let (near, far) = p.asymptotes(x)?;
        println!(
            "{x:>8} {:>12.5e} {:>12.5e} {:>12.5e} {:>8.5}",
            p.potential(x)?,
            near,
            far,
            p.coord_map(x)?
        );
    }
    // z = 1/2 is where the potential equals -V0
    let x_half = p.coord_inverse(0.5)?;
    println!(
        "z = 0.5 at x = {x_half:.6}, V = {:.6}",
        p.potential(x_half)?
    );
    Ok(())
}
