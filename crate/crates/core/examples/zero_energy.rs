//! The zero-energy solution: its zeros count the bound states, compared
//! with the Chadan estimate.
//!
//! Run with `cargo run --release --example zero_energy`.

use sqrtwell::spectrum::chadan_bound;
use sqrtwell::states::{zero_energy_grid, zero_energy_node_count, zero_energy_solution};
use sqrtwell::PhysParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for v0 in [1.0, 4.0, 6.0, 10.0, 15.0, 40.0] {
        let p = PhysParams::new(1.0, 1.0, v0, 2.0)?;
        let n = zero_energy_node_count(&p)?;
        let t = zero_energy_solution(&p, &zero_energy_grid(&p, 40.0 * p.sigma, 0))?;
        let zeros: Vec<String> = t.nodes.iter().map(|x| format!("{x:.4}")).collect();
        println!(
            "V0 = {v0:>4}: {n} bound states (Chadan bound {:.4}); zeros at [{}]",
            chadan_bound(&p),
            zeros.join(", ")
        );
    }
    Ok(())
}
