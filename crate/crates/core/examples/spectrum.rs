//! Bound-state spectra for the four well depths of the reference table.
//!
//! Run with `cargo run --release --example spectrum [V0 ...]`.

use sqrtwell::spectrum::{find_spectrum, SpectrumOptions};
use sqrtwell::PhysParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let depths: Vec<f64> = std::env::args()
        .skip(1)
        .map(|a| a.parse())
        .collect::<Result<_, _>>()?;
    let depths = if depths.is_empty() {
        vec![4.0, 6.0, 10.0, 15.0]
    } else {
        depths
    };
    for v0 in depths {
        let p = PhysParams::new(1.0, 1.0, v0, 2.0)?;
        let r = find_spectrum(&p, &SpectrumOptions::default())?;
        println!(
            "V0 = {v0}: {} levels (zero-energy count {}, Chadan bound {:.4})",
            r.levels.len(),
            r.exact_count,
            r.chadan_bound
        );
        for l in &r.levels {
            println!(
                "  n = {}  E = {:.10e}  |S| = {:.1e}  nodes = {}",
                l.index, l.energy, l.spectral_residual, l.node_count
            );
        }
    }
    Ok(())
}
