//! Normalized bound states: node counts, orthogonality and the decay rate
//! of the tails.
//!
//! Run with `cargo run --release --example wavefunctions [V0]`.

use sqrtwell::spectrum::{find_spectrum, SpectrumOptions};
use sqrtwell::states::{bound_wavefunctions, normalize, overlap};
use sqrtwell::PhysParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let v0: f64 = std::env::args()
        .nth(1)
        .map(|a| a.parse())
        .transpose()?
        .unwrap_or(4.0);
    let p = PhysParams::new(1.0, 1.0, v0, 2.0)?;
    let spectrum = find_spectrum(&p, &SpectrumOptions::default())?;
    let tables = bound_wavefunctions(&p, &spectrum.levels)?;
    for t in &tables {
        let check = normalize(t)?;
        println!(
            "nodes = {}, decay rate = {:.6}, norm after scaling = {:.12}, nodes at {:?}",
            t.node_count(),
            t.decay_rate.unwrap_or(f64::NAN),
            check.norm.unwrap_or(f64::NAN),
            t.nodes
        );
    }
    println!("overlap matrix:");
    for a in &tables {
        let row: Vec<String> = tables
            .iter()
            .map(|b| overlap(a, b).map(|v| format!("{v:>10.2e}")))
            .collect::<Result<_, _>>()?;
        println!("  {}", row.join(" "));
    }
    Ok(())
}
