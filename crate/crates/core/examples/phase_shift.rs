//! Phase shift across the positive-energy axis and its π jumps, compared
//! with the phase extracted from direct integration at a few energies.
//!
//! Run with `cargo run --release --example phase_shift [V0]`.

use sqrtwell::oracle::{oracle_scattering_phase, reduce_half_pi, ShootingConfig};
use sqrtwell::scattering::{default_energy_grid, phase_shift, phase_shift_curve};
use sqrtwell::PhysParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let v0: f64 = std::env::args()
        .nth(1)
        .map(|a| a.parse())
        .transpose()?
        .unwrap_or(4.0);
    let p = PhysParams::new(1.0, 1.0, v0, 2.0)?;
    let curve = phase_shift_curve(&p, &default_energy_grid(&p))?;
    let worst_imag = curve
        .points
        .iter()
        .map(|q| q.delta_imag.abs())
        .fold(0.0, f64::max);
    let worst_unit = curve
        .points
        .iter()
        .map(|q| ((q.b / q.a).norm() - 1.0).abs())
        .fold(0.0, f64::max);
    println!(
        "V0 = {v0}: {} jumps at {:?}",
        curve.jumps.len(),
        curve.jumps
    );
    println!("  max |Im δ| = {worst_imag:.1e}, max ||B/A| - 1| = {worst_unit:.1e}");

    let cfg = ShootingConfig::for_params(&p);
    println!(
        "  {:>8} {:>14} {:>14} {:>10}",
        "E", "standard δ", "oracle δ", "diff"
    );
    for e in [0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 25.0, 35.0, 50.0] {
        let pt = phase_shift(&p, e)?;
        let d = pt.standard_phase();
        let o = oracle_scattering_phase(&p, e, &cfg)?;
        println!(
            "  {e:>8} {d:>14.9} {o:>14.9} {:>10.1e}",
            reduce_half_pi(d - o).abs()
        );
    }
    Ok(())
}
