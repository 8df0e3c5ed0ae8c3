//! Reduction to the general Heun equation: parameters at a few energies,
//! the apparent-singularity condition and the two equivalent forms of the
//! fundamental solutions.
//!
//! Run with `cargo run --example heun_reduction`.

use sqrtwell::heun::{
    apparent_singularity_check, map_to_heun, u1_clausen, u1_gauss_combo, u2_clausen,
    u2_gauss_combo, Branch,
};
use sqrtwell::PhysParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = PhysParams::new(1.0, 1.0, 4.0, 2.0)?;
    for e in [-2.0, -0.5, 0.5, 3.0] {
        let h = map_to_heun(&p, e, Branch::Plus, Branch::Plus);
        println!("E = {e}");
        println!(
            "  α₁ = {:.6}, α₂ = {:.6}, q = {:.6}",
            h.alpha1, h.alpha2, h.q_h
        );
        println!("  α = {:.6}, β = {:.6}", h.alpha_h, h.beta_h);
        println!(
            "  apparent-singularity residual = {:.1e}",
            apparent_singularity_check(&h)
        );
        // the Gauss combinations differ from the Clausen forms by (α₂-α₁)/(α₂+α₁)
        let factor = (h.alpha2 - h.alpha1) / (h.alpha2 + h.alpha1);
        let z = 0.3;
        let d1 = (u1_gauss_combo(&h, z)? - factor * u1_clausen(&h, z)?).norm();
        let d2 = (u2_gauss_combo(&h, z)? + factor * u2_clausen(&h, z)?).norm();
        println!(
            "  |u1 Gauss - factor·Clausen| = {d1:.1e}, |u2 Gauss + factor·Clausen| = {d2:.1e}"
        );
    }
    Ok(())
}
