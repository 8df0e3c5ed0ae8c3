//! Independent check of the exact spectrum by direct integration and
//! node-count bisection, plus the harmonic-oscillator self-test of the
//! shooting code.
//!
//! Run with `cargo run --release --example oracle`.

use sqrtwell::oracle::{oracle_eigenvalues, Problem, ShootingConfig};
use sqrtwell::spectrum::{find_spectrum, SpectrumOptions};
use sqrtwell::PhysParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let v = |x: f64| 0.5 * x * x;
    let ho = Problem {
        potential: &v,
        kinetic_factor: 2.0,
        scale: 1.0,
    };
    let cfg = ShootingConfig {
        x_max: 10.0,
        ..ShootingConfig::for_scale(1.0)
    };
    println!(
        "half-line oscillator: {:?}",
        ho.eigenvalues_in(0.0, 8.0, &cfg)?
    );

    for v0 in [4.0, 6.0, 10.0, 15.0] {
        let p = PhysParams::new(1.0, 1.0, v0, 2.0)?;
        let exact = find_spectrum(&p, &SpectrumOptions::default())?;
        let shot = oracle_eigenvalues(&p, &ShootingConfig::for_params(&p))?;
        println!("V0 = {v0}");
        for (l, e) in exact.levels.iter().zip(&shot) {
            println!(
                "  n = {}  exact {:>16.10}  shooting {:>16.10}  rel. dev {:.1e}",
                l.index,
                l.energy,
                e,
                ((l.energy - e) / l.energy).abs()
            );
        }
    }
    Ok(())
}
