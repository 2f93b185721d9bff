//! Validates the wave-equation solver on a flat-space square barrier, where
//! the transmission probability is known exactly.
//!
//! ```bash
//! cargo run --example square_barrier
//! ```

use greybound::numerics::{solve_second_order, OdeSpec};
use greybound::scattering::transmission_flat;
use num_complex::Complex64;

fn exact(omega: f64, v0: f64, width: f64) -> f64 {
    let w2 = omega * omega;
    let k = (v0 - w2).abs().sqrt();
    let s = if w2 < v0 {
        (k * width).sinh()
    } else {
        (k * width).sin()
    };
    1.0 / (1.0 + v0 * v0 * s * s / (4.0 * w2 * (v0 - w2).abs()))
}

fn main() -> greybound::Result<()> {
    let spec = OdeSpec::default();
    let (v0, width) = (1.0, 2.0);
    println!("{:>6} {:>16} {:>16} {:>10}", "ω", "numeric", "exact", "error");
    for omega in [0.3, 0.6, 0.9, 1.2, 1.5] {
        let t = transmission_flat(|_| v0, &[0.0, width], omega, &spec)?.transmission;
        let e = exact(omega, v0, width);
        println!("{omega:>6} {t:>16.12} {e:>16.12} {:>10.1e}", t - e);
    }

    // the underlying second-order solver on a free wave
    let omega = 0.7;
    let q = |_x: f64| Complex64::new(omega * omega, 0.0);
    let start = Complex64::new(1.0, 0.0);
    let sol = solve_second_order(q, (0.0, 30.0), start, -Complex64::i() * omega, &spec)?;
    let expected = (-Complex64::i() * omega * 30.0).exp();
    println!(
        "\nfree wave after 30 units: error {:.1e} in {} steps",
        (sol.psi - expected).norm(),
        sol.steps
    );
    Ok(())
}
