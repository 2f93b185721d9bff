//! The adaptive Gauss-Kronrod integrator on its own, including a
//! semi-infinite interval.
//!
//! ```bash
//! cargo run --example adaptive_quadrature
//! ```

use greybound::numerics::{integrate, QuadratureSpec, TailStrategy};

fn main() -> greybound::Result<()> {
    let spec = QuadratureSpec::default();

    let r = integrate(|x| 1.0 / ((1.0 + x) * (1.0 + x)), 0.0, f64::INFINITY, &spec)?;
    println!(
        "∫₀^∞ dx/(1+x)² = {} (error estimate {:.1e}, {} subdivisions, {})",
        r.value, r.error_estimate, r.subdivisions, r.rule
    );

    let r = integrate(|x: f64| x.sqrt().ln(), 0.0, 1.0, &spec)?;
    println!(
        "∫₀¹ ln√x dx = {} (exact −0.5), {} evaluations",
        r.value, r.evaluations
    );

    let cutoff = spec.with_tail(TailStrategy::AnalyticTail { cutoff: 1e3 });
    let r = integrate(|x| 1.0 / (x * x), 1.0, f64::INFINITY, &cutoff)?;
    println!("∫₁^∞ dx/x² with a 1/x² tail beyond 1000 = {}", r.value);
    Ok(())
}
