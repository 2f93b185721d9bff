//! The `h = ω` bound by quadrature, with both ways of handling the infinite
//! upper limit, checked against the closed form.
//!
//! ```bash
//! cargo run --example quadrature_bounds
//! ```

use greybound::{bound_by_quadrature, rn_bound, BlackHole, Mode, QuadratureSpec, TailStrategy};

fn main() -> greybound::Result<()> {
    let bh = BlackHole::reissner_nordstrom(2.0, 1.5)?;
    let compact = QuadratureSpec::default();
    let truncated = QuadratureSpec::default().with_tail(TailStrategy::AnalyticTail { cutoff: 200.0 });

    for l in 0..4 {
        let mode = Mode::new(l, 0.5)?;
        let exact = rn_bound(&bh, mode)?.integral_value;
        let a = bound_by_quadrature(&bh, mode, &compact)?;
        let b = bound_by_quadrature(&bh, mode, &truncated)?;
        println!(
            "l = {l}: closed {exact:.15}  compactified {:+.1e} ({} subdivisions)  cutoff+tail {:+.1e} ({} subdivisions)",
            a.integral_value - exact,
            a.metadata.subdivisions.unwrap_or(0),
            b.integral_value - exact,
            b.metadata.subdivisions.unwrap_or(0)
        );
    }
    Ok(())
}
