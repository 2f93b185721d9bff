//! The general bound with a trial function `h(r*)`. Choosing
//! `h = √(ω² − V)` above the barrier top tightens the `h = ω` bound.
//!
//! ```bash
//! cargo run --example general_h_bound
//! ```

use greybound::{bound_general_h, rn_bound, BlackHole, HFunction, Mode, QuadratureSpec};

fn main() -> greybound::Result<()> {
    let bh = BlackHole::reissner_nordstrom(2.0, 1.0)?;
    let l = 1;
    let (_, v_max) = bh.potential_peak(l)?;
    let spec = QuadratureSpec::default().with_rel_tol(1e-8);

    for factor in [1.5, 2.0, 4.0, 10.0] {
        let omega = (factor * v_max).sqrt();
        let mode = Mode::new(l, omega)?;
        let plain = rn_bound(&bh, mode)?;
        let wkb = HFunction::new(move |r_star: f64| {
            // outside the tabulated range r(r*) is effectively r_+ or ∞
            let v = bh
                .inverse_tortoise(r_star)
                .and_then(|r| bh.potential(l, r))
                .unwrap_or(0.0);
            (omega * omega - v).sqrt()
        });
        let tuned = bound_general_h(&bh, mode, &wkb, &spec)?;
        println!(
            "ω² = {factor:>4}·V_max: T ≥ {:.8} with h = ω, T ≥ {:.8} with h = √(ω² − V)",
            plain.t_lower, tuned.t_lower
        );
    }

    // constant h reproduces the h = ω bound
    let mode = Mode::new(l, 0.8)?;
    let constant = bound_general_h(&bh, mode, &HFunction::constant(0.8), &spec)?;
    println!(
        "\nh ≡ ω: {:.12} against closed form {:.12}",
        constant.integral_value,
        rn_bound(&bh, mode)?.integral_value
    );
    Ok(())
}
