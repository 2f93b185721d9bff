//! Closed-form transmission and reflection bounds, and how charge lowers the
//! transmission bound at fixed mass.
//!
//! ```bash
//! cargo run --example closed_form_bounds
//! ```

use greybound::{rn_bound, schwarzschild_bound, BlackHole, Mode};

fn main() -> greybound::Result<()> {
    let neutral = BlackHole::schwarzschild(2.0)?;
    println!(
        "{:>6} {:>12} {:>12} {:>12} {:>12}",
        "ω", "T (Q=0)", "T (Q=1)", "T (Q=1.9)", "R (Q=1.9)"
    );
    for omega in [0.1, 0.25, 0.5, 1.0, 2.0] {
        let mode = Mode::new(1, omega)?;
        let t0 = schwarzschild_bound(&neutral, mode)?;
        let t1 = rn_bound(&BlackHole::reissner_nordstrom(2.0, 1.0)?, mode)?;
        let t2 = rn_bound(&BlackHole::reissner_nordstrom(2.0, 1.9)?, mode)?;
        println!(
            "{omega:>6} {:>12.8} {:>12.8} {:>12.8} {:>12.8}",
            t0.t_lower, t1.t_lower, t2.t_lower, t2.r_upper
        );
    }

    let bound = rn_bound(&BlackHole::reissner_nordstrom(2.0, 1.0)?, Mode::new(1, 1.0)?)?;
    println!(
        "\nG = 1, M = 2, Q = 1, l = 1, ω = 1: integral = {} ({}), T ≥ {:.10}, R ≤ {:.10}",
        bound.integral_value, bound.method, bound.t_lower, bound.r_upper
    );
    Ok(())
}
