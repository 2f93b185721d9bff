//! Solves the radial wave equation directly and checks that the numeric
//! transmission never falls below the closed-form bound.
//!
//! ```bash
//! cargo run --release --example scattering_verification
//! ```

use greybound::scattering::CONVERGED_DEFECT;
use greybound::{sweep, transmission_numeric, BlackHole, Mode, OdeSpec, ScatteringCuts};

fn main() -> greybound::Result<()> {
    let bh = BlackHole::reissner_nordstrom(2.0, 1.0)?;
    let spec = OdeSpec::default();

    let single = transmission_numeric(&bh, Mode::new(1, 0.3)?, &spec, ScatteringCuts::default())?;
    println!(
        "l = 1, ω = 0.3: T = {:.10}, R = {:.10}, |1 − T − R| = {:.1e}, r* ∈ [{:.1}, {:.1}], {} steps",
        single.transmission,
        single.reflection,
        single.unitarity_defect,
        single.domain.0,
        single.domain.1,
        single.steps
    );

    let omegas: Vec<f64> = (1..=20).map(|i| 0.05 * f64::from(i)).collect();
    println!("\n{:>6} {:>14} {:>14} {:>12}", "ω", "T_num", "T_bound", "margin");
    for point in sweep(&bh, 1, &omegas, &spec, ScatteringCuts::default())? {
        let bound = point.bound?;
        match point.scattering {
            Ok(result) => println!(
                "{:>6.2} {:>14.10} {:>14.10} {:>12.3e}{}",
                point.omega,
                result.transmission,
                bound.t_lower,
                result.transmission - bound.t_lower,
                if result.unitarity_defect > CONVERGED_DEFECT {
                    "  (unconverged)"
                } else {
                    ""
                }
            ),
            Err(err) => println!("{:>6.2} failed: {err}", point.omega),
        }
    }
    Ok(())
}
