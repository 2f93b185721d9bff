//! Samples the effective potential of a charged hole and its uncharged twin
//! and reports where each barrier peaks.
//!
//! ```bash
//! cargo run --example potential_profile
//! ```

use greybound::BlackHole;

fn main() -> greybound::Result<()> {
    let charged = BlackHole::reissner_nordstrom(2.0, 1.0)?;
    let neutral = charged.uncharged();
    let l = 1;

    for (name, bh) in [("Q = 1", charged), ("Q = 0", neutral)] {
        let (r_plus, r_minus) = bh.horizons()?;
        let (r_peak, v_peak) = bh.potential_peak(l)?;
        println!("{name}: r_+ = {r_plus:.6}, r_- = {r_minus:.6}, peak V = {v_peak:.8} at r = {r_peak:.6}");
    }

    // uniform in r*, so the barrier looks like the textbook 1-D problem
    let r_plus = charged.r_plus()?;
    let profile = charged.sample_profile(l, r_plus * (1.0 + 1e-6), 25.0 * r_plus, 16)?;
    println!("\n{:>12} {:>12} {:>14}", "r", "r*", "V");
    for s in &profile.samples {
        println!("{:>12.6} {:>12.4} {:>14.6e}", s.r, s.r_star, s.potential);
    }
    if let Some(top) = profile.peak() {
        println!(
            "\nlargest sampled V = {:.8} at r* = {:.4}",
            top.potential, top.r_star
        );
    }
    Ok(())
}
