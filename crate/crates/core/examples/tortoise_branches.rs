//! The tortoise coordinate on all three branches, plus the inverse map on a
//! sub-extremal exterior.
//!
//! ```bash
//! cargo run --example tortoise_branches
//! ```

use greybound::BlackHole;

fn main() -> greybound::Result<()> {
    let holes = [
        BlackHole::new(1.0, 2.0, 1.0)?,
        BlackHole::new(1.0, 1.0, 1.0)?,
        BlackHole::new(1.0, 1.0, 1.5)?,
    ];
    for bh in holes {
        println!("{} (GM = {}, GQ² = {}):", bh.class(), bh.gm(), bh.gq2());
        for r in [4.0, 5.0, 10.0, 100.0] {
            let r_star = bh.tortoise(r)?;
            // dr*/dr should equal 1/Δ
            let step = 1e-5 * r;
            let slope = (bh.tortoise(r + step)? - bh.tortoise(r - step)?) / (2.0 * step);
            println!(
                "  r = {r:>6}: r* = {r_star:>14.8}, Δ·dr*/dr − 1 = {:.1e}",
                bh.delta(r)? * slope - 1.0
            );
        }
    }

    let bh = holes[0];
    let r_plus = bh.r_plus()?;
    println!("\ninverse on the exterior of r_+ = {r_plus:.6}:");
    for r_star in [-40.0, -5.0, 0.0, 10.0, 200.0] {
        let offset = bh.inverse_tortoise_offset(r_star)?;
        let back = bh.tortoise(r_plus + offset)?;
        println!(
            "  r* = {r_star:>6}: r − r_+ = {offset:.6e}, round trip error = {:.1e}",
            back - r_star
        );
    }
    Ok(())
}
