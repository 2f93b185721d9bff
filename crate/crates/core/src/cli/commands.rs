use std::io::Write;

use crate::bounds::{rn_bound, schwarzschild_bound, BoundMetadata, BoundMethod, BoundResult};
use crate::cli::config::RunConfig;
use crate::error::{Error, Result};
use crate::scattering::{sweep, transmission_drops, transmission_flat, ScatteringResult, SweepPoint};
use crate::spacetime::{BlackHole, Extremality, Mode};

/// Slack on bound dominance that absorbs solver noise.
pub const DOMINANCE_SLACK: f64 = 1e-9;

fn io_error(err: std::io::Error) -> Error {
    Error::InvalidParameter(format!("write failed: {err}"))
}

/// CSV float formatting: shortest round-trip representation.
fn num(x: f64) -> String {
    x.to_string()
}

/// `r, r_star, V_rn, V_schwarzschild`, sampled uniformly in `r*`. The
/// uncharged column is blank where `r` lies inside its horizon `2GM`.
pub fn cmd_potential(config: &RunConfig, csv: &mut dyn Write, log: &mut dyn Write) -> Result<()> {
    config.validate_numerics()?;
    let bh = config.sub_extremal_hole()?;
    bh.ensure_resolved()?;
    let r_plus = bh.r_plus()?;
    let grid = config.r_grid.unwrap_or(crate::cli::config::RGrid {
        min: r_plus * (1.0 + 1e-6),
        max: 25.0 * r_plus,
        count: 400,
    });
    grid.validate()?;
    let profile = bh.sample_profile(config.l, grid.min, grid.max, grid.count)?;
    let neutral = bh.uncharged();
    let neutral_horizon = neutral.r_plus()?;

    let mut effective = config.clone();
    effective.r_grid = Some(grid);
    let mut text = String::new();
    text.push_str(&effective.header("potential"));
    text.push_str("\nr,r_star,V_rn,V_schwarzschild\n");
    for s in &profile.samples {
        let neutral_v = if s.r >= neutral_horizon {
            num(neutral.potential(config.l, s.r)?)
        } else {
            String::new()
        };
        text.push_str(&format!(
            "{},{},{},{}\n",
            num(s.r),
            num(s.r_star),
            num(s.potential),
            neutral_v
        ));
    }
    csv.write_all(text.as_bytes()).map_err(io_error)?;

    let (r_peak, v_peak) = bh.potential_peak(config.l)?;
    let (r_neutral, v_neutral) = neutral.potential_peak(config.l)?;
    let relation = if v_peak > v_neutral {
        "higher than"
    } else if v_peak < v_neutral {
        "lower than"
    } else {
        "equal to"
    };
    writeln!(
        log,
        "potential: peak V = {v_peak} at r = {r_peak} (Q = {}); uncharged peak V = {v_neutral} at r = {r_neutral}; charged peak is {relation} the uncharged one",
        bh.charge()
    )
    .map_err(io_error)?;
    Ok(())
}

/// `omega, T_bound_rn, T_bound_schw, R_bound_rn, R_bound_schw`.
pub fn cmd_bounds(config: &RunConfig, csv: &mut dyn Write) -> Result<()> {
    config.validate_numerics()?;
    let bh = config.sub_extremal_hole()?;
    let neutral = bh.uncharged();
    let omegas = config.omega.values()?;
    let mut text = config.header("bounds");
    text.push_str("\nomega,T_bound_rn,T_bound_schw,R_bound_rn,R_bound_schw\n");
    for omega in omegas {
        let mode = Mode::new(config.l, omega)?;
        let charged = rn_bound(&bh, mode)?;
        let uncharged = schwarzschild_bound(&neutral, mode)?;
        text.push_str(&format!(
            "{},{},{},{},{}\n",
            num(omega),
            num(charged.t_lower),
            num(uncharged.t_lower),
            num(charged.r_upper),
            num(uncharged.r_upper)
        ));
    }
    csv.write_all(text.as_bytes()).map_err(io_error)
}

/// Test hooks for the verification harness.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct VerifyHooks {
    /// Replace the black-hole potential by `V ≡ 0`; the bound becomes `sech²(0) = 1`.
    pub free_potential: bool,
    /// Added to every transmission bound, to check the harness flags violations.
    pub bound_offset: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifySummary {
    pub points: usize,
    pub converged: usize,
    /// Frequencies whose scattering solve failed or did not converge.
    pub failures: Vec<f64>,
    /// Frequencies where a converged point violates bound dominance.
    pub violations: Vec<f64>,
    pub min_margin: f64,
    pub max_defect: f64,
}

fn free_point(omega: f64, config: &RunConfig) -> SweepPoint {
    let scattering = transmission_flat(|_| 0.0, &[0.0, 1.0], omega, &config.ode_spec());
    let trivial = BoundResult::from_integral(0.0, BoundMethod::QuadratureHOmega, BoundMetadata::default());
    SweepPoint {
        omega,
        scattering,
        bound: Ok(trivial),
        schwarzschild_bound: Ok(trivial),
    }
}

/// Runs the scattering sweep and checks `T_num ≥ T_bound` and
/// `R_num ≤ R_bound` at every converged point.
pub fn cmd_verify(
    config: &RunConfig,
    hooks: VerifyHooks,
    csv: &mut dyn Write,
    log: &mut dyn Write,
) -> Result<VerifySummary> {
    config.validate_numerics()?;
    let omegas = config.omega.values()?;
    let points = if hooks.free_potential {
        omegas.iter().map(|&w| free_point(w, config)).collect::<Vec<_>>()
    } else {
        let bh = config.sub_extremal_hole()?;
        bh.ensure_resolved()?;
        sweep(&bh, config.l, &omegas, &config.ode_spec(), config.cuts())?
    };

    let mut summary = VerifySummary {
        points: points.len(),
        converged: 0,
        failures: Vec::new(),
        violations: Vec::new(),
        min_margin: f64::INFINITY,
        max_defect: 0.0,
    };
    let mut text = config.header("verify");
    text.push_str("\nomega,T_num,R_num,T_bound,R_bound,unitarity_defect,bound_margin\n");

    for point in &points {
        let bound = point.bound.clone()?;
        let t_bound = bound.t_lower + hooks.bound_offset;
        let r_bound = bound.r_upper;
        let result: Option<&ScatteringResult> = match &point.scattering {
            Ok(result) => Some(result),
            Err(Error::NotConverged(result)) => Some(result),
            Err(err) => {
                writeln!(log, "verify: ω = {}: {err}", point.omega).map_err(io_error)?;
                None
            }
        };
        match result {
            Some(r) => {
                let margin = r.transmission - t_bound;
                summary.max_defect = summary.max_defect.max(r.unitarity_defect);
                if r.converged {
                    summary.converged += 1;
                    summary.min_margin = summary.min_margin.min(margin);
                    if r.transmission < t_bound - DOMINANCE_SLACK || r.reflection > r_bound + DOMINANCE_SLACK
                    {
                        summary.violations.push(point.omega);
                        writeln!(
                            log,
                            "verify: BOUND VIOLATION at ω = {}: T_num = {}, T_bound = {t_bound}, R_num = {}, R_bound = {r_bound}",
                            point.omega, r.transmission, r.reflection
                        )
                        .map_err(io_error)?;
                    }
                } else {
                    summary.failures.push(point.omega);
                    writeln!(
                        log,
                        "verify: ω = {}: not converged (unitarity defect {:e})",
                        point.omega, r.unitarity_defect
                    )
                    .map_err(io_error)?;
                }
                text.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    num(point.omega),
                    num(r.transmission),
                    num(r.reflection),
                    num(t_bound),
                    num(r_bound),
                    num(r.unitarity_defect),
                    num(margin)
                ));
            }
            None => {
                summary.failures.push(point.omega);
                text.push_str(&format!(
                    "{},,,{},{},,\n",
                    num(point.omega),
                    num(t_bound),
                    num(r_bound)
                ));
            }
        }
    }
    csv.write_all(text.as_bytes()).map_err(io_error)?;

    let drops = transmission_drops(&points, DOMINANCE_SLACK);
    if !drops.is_empty() {
        let at: Vec<String> = drops.iter().map(|&i| num(points[i].omega)).collect();
        writeln!(
            log,
            "verify: warning: numeric transmission decreases at ω = {}",
            at.join(", ")
        )
        .map_err(io_error)?;
    }
    writeln!(
        log,
        "verify: {} points, {} converged, min bound_margin = {}, max unitarity_defect = {:e}, violations = {}",
        summary.points,
        summary.converged,
        summary.min_margin,
        summary.max_defect,
        summary.violations.len()
    )
    .map_err(io_error)?;
    Ok(summary)
}

fn branch_label(bh: &BlackHole) -> &'static str {
    bh.class().label()
}

/// `r, r_star, branch, residual` with `residual = |Δ·dr*/dr − 1|` from a
/// central difference.
pub fn cmd_tortoise(config: &RunConfig, csv: &mut dyn Write, log: &mut dyn Write) -> Result<()> {
    config.validate_numerics()?;
    let bh = config.black_hole()?;
    let gm = bh.gm();
    // inner edge of the valid region, and the scale the default grid is built on
    let (singular, reference) = match bh.class() {
        Extremality::SubExtremal => {
            bh.ensure_resolved()?;
            let r_plus = bh.r_plus()?;
            (r_plus, r_plus)
        }
        Extremality::Extremal => (gm, gm),
        Extremality::SuperExtremal => {
            writeln!(
                log,
                "tortoise: warning: G·M² < Q² describes a naked singularity, not a physical black hole; values are for inspection only"
            )
            .map_err(io_error)?;
            (0.0, gm)
        }
    };
    let grid = config.r_grid.unwrap_or(crate::cli::config::RGrid {
        min: 1.01 * reference,
        max: 100.0 * reference,
        count: 200,
    });
    grid.validate()?;
    if !(grid.min > singular) {
        return Err(Error::Domain(format!(
            "r grid must start beyond r = {singular} for a {} hole",
            bh.class()
        )));
    }

    let mut effective = config.clone();
    effective.r_grid = Some(grid);
    let mut text = effective.header("tortoise");
    text.push_str("\nr,r_star,branch,residual\n");
    let label = branch_label(&bh);
    for r in grid.values() {
        let r_star = bh.tortoise(r)?;
        let step = 1e-4 * (r - singular).min(r);
        let derivative = (bh.tortoise(r + step)? - bh.tortoise(r - step)?) / (2.0 * step);
        let residual = (bh.delta(r)? * derivative - 1.0).abs();
        text.push_str(&format!("{},{},{label},{}\n", num(r), num(r_star), num(residual)));
    }
    csv.write_all(text.as_bytes()).map_err(io_error)
}
