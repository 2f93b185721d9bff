//! Acceptance suite. Runs as a plain binary so that every criterion prints
//! one PASS/FAIL line even when the run succeeds. Soft checks print WARN and
//! never fail the run.

use std::time::{Duration, Instant};

use greybound::bounds::{bound_by_quadrature, rn_bound, schwarzschild_bound};
use greybound::cli::run_with;
use greybound::numerics::{solve_second_order, OdeSpec, QuadratureSpec};
use greybound::scattering::{sweep, transmission_flat, ScatteringCuts, SweepPoint, CONVERGED_DEFECT};
use greybound::{BlackHole, Mode};
use num_complex::Complex64;

const DOMINANCE_SLACK: f64 = 1e-9;

struct Report {
    failed: Vec<u32>,
}

impl Report {
    fn record(&mut self, id: u32, title: &str, ok: bool, detail: String) {
        let status = if ok { "PASS" } else { "FAIL" };
        println!("criterion {id} [{status}] {title}: {detail}");
        if !ok {
            self.failed.push(id);
        }
    }

    fn soft(&self, id: u32, title: &str, ok: bool, detail: String) {
        let status = if ok { "ok" } else { "WARN" };
        println!("criterion {id} (soft, {status}) {title}: {detail}");
    }
}

fn bound_grid() -> Vec<(BlackHole, u32, f64)> {
    let mut grid = Vec::new();
    for gm in [1.0, 2.0, 4.0] {
        for fraction in [0.0, 0.3, 0.7, 0.95] {
            let neutral = BlackHole::new(1.0, gm, 0.0).unwrap();
            let bh = BlackHole::new(1.0, gm, fraction * neutral.max_charge()).unwrap();
            for l in 0..4 {
                for omega in [0.2, 0.5, 1.0, 2.0] {
                    grid.push((bh, l, omega));
                }
            }
        }
    }
    grid
}

fn closed_form_identity(report: &mut Report) {
    let start = Instant::now();
    let spec = QuadratureSpec::default();
    let mut worst = 0.0_f64;
    let mut errors = 0;
    let grid = bound_grid();
    for &(bh, l, omega) in &grid {
        let mode = Mode::new(l, omega).unwrap();
        match (rn_bound(&bh, mode), bound_by_quadrature(&bh, mode, &spec)) {
            (Ok(closed), Ok(quad)) => worst = worst.max((closed.integral_value - quad.integral_value).abs()),
            _ => errors += 1,
        }
    }
    let elapsed = start.elapsed();
    report.record(
        1,
        "closed form vs quadrature",
        errors == 0 && worst <= 1e-8 && elapsed < Duration::from_secs(10),
        format!(
            "{} points, max |Δ| = {worst:e} (≤ 1e-8), {errors} errors, {elapsed:.2?} (< 10 s)",
            grid.len()
        ),
    );
}

fn exact_values(report: &mut Report) {
    let charged = BlackHole::reissner_nordstrom(2.0, 1.0).unwrap();
    let neutral = BlackHole::schwarzschild(2.0).unwrap();
    let mode = Mode::new(1, 1.0).unwrap();
    let third = rn_bound(&charged, mode).unwrap().integral_value;
    let five_sixteenths = schwarzschild_bound(&neutral, mode).unwrap().integral_value;
    let via_rn = rn_bound(&neutral, mode).unwrap().integral_value;
    let e1 = (third - 1.0 / 3.0).abs();
    let e2 = (five_sixteenths - 5.0 / 16.0).abs();
    let e3 = (via_rn - 5.0 / 16.0).abs();
    report.record(
        2,
        "exact integral values",
        e1 <= 1e-12 && e2 <= 1e-15 && e3 <= 1e-15,
        format!("|I − 1/3| = {e1:e} (≤ 1e-12), |I − 5/16| = {e2:e} and {e3:e} (≤ 1e-15)"),
    );
}

fn uncharged_reduction(report: &mut Report) {
    let mut worst = 0.0_f64;
    for gm in [1.0, 2.0, 4.0] {
        let bh = BlackHole::new(1.0, gm, 0.0).unwrap();
        for l in 0..4 {
            for omega in [0.2, 0.5, 1.0, 2.0] {
                let mode = Mode::new(l, omega).unwrap();
                let a = rn_bound(&bh, mode).unwrap().integral_value;
                let b = schwarzschild_bound(&bh, mode).unwrap().integral_value;
                worst = worst.max((a - b).abs() / b);
            }
        }
    }
    report.record(
        3,
        "uncharged reduction",
        worst <= 1e-13,
        format!("max relative difference {worst:e} (≤ 1e-13)"),
    );
}

fn omega_grid() -> Vec<f64> {
    (0..50).map(|i| 0.1 + 1.9 * f64::from(i) / 49.0).collect()
}

/// The dominance sweep: `(charge, l, points)` for every grid combination.
fn dominance_sweeps() -> (Vec<(f64, u32, Vec<SweepPoint>)>, Duration) {
    let start = Instant::now();
    let omegas = omega_grid();
    let mut out = Vec::new();
    for charge in [0.0, 1.0] {
        let bh = BlackHole::reissner_nordstrom(2.0, charge).unwrap();
        for l in 0..3 {
            let points = sweep(&bh, l, &omegas, &OdeSpec::default(), ScatteringCuts::default()).unwrap();
            out.push((charge, l, points));
        }
    }
    (out, start.elapsed())
}

fn dominance_and_unitarity(report: &mut Report, sweeps: &[(f64, u32, Vec<SweepPoint>)], elapsed: Duration) {
    let mut converged = 0;
    let mut unconverged = Vec::new();
    let mut violations = Vec::new();
    let mut min_margin = f64::INFINITY;
    let mut max_defect = 0.0_f64;
    let mut max_excess = f64::NEG_INFINITY;
    let mut total = 0;
    for (charge, l, points) in sweeps {
        for point in points {
            total += 1;
            let bound = point.bound.as_ref().unwrap();
            match &point.scattering {
                Ok(result) if result.converged => {
                    converged += 1;
                    max_defect = max_defect.max(result.unitarity_defect);
                    min_margin = min_margin.min(result.transmission - bound.t_lower);
                    max_excess = max_excess.max(result.transmission - 1.0);
                    if result.transmission < bound.t_lower - DOMINANCE_SLACK
                        || result.reflection > bound.r_upper + DOMINANCE_SLACK
                    {
                        violations.push((*charge, *l, point.omega));
                    }
                }
                _ => unconverged.push((*charge, *l, point.omega)),
            }
        }
    }
    report.record(
        4,
        "bound dominance",
        violations.is_empty()
            && unconverged.is_empty()
            && max_excess <= CONVERGED_DEFECT
            && elapsed < Duration::from_secs(120),
        format!(
            "{converged}/{total} converged, {} violations, min T_num − T_bound = {min_margin:e}, max T_num − 1 = {max_excess:e} (≤ 1e-6), {elapsed:.2?} (< 120 s)",
            violations.len()
        ),
    );
    report.record(
        5,
        "unitarity",
        unconverged.is_empty() && max_defect <= 1e-6,
        format!("max |1 − (T + R)| = {max_defect:e} (≤ 1e-6) over {total} points"),
    );
}

fn charge_ordering(report: &mut Report, sweeps: &[(f64, u32, Vec<SweepPoint>)]) {
    let charged = BlackHole::reissner_nordstrom(2.0, 1.0).unwrap();
    let neutral = charged.uncharged();
    let mut broken = 0;
    for omega in omega_grid() {
        let mode = Mode::new(1, omega).unwrap();
        let rn = rn_bound(&charged, mode).unwrap();
        let schw = schwarzschild_bound(&neutral, mode).unwrap();
        if !(rn.t_lower <= schw.t_lower && rn.r_upper >= schw.r_upper) {
            broken += 1;
        }
    }
    report.record(
        6,
        "charge ordering of bounds",
        broken == 0,
        format!("{broken} of 50 frequencies break T_rn ≤ T_schw or R_rn ≥ R_schw (l = 1)"),
    );

    let mut soft_breaks = Vec::new();
    for l in 0..3 {
        let find = |charge: f64| {
            sweeps
                .iter()
                .find(|(c, ll, _)| *c == charge && *ll == l)
                .map(|(_, _, p)| p)
                .unwrap()
        };
        for (a, b) in find(1.0).iter().zip(find(0.0)) {
            if let (Some(t_charged), Some(t_neutral)) =
                (a.converged_transmission(), b.converged_transmission())
            {
                if t_charged > t_neutral {
                    soft_breaks.push((l, a.omega));
                }
            }
        }
    }
    report.soft(
        6,
        "numeric transmission ordering T(Q=1) ≤ T(Q=0)",
        soft_breaks.is_empty(),
        if soft_breaks.is_empty() {
            "holds at every converged point".to_string()
        } else {
            format!(
                "reversed at {} points, e.g. (l, ω) = {:?}",
                soft_breaks.len(),
                soft_breaks[0]
            )
        },
    );
}

fn run_cli(args: &[&str]) -> (i32, String, String) {
    let mut stdout = Vec::new();
    let mut stderr = Vec::new();
    let code = run_with(
        std::iter::once("greybound").chain(args.iter().copied()),
        &mut stdout,
        &mut stderr,
    );
    (
        code,
        String::from_utf8(stdout).unwrap(),
        String::from_utf8(stderr).unwrap(),
    )
}

fn potential_sanity(report: &mut Report) {
    let mut horizon_ok = true;
    let mut positive_ok = true;
    let mut worst_ratio = 0.0_f64;
    for gm in [1.0, 2.0, 4.0] {
        for fraction in [0.0, 0.3, 0.7, 0.95] {
            let neutral = BlackHole::new(1.0, gm, 0.0).unwrap();
            let bh = BlackHole::new(1.0, gm, fraction * neutral.max_charge()).unwrap();
            let r_plus = bh.r_plus().unwrap();
            for l in 0..4 {
                let (_, v_max) = bh.potential_peak(l).unwrap();
                let near = bh.potential(l, r_plus * (1.0 + 1e-10)).unwrap();
                worst_ratio = worst_ratio.max(near / v_max);
                horizon_ok &= near <= 1e-8 * v_max;
                let profile = bh
                    .sample_profile(l, r_plus * (1.0 + 1e-6), 50.0 * r_plus, 400)
                    .unwrap();
                positive_ok &= profile.samples.iter().all(|s| s.potential > 0.0);
            }
        }
    }

    let (code, csv, log) = run_cli(&["potential", "--preset", "fig2"]);
    let mut lines = csv.lines();
    let header_ok = lines.next().is_some_and(|l| l.starts_with('#'));
    let columns_ok = lines.next() == Some("r,r_star,V_rn,V_schwarzschild");
    let filled = lines
        .filter(|row| {
            let cells: Vec<&str> = row.split(',').collect();
            cells.len() == 4 && !cells[2].is_empty() && !cells[3].is_empty()
        })
        .count();
    let relation = log
        .lines()
        .find(|l| l.contains("charged peak is"))
        .map(|l| l.rsplit(';').next().unwrap_or(l).trim().to_string())
        .unwrap_or_default();
    report.record(
        7,
        "potential sanity",
        horizon_ok && positive_ok && code == 0 && header_ok && columns_ok && filled > 0 && !relation.is_empty(),
        format!(
            "max V(r_+(1+1e-10))/V_max = {worst_ratio:e} (≤ 1e-8), V > 0 on all profiles: {positive_ok}, fig2 CSV has both columns ({filled} full rows); {relation}"
        ),
    );
}

fn square_barrier_exact(omega: f64, v0: f64, width: f64) -> f64 {
    let w2 = omega * omega;
    if w2 < v0 {
        let k = (v0 - w2).sqrt();
        1.0 / (1.0 + v0 * v0 * (k * width).sinh().powi(2) / (4.0 * w2 * (v0 - w2)))
    } else {
        let k = (w2 - v0).sqrt();
        1.0 / (1.0 + v0 * v0 * (k * width).sin().powi(2) / (4.0 * w2 * (w2 - v0)))
    }
}

fn oracle_self_tests(report: &mut Report, sweeps: &[(f64, u32, Vec<SweepPoint>)]) {
    let spec = OdeSpec::default();
    let mut barrier_err = 0.0_f64;
    for (omega, v0, width) in [(0.5, 1.0, 2.0), (0.9, 1.0, 3.0), (1.2, 0.5, 4.0), (0.3, 0.2, 1.5)] {
        let t = transmission_flat(|_| v0, &[0.0, width], omega, &spec)
            .unwrap()
            .transmission;
        barrier_err = barrier_err.max((t - square_barrier_exact(omega, v0, width)).abs());
    }

    let tight = OdeSpec::default().with_rel_tol(1e-12);
    let free = transmission_flat(|_| 0.0, &[0.0, 10.0], 0.8, &tight).unwrap();
    let free_err = (free.transmission - 1.0).abs();

    // Wronskian of two real-potential solutions over the longest scattering domain
    let bh = BlackHole::reissner_nordstrom(2.0, 1.0).unwrap();
    let (l, omega) = (2, 0.1);
    let domain = sweeps
        .iter()
        .flat_map(|(_, _, points)| points)
        .filter_map(|p| p.scattering.as_ref().ok().map(|s| s.domain))
        .max_by(|a, b| (a.1 - a.0).total_cmp(&(b.1 - b.0)))
        .unwrap();
    let q = |r_star: f64| {
        let r = bh.inverse_tortoise(r_star).unwrap();
        Complex64::new(omega * omega - bh.potential(l, r).unwrap(), 0.0)
    };
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let a = solve_second_order(q, domain, one, zero, &spec).unwrap();
    let b = solve_second_order(q, domain, zero, one, &spec).unwrap();
    let w = a.psi * b.dpsi - a.dpsi * b.psi;
    let drift = (w - one).norm() / ((a.psi * b.dpsi).norm() + (a.dpsi * b.psi).norm());

    report.record(
        8,
        "oracle self-tests",
        barrier_err <= 1e-8 && free_err <= 1e-10 && drift <= 1e-8,
        format!(
            "square barrier max |ΔT| = {barrier_err:e} (≤ 1e-8), free |T − 1| = {free_err:e} (≤ 1e-10, rel_tol 1e-12), Wronskian drift = {drift:e} (≤ 1e-8) over r* ∈ [{:.1}, {:.1}]",
            domain.0, domain.1
        ),
    );
}

fn tortoise_consistency(report: &mut Report) {
    // (G, M, Q) for the sub-extremal, extremal and super-extremal branches
    let cases = [
        ("sub-extremal", 1.0, 2.0, 1.0),
        ("extremal", 1.0, 1.0, 1.0),
        ("super-extremal", 1.0, 1.0, 1.5),
    ];
    let mut details = Vec::new();
    let mut ok = true;
    for (name, g, m, q) in cases {
        let bh = BlackHole::new(g, m, q).unwrap();
        // outer horizon, or GM where there is none
        let (singular, reference) = match bh.r_plus() {
            Ok(r_plus) => (r_plus, r_plus),
            Err(_) if name == "extremal" => (bh.gm(), bh.gm()),
            Err(_) => (0.0, bh.gm()),
        };
        let mut worst = 0.0_f64;
        let n = 2000;
        for i in 0..n {
            let ratio = 1.01 * (100.0_f64 / 1.01).powf(f64::from(i) / f64::from(n - 1));
            let r = ratio * reference;
            let step = 1e-4 * (r - singular).min(r);
            let derivative = (bh.tortoise(r + step).unwrap() - bh.tortoise(r - step).unwrap()) / (2.0 * step);
            worst = worst.max((bh.delta(r).unwrap() * derivative - 1.0).abs());
        }
        ok &= worst <= 1e-6;
        details.push(format!("{name} {worst:.1e}"));
    }
    report.record(
        9,
        "tortoise consistency",
        ok,
        format!(
            "max |Δ·dr*/dr − 1| on r/r_ref ∈ [1.01, 100]: {} (≤ 1e-6)",
            details.join(", ")
        ),
    );
}

fn main() {
    let mut report = Report { failed: Vec::new() };
    closed_form_identity(&mut report);
    exact_values(&mut report);
    uncharged_reduction(&mut report);
    let (sweeps, elapsed) = dominance_sweeps();
    dominance_and_unitarity(&mut report, &sweeps, elapsed);
    charge_ordering(&mut report, &sweeps);
    potential_sanity(&mut report);
    oracle_self_tests(&mut report, &sweeps);
    tortoise_consistency(&mut report);
    if report.failed.is_empty() {
        println!("acceptance: all 9 criteria passed");
    } else {
        println!("acceptance: failed criteria {:?}", report.failed);
        std::process::exit(1);
    }
}
