//! Direct numerical solution of the radial scattering problem.
//!
//! A purely ingoing wave `ψ ~ e^{−iωr*}` is imposed just outside the outer
//! horizon and integrated outward to a far cut, where `ψ` is split into
//! incoming and outgoing parts. With that normalisation
//! `T = 1/|A_in|²` and `R = |A_out|²/|A_in|²`.
//!
//! The integration runs in `r` rather than `r*` using `d/dr* = Δ d/dr`, so no
//! inversion of the tortoise map is needed. Both boundary conditions use
//! series solutions instead of bare exponentials: a Frobenius expansion in
//! `r − r_+` at the horizon cut and the asymptotic `1/r` expansion at the far
//! cut. The potential tail falls off only as `l(l+1)/r²`, and plain
//! exponentials at a finite far cut would leave an error of order
//! `l(l+1)/(ω²r_far)` in the decomposition.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bounds::{rn_bound, schwarzschild_bound, BoundResult};
use crate::error::{Error, Result};
use crate::numerics::{integrate_system, solve_second_order, OdeOutcome, OdeSpec, State};
use crate::spacetime::{angular_factor, BlackHole, Mode};

/// Largest unitarity defect for which a solution counts as converged.
pub const CONVERGED_DEFECT: f64 = 1e-6;

/// Defect beyond which the solver reports [`Error::NotConverged`].
pub const FAILED_DEFECT: f64 = 1e-4;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Series terms kept at the horizon cut.
const HORIZON_TERMS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringCuts {
    /// Horizon-side cut at `r = r_+(1 + eps_horizon)`.
    pub eps_horizon: f64,
    /// Far cut; defaults to `max(50 r_+, 20(l+1)/ω)`.
    pub r_far: Option<f64>,
}

impl Default for ScatteringCuts {
    fn default() -> Self {
        Self {
            eps_horizon: 1e-6,
            r_far: None,
        }
    }
}

impl ScatteringCuts {
    pub fn far_cut(&self, r_plus: f64, mode: Mode) -> f64 {
        self.r_far
            .unwrap_or_else(|| (50.0 * r_plus).max(20.0 * f64::from(mode.l + 1) / mode.omega))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringResult {
    pub transmission: f64,
    pub reflection: f64,
    /// `|1 − (T + R)|`
    pub unitarity_defect: f64,
    /// `(r*_horizon_cut, r*_far_cut)` actually used.
    pub domain: (f64, f64),
    pub converged: bool,
    pub steps: usize,
}

impl ScatteringResult {
    fn from_amplitudes(a_in: Complex64, a_out: Complex64, domain: (f64, f64), steps: usize) -> Self {
        let norm_in = a_in.norm_sqr();
        let transmission = 1.0 / norm_in;
        let reflection = a_out.norm_sqr() / norm_in;
        let unitarity_defect = (1.0 - (transmission + reflection)).abs();
        Self {
            transmission,
            reflection,
            unitarity_defect,
            domain,
            converged: unitarity_defect <= CONVERGED_DEFECT,
            steps,
        }
    }

    fn checked(self) -> Result<Self> {
        if self.unitarity_defect > FAILED_DEFECT || !self.unitarity_defect.is_finite() {
            Err(Error::NotConverged(Box::new(self)))
        } else {
            Ok(self)
        }
    }
}

fn series_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().min(b.len());
    (0..n).map(|k| (0..=k).map(|j| a[j] * b[k - j]).sum()).collect()
}

/// Frobenius solution `ψ = e^{−iωr*} h(r)` regular at the outer horizon,
/// with `h(r_+) = 1`. Returns `(h, dh/dr)` at `r_+ + x`.
fn horizon_series(bh: &BlackHole, l: u32, omega: f64, x: f64) -> Result<(Complex64, Complex64)> {
    let (r_plus, r_minus) = bh.horizons()?;
    let separation = r_plus - r_minus;
    if !(x > 0.0 && x <= 0.05 * separation) {
        return Err(Error::Domain(format!(
            "horizon cut r − r_+ = {x} must lie in (0, {}]",
            0.05 * separation
        )));
    }
    let n = HORIZON_TERMS + 2;

    // Taylor coefficients in x = r − r_+ of 1/r, 1/r², 1/r³, 1/r⁴.
    let inv1: Vec<f64> = (0..n)
        .map(|k| if k % 2 == 0 { 1.0 } else { -1.0 } / r_plus.powi(k as i32 + 1))
        .collect();
    let inv2 = series_mul(&inv1, &inv1);
    let inv3 = series_mul(&inv2, &inv1);
    let inv4 = series_mul(&inv2, &inv2);

    // Δ = x(x + r_+ − r_-)/r²
    let mut numerator = vec![0.0; n];
    numerator[1] = separation;
    numerator[2] = 1.0;
    let delta = series_mul(&numerator, &inv2);
    let delta_prime: Vec<f64> = (0..n - 1).map(|k| (k + 1) as f64 * delta[k + 1]).collect();
    let ll = angular_factor(l);
    let w: Vec<f64> = (0..n)
        .map(|k| ll * inv2[k] + 2.0 * bh.gm() * inv3[k] - 2.0 * bh.gq2() * inv4[k])
        .collect();

    // (Δ' − 2iω) h' + Δ h'' − W h = 0, order by order in x.
    let p = |k: usize| -> Complex64 {
        let base = Complex64::new(delta_prime[k], 0.0);
        if k == 0 {
            base - 2.0 * I * omega
        } else {
            base
        }
    };
    let mut b = vec![Complex64::new(0.0, 0.0); HORIZON_TERMS + 1];
    b[0] = Complex64::new(1.0, 0.0);
    for m in 0..HORIZON_TERMS {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..=m {
            acc += w[m - k] * b[k];
        }
        for k in 0..m {
            acc -= p(m - k) * ((k + 1) as f64) * b[k + 1];
        }
        for (j, d) in delta.iter().enumerate().take(m + 1).skip(2) {
            let k = m - j;
            acc -= d * ((k + 2) as f64 * (k + 1) as f64) * b[k + 2];
        }
        let denom = ((m + 1) as f64) * (((m + 1) as f64) * delta[1] - 2.0 * I * omega);
        b[m + 1] = acc / denom;
    }

    let mut h = Complex64::new(0.0, 0.0);
    let mut h_r = Complex64::new(0.0, 0.0);
    let mut power = 1.0;
    for (k, coeff) in b.iter().enumerate() {
        if k > 0 {
            h_r += *coeff * (k as f64) * power;
            power *= x;
        }
        h += *coeff * power;
    }
    let last = b[HORIZON_TERMS].norm() * x.powi(HORIZON_TERMS as i32);
    if !(last <= 1e-16 * h.norm()) {
        return Err(Error::Domain(format!(
            "horizon series not converged at r − r_+ = {x} (last term {last:e})"
        )));
    }
    Ok((h, h_r))
}

/// Asymptotic solution `ψ = e^{+iωr*} g(r)` with `g → 1` at infinity.
/// Returns `(g, dg/dr)` at `r`, summed to the smallest term.
fn far_series(bh: &BlackHole, l: u32, omega: f64, r: f64) -> Result<(Complex64, Complex64)> {
    let ll = angular_factor(l);
    let gm = bh.gm();
    let gq2 = bh.gq2();
    // a_k r^{-k} terms with a_0 = 1
    let mut a = [Complex64::new(0.0, 0.0); 3]; // a_{k-1}, a_{k-2}, a_{k-3}
    a[0] = Complex64::new(1.0, 0.0);
    let mut g = Complex64::new(1.0, 0.0);
    let mut g_r = Complex64::new(0.0, 0.0);
    let mut previous = f64::INFINITY;
    // sizes of the last three terms; the recursion reaches back three steps,
    // so a single vanishing coefficient (a_1 for l = 0) says nothing
    let mut recent = [f64::INFINITY; 3];
    let mut converged = false;
    for k in 1..400 {
        let kf = k as f64;
        let numerator = (kf * (kf - 1.0) - ll) * a[0] - 2.0 * gm * (kf - 1.0).powi(2) * a[1]
            + gq2 * (kf - 1.0) * (kf - 2.0) * a[2];
        let a_k = numerator / (2.0 * I * omega * kf);
        let term = a_k * r.powi(-k);
        let size = term.norm();
        if k > 4 && previous > 0.0 && size > previous {
            // asymptotic series: stop at the smallest term
            converged = previous <= 1e-15 * g.norm();
            break;
        }
        g += term;
        g_r -= term * (kf / r);
        a = [a_k, a[0], a[1]];
        previous = size;
        recent = [size, recent[0], recent[1]];
        if recent.iter().all(|&t| t <= 1e-17 * g.norm()) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Domain(format!(
            "far cut r = {r} too close for the asymptotic expansion at ω = {omega}, l = {l}"
        )));
    }
    Ok((g, g_r))
}

/// Integrates `(ψ, dψ/dr*)` between offsets `x = r − r_+`, using
/// `s = ln x` as the independent variable. In `s` the system is regular at
/// the horizon and the step positions keep full relative precision however
/// close the cut is to `r_+`.
fn propagate(
    bh: &BlackHole,
    l: u32,
    omega: f64,
    x_from: f64,
    x_to: f64,
    y0: State,
    ode_spec: &OdeSpec,
) -> Result<OdeOutcome> {
    let (r_plus, r_minus) = bh.horizons()?;
    let separation = r_plus - r_minus;
    let omega2 = omega * omega;
    let rhs = |s: f64, y: &State| {
        let x = s.exp();
        let r = r_plus + x;
        // x/Δ = r²/(x + r_+ − r_-)
        let x_over_delta = r * r / (x + separation);
        let w = bh.potential_over_delta_raw(l, r);
        [y[1] * x_over_delta, -(omega2 * x_over_delta - x * w) * y[0]]
    };
    integrate_system(rhs, x_from.ln(), x_to.ln(), y0, ode_spec)
}

/// Transmission and reflection probabilities from a direct solution of the
/// radial wave equation.
pub fn transmission_numeric(
    bh: &BlackHole,
    mode: Mode,
    ode_spec: &OdeSpec,
    cuts: ScatteringCuts,
) -> Result<ScatteringResult> {
    bh.ensure_resolved()?;
    let mode = Mode::new(mode.l, mode.omega)?;
    let (r_plus, _) = bh.horizons()?;
    let omega = mode.omega;
    let l = mode.l;

    if !(cuts.eps_horizon > 0.0 && cuts.eps_horizon < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "eps_horizon must lie in (0, 1), got {}",
            cuts.eps_horizon
        )));
    }
    let x0 = cuts.eps_horizon * r_plus;
    let r0 = r_plus + x0;
    let r_far = cuts.far_cut(r_plus, mode);
    if !(r_far.is_finite() && r_far > r0) {
        return Err(Error::InvalidParameter(format!(
            "far cut {r_far} must lie beyond the horizon cut {r0}"
        )));
    }

    let (h, h_r) = horizon_series(bh, l, omega, x0)?;
    let (_, r_minus) = bh.horizons()?;
    let r_star_0 = bh.tortoise_from_offset(x0, r_plus, r_minus);
    let phase = (-I * omega * r_star_0).exp();
    let psi0 = phase * h;
    let delta0 = x0 * (x0 + r_plus - r_minus) / (r0 * r0);
    let dpsi0 = phase * (-I * omega * h + delta0 * h_r);

    let outcome = propagate(bh, l, omega, x0, r_far - r_plus, [psi0, dpsi0], ode_spec)?;
    let [psi, dpsi] = outcome.y;

    let (g, g_r) = far_series(bh, l, omega, r_far)?;
    let r_star_far = bh.tortoise(r_far)?;
    let delta_far = bh.delta_raw(r_far);
    let e_out = (I * omega * r_star_far).exp();
    let out = e_out * g;
    let d_out = e_out * (I * omega * g + delta_far * g_r);
    let e_in = e_out.conj();
    let inc = e_in * g.conj();
    let d_inc = e_in * (-I * omega * g.conj() + delta_far * g_r.conj());

    let wronskian = inc * d_out - d_inc * out;
    let a_out = (inc * dpsi - d_inc * psi) / wronskian;
    let a_in = (psi * d_out - dpsi * out) / wronskian;

    ScatteringResult::from_amplitudes(a_in, a_out, (r_star_0, r_star_far), outcome.steps).checked()
}

/// Scattering off a potential given directly on a flat line, zero outside
/// `[breakpoints[0], breakpoints[last]]`. Interior breakpoints mark
/// discontinuities; each piece is integrated separately. Used to validate the
/// solver against textbook barriers.
pub fn transmission_flat<V: Fn(f64) -> f64>(
    potential: V,
    breakpoints: &[f64],
    omega: f64,
    ode_spec: &OdeSpec,
) -> Result<ScatteringResult> {
    Mode::new(0, omega)?;
    if breakpoints.len() < 2 || breakpoints.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter(
            "need at least two strictly increasing breakpoints".into(),
        ));
    }
    let omega2 = omega * omega;
    let start = breakpoints[0];
    let end = *breakpoints.last().expect("checked length");
    let mut psi = (-I * omega * start).exp();
    let mut dpsi = -I * omega * psi;
    let mut steps = 0;
    for piece in breakpoints.windows(2) {
        let (a, b) = (piece[0], piece[1]);
        // evaluate strictly inside the piece so one-sided limits are used
        let q = |x: f64| Complex64::new(omega2 - potential(x.clamp(a, b)), 0.0);
        let sol = solve_second_order(q, (a, b), psi, dpsi, ode_spec)?;
        psi = sol.psi;
        dpsi = sol.dpsi;
        steps += sol.steps;
    }
    let a_out = (-I * omega * end).exp() * (psi + dpsi / (I * omega)) / 2.0;
    let a_in = (I * omega * end).exp() * (psi - dpsi / (I * omega)) / 2.0;
    ScatteringResult::from_amplitudes(a_in, a_out, (start, end), steps).checked()
}

/// One frequency of a [`sweep`].
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub omega: f64,
    pub scattering: Result<ScatteringResult>,
    /// Bound for the hole itself (closed form).
    pub bound: Result<BoundResult>,
    /// Bound for the uncharged hole of the same mass.
    pub schwarzschild_bound: Result<BoundResult>,
}

impl SweepPoint {
    /// Converged numeric transmission, if any.
    pub fn converged_transmission(&self) -> Option<f64> {
        match &self.scattering {
            Ok(result) if result.converged => Some(result.transmission),
            _ => None,
        }
    }
}

/// Numeric transmission plus closed-form bounds over a sorted list of
/// frequencies. Points are computed in parallel; output order matches input.
pub fn sweep(
    bh: &BlackHole,
    l: u32,
    omegas: &[f64],
    ode_spec: &OdeSpec,
    cuts: ScatteringCuts,
) -> Result<Vec<SweepPoint>> {
    if omegas.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
        return Err(Error::InvalidParameter(
            "sweep frequencies must be positive".into(),
        ));
    }
    if omegas.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter("sweep frequencies must be sorted".into()));
    }
    let neutral = bh.uncharged();
    Ok(omegas
        .par_iter()
        .map(|&omega| {
            let mode = Mode::new(l, omega);
            let mode = match mode {
                Ok(mode) => mode,
                Err(err) => {
                    return SweepPoint {
                        omega,
                        scattering: Err(err.clone()),
                        bound: Err(err.clone()),
                        schwarzschild_bound: Err(err),
                    }
                }
            };
            SweepPoint {
                omega,
                scattering: transmission_numeric(bh, mode, ode_spec, cuts),
                bound: rn_bound(bh, mode),
                schwarzschild_bound: schwarzschild_bound(&neutral, mode),
            }
        })
        .collect())
}

/// Indices `i` where the converged transmission drops between points `i − 1`
/// and `i` by more than `slack`. A soft diagnostic: single-barrier
/// transmission is expected, not proven, to be monotone in `ω`.
pub fn transmission_drops(points: &[SweepPoint], slack: f64) -> Vec<usize> {
    let mut drops = Vec::new();
    let mut last: Option<f64> = None;
    for (i, point) in points.iter().enumerate() {
        if let Some(t) = point.converged_transmission() {
            if let Some(prev) = last {
                if t < prev - slack {
                    drops.push(i);
                }
            }
            last = Some(t);
        }
    }
    drops
}
