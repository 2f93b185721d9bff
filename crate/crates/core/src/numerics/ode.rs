use num_complex::Complex64;

use crate::error::{Error, Result};

/// Two complex components, e.g. `(ψ, dψ/dx)`.
pub type State = [Complex64; 2];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepMode {
    /// Error-controlled step size.
    Adaptive,
    /// Fixed number of equal Dormand-Prince steps, no error control. Meant for
    /// debugging and convergence studies.
    Fixed { steps: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
    /// First trial step; chosen automatically when `None`.
    pub initial_step: Option<f64>,
    pub mode: StepMode,
}

impl Default for OdeSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_steps: 1_000_000,
            initial_step: None,
            mode: StepMode::Adaptive,
        }
    }
}

impl OdeSpec {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "ODE tolerances must be positive (rel_tol = {}, abs_tol = {})",
                self.rel_tol, self.abs_tol
            )));
        }
        if let Some(h) = self.initial_step {
            if !(h.is_finite() && h > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "initial step must be positive, got {h}"
                )));
            }
        }
        if let StepMode::Fixed { steps: 0 } = self.mode {
            return Err(Error::InvalidParameter(
                "fixed-step mode needs at least one step".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOutcome {
    pub t: f64,
    pub y: State,
    pub steps: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

// Dormand-Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn combine(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    let mut out = *y;
    for (coeff, k) in terms {
        let c = h * coeff;
        out[0] += k[0] * c;
        out[1] += k[1] * c;
    }
    out
}

/// One Dormand-Prince step. Returns the fifth-order solution, the derivative
/// at the new point (FSAL) and the embedded error vector.
fn dopri_step<F: FnMut(f64, &State) -> State>(
    rhs: &mut F,
    t: f64,
    y: &State,
    k1: &State,
    h: f64,
) -> (State, State, State) {
    let k2 = rhs(t + C2 * h, &combine(y, h, &[(A21, k1)]));
    let k3 = rhs(t + C3 * h, &combine(y, h, &[(A31, k1), (A32, &k2)]));
    let k4 = rhs(t + C4 * h, &combine(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]));
    let k5 = rhs(
        t + C5 * h,
        &combine(y, h, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
    );
    let k6 = rhs(
        t + h,
        &combine(y, h, &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
    );
    let y_new = combine(y, h, &[(A71, k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
    let k7 = rhs(t + h, &y_new);
    let zero = [Complex64::new(0.0, 0.0); 2];
    let err = combine(
        &zero,
        h,
        &[(E1, k1), (E3, &k3), (E4, &k4), (E5, &k5), (E6, &k6), (E7, &k7)],
    );
    (y_new, k7, err)
}

fn weighted_norm(v: &State, scale: impl Fn(usize) -> f64) -> f64 {
    let sum: f64 = (0..2).map(|i| (v[i].norm() / scale(i)).powi(2)).sum();
    (sum / 2.0).sqrt()
}

fn initial_step<F: FnMut(f64, &State) -> State>(
    rhs: &mut F,
    t0: f64,
    y0: &State,
    f0: &State,
    span: f64,
    spec: &OdeSpec,
) -> f64 {
    let scale = |i: usize| spec.abs_tol + spec.rel_tol * y0[i].norm();
    let d0 = weighted_norm(y0, scale);
    let d1 = weighted_norm(f0, scale);
    let mut h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    h0 = h0.min(span.abs());
    let dir = span.signum();
    let y1 = combine(y0, dir * h0, &[(1.0, f0)]);
    let f1 = rhs(t0 + dir * h0, &y1);
    let diff = [f1[0] - f0[0], f1[1] - f0[1]];
    let d2 = weighted_norm(&diff, scale) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1).min(span.abs())
}

/// Integrates `y' = rhs(t, y)` from `t0` to `t1` (either direction).
pub fn integrate_system<F: FnMut(f64, &State) -> State>(
    mut rhs: F,
    t0: f64,
    t1: f64,
    y0: State,
    spec: &OdeSpec,
) -> Result<OdeOutcome> {
    spec.validate()?;
    if !(t0.is_finite() && t1.is_finite()) {
        return Err(Error::Domain(format!(
            "integration domain must be finite, got [{t0}, {t1}]"
        )));
    }
    let span = t1 - t0;
    let mut outcome = OdeOutcome {
        t: t0,
        y: y0,
        steps: 0,
        rejected: 0,
        evaluations: 0,
    };
    if span == 0.0 {
        return Ok(outcome);
    }
    let dir = span.signum();

    let mut k1 = rhs(t0, &y0);
    outcome.evaluations += 1;

    if let StepMode::Fixed { steps } = spec.mode {
        let h = span / steps as f64;
        for i in 0..steps {
            let t = t0 + h * i as f64;
            let (y_new, k_new, _) = dopri_step(&mut rhs, t, &outcome.y, &k1, h);
            outcome.y = y_new;
            k1 = k_new;
            outcome.evaluations += 6;
        }
        outcome.t = t1;
        outcome.steps = steps;
        return check_finite(outcome);
    }

    let mut h = match spec.initial_step {
        Some(h) => h.min(span.abs()),
        None => {
            outcome.evaluations += 1;
            initial_step(&mut rhs, t0, &y0, &k1, span, spec)
        }
    };
    let mut t = t0;
    let mut y = y0;
    let mut last_rejected = false;

    loop {
        let remaining = (t1 - t) * dir;
        if remaining <= 0.0 {
            break;
        }
        if outcome.steps + outcome.rejected >= spec.max_steps {
            return Err(Error::IntegrationFailure {
                t_reached: t,
                steps: outcome.steps,
                reason: format!("max_steps = {} exhausted", spec.max_steps),
            });
        }
        let last = h >= remaining;
        let step = if last { remaining } else { h };
        if step <= 16.0 * f64::EPSILON * t.abs().max(1.0) && !last {
            return Err(Error::IntegrationFailure {
                t_reached: t,
                steps: outcome.steps,
                reason: format!("step size underflow (h = {step:e})"),
            });
        }

        let (y_new, k_new, err_vec) = dopri_step(&mut rhs, t, &y, &k1, dir * step);
        outcome.evaluations += 6;
        let scale = |i: usize| spec.abs_tol + spec.rel_tol * y[i].norm().max(y_new[i].norm());
        let err = weighted_norm(&err_vec, scale);
        if !err.is_finite() {
            return Err(Error::IntegrationFailure {
                t_reached: t,
                steps: outcome.steps,
                reason: "non-finite state".into(),
            });
        }

        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        if err <= 1.0 {
            t = if last { t1 } else { t + dir * step };
            y = y_new;
            k1 = k_new;
            outcome.steps += 1;
            h = if last_rejected {
                step * factor.min(1.0)
            } else {
                step * factor
            };
            last_rejected = false;
        } else {
            outcome.rejected += 1;
            h = step * factor.min(1.0);
            last_rejected = true;
        }
    }

    outcome.t = t;
    outcome.y = y;
    check_finite(outcome)
}

fn check_finite(outcome: OdeOutcome) -> Result<OdeOutcome> {
    if outcome.y.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
        Ok(outcome)
    } else {
        Err(Error::IntegrationFailure {
            t_reached: outcome.t,
            steps: outcome.steps,
            reason: "non-finite state".into(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondOrderSolution {
    pub psi: Complex64,
    pub dpsi: Complex64,
    pub steps: usize,
}

/// Solves `ψ'' + q(x) ψ = 0` from `domain.0` to `domain.1`.
pub fn solve_second_order<Q: Fn(f64) -> Complex64>(
    q: Q,
    domain: (f64, f64),
    initial_value: Complex64,
    initial_derivative: Complex64,
    spec: &OdeSpec,
) -> Result<SecondOrderSolution> {
    let rhs = |x: f64, y: &State| [y[1], -q(x) * y[0]];
    let outcome = integrate_system(rhs, domain.0, domain.1, [initial_value, initial_derivative], spec)?;
    Ok(SecondOrderSolution {
        psi: outcome.y[0],
        dpsi: outcome.y[1],
        steps: outcome.steps,
    })
}
