//! Transfer-matrix bounds on transmission and reflection probabilities.
//!
//! For any positive `h(r*)` that tends to `ω` at both ends of the tortoise
//! line,
//!
//! ```text
//! T ≥ sech²(∫ϑ dr*),   R ≤ tanh²(∫ϑ dr*),
//! ϑ = sqrt((h')² + (ω² − V − h²)²) / (2h).
//! ```
//!
//! With `h = ω` and `V ≥ 0` the integral collapses to `(1/2ω)∫V dr*`, which
//! is `(2l(l+1) + 1)/(8GMω)` for Schwarzschild and
//! `(1/2ω)[l(l+1)/(GM+A) + (GM+2A)/(3(GM+A)²)]` for Reissner-Nordström.
//! Quadratures run in `r` with `dr* = dr/Δ`, which makes the `h = ω`
//! integrand regular at the horizon.

use std::cell::RefCell;
use std::fmt;

use crate::error::{Error, Result};
use crate::numerics::{integrate, QuadratureResult, QuadratureSpec, TailStrategy};
use crate::spacetime::{angular_factor, BlackHole, Mode};

/// Closest approach to the horizon for general-`h` integrands, relative to `r_+`.
pub const HORIZON_GUARD: f64 = 1e-10;

/// Relative finite-difference step for `h'` when no derivative is supplied.
pub const H_PRIME_STEP: f64 = 1e-6;

/// Allowed relative mismatch `|h/ω − 1|` at the ends of the tortoise line.
pub const H_ASYMPTOTIC_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundMethod {
    ClosedFormSchwarzschild,
    ClosedFormRN,
    QuadratureHOmega,
    QuadratureGeneralH,
}

impl fmt::Display for BoundMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundMethod::ClosedFormSchwarzschild => "closed-form-schwarzschild",
            BoundMethod::ClosedFormRN => "closed-form-reissner-nordstrom",
            BoundMethod::QuadratureHOmega => "quadrature-h-omega",
            BoundMethod::QuadratureGeneralH => "quadrature-general-h",
        })
    }
}

/// How a quadrature-based bound was obtained. Empty for closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BoundMetadata {
    pub rule: Option<&'static str>,
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub tail: Option<TailStrategy>,
    /// Error estimate on `integral_value`.
    pub error_estimate: Option<f64>,
    pub subdivisions: Option<usize>,
    /// `h'` came from a central difference rather than a supplied derivative.
    pub h_prime_finite_difference: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundResult {
    /// `∫ϑ dr*`
    pub integral_value: f64,
    /// Lower bound on the transmission probability, `sech²(integral_value)`.
    pub t_lower: f64,
    /// Upper bound on the reflection probability, `tanh²(integral_value)`.
    pub r_upper: f64,
    pub method: BoundMethod,
    pub metadata: BoundMetadata,
}

impl BoundResult {
    pub fn from_integral(integral_value: f64, method: BoundMethod, metadata: BoundMetadata) -> Self {
        let (t_lower, r_upper) = sech2_tanh2(integral_value);
        Self {
            integral_value,
            t_lower,
            r_upper,
            method,
            metadata,
        }
    }
}

/// `(sech²x, tanh²x)` written in terms of `e^{−2|x|}` so neither overflows.
///
/// In double precision `tanh²x` rounds to exactly 1 once `|x|` exceeds about
/// 18.7, and `sech²x` underflows to 0 beyond about 354.
pub fn sech2_tanh2(x: f64) -> (f64, f64) {
    let e = (-2.0 * x.abs()).exp();
    let denom = (1.0 + e) * (1.0 + e);
    (4.0 * e / denom, (1.0 - e) * (1.0 - e) / denom)
}

/// Closed-form bound for an uncharged hole.
pub fn schwarzschild_bound(bh: &BlackHole, mode: Mode) -> Result<BoundResult> {
    if bh.charge() != 0.0 {
        return Err(Error::WrongFamily { charge: bh.charge() });
    }
    let mode = Mode::new(mode.l, mode.omega)?;
    let value = (2.0 * angular_factor(mode.l) + 1.0) / (8.0 * bh.gm() * mode.omega);
    Ok(BoundResult::from_integral(
        value,
        BoundMethod::ClosedFormSchwarzschild,
        BoundMetadata::default(),
    ))
}

/// Closed-form bound for a sub-extremal Reissner-Nordström hole.
pub fn rn_bound(bh: &BlackHole, mode: Mode) -> Result<BoundResult> {
    let (r_plus, _) = bh.horizons()?;
    let mode = Mode::new(mode.l, mode.omega)?;
    let a = bh.a_param().expect("sub-extremal holes carry A");
    let gm = bh.gm();
    let bracket = angular_factor(mode.l) / r_plus + (gm + 2.0 * a) / (3.0 * r_plus * r_plus);
    Ok(BoundResult::from_integral(
        bracket / (2.0 * mode.omega),
        BoundMethod::ClosedFormRN,
        BoundMetadata::default(),
    ))
}

/// `∫_R^∞ (V/Δ) dr`, exact.
fn potential_tail(bh: &BlackHole, l: u32, cutoff: f64) -> f64 {
    let r = cutoff;
    angular_factor(l) / r + bh.gm() / (r * r) - 2.0 * bh.gq2() / (3.0 * r * r * r)
}

fn metadata_from(result: &QuadratureResult, spec: &QuadratureSpec, scale: f64) -> BoundMetadata {
    BoundMetadata {
        rule: Some(result.rule),
        rel_tol: Some(spec.rel_tol),
        abs_tol: Some(spec.abs_tol),
        tail: result.tail,
        error_estimate: Some(result.error_estimate * scale),
        subdivisions: Some(result.subdivisions),
        h_prime_finite_difference: false,
    }
}

/// Runs `integrate` over `(r_+, ∞)` honouring `spec.tail`, with
/// `exact_tail` supplying `∫_R^∞` for the analytic-tail variant.
fn integrate_exterior<F: FnMut(f64) -> f64>(
    integrand: F,
    r_plus: f64,
    spec: &QuadratureSpec,
    exact_tail: impl Fn(f64) -> f64,
) -> Result<QuadratureResult> {
    match spec.tail {
        TailStrategy::CompactifiedVariable => integrate(integrand, r_plus, f64::INFINITY, spec),
        TailStrategy::AnalyticTail { cutoff } => {
            if !(cutoff > r_plus) {
                return Err(Error::Domain(format!(
                    "analytic-tail cutoff {cutoff} must lie outside r_+ = {r_plus}"
                )));
            }
            let mut result = integrate(integrand, r_plus, cutoff, spec)?;
            result.value += exact_tail(cutoff);
            result.tail = Some(spec.tail);
            Ok(result)
        }
    }
}

/// `h = ω` bound by quadrature: `(1/2ω)∫_{r_+}^∞ (V/Δ) dr`.
pub fn bound_by_quadrature(bh: &BlackHole, mode: Mode, spec: &QuadratureSpec) -> Result<BoundResult> {
    let (r_plus, _) = bh.horizons()?;
    let mode = Mode::new(mode.l, mode.omega)?;
    let violation = RefCell::new(None);
    let integrand = |r: f64| {
        let w = bh.potential_over_delta_raw(mode.l, r);
        if w < 0.0 {
            violation.borrow_mut().get_or_insert(Error::NegativePotential {
                r,
                value: w * bh.delta_raw(r),
            });
        }
        w
    };
    let result = integrate_exterior(integrand, r_plus, spec, |cutoff| {
        potential_tail(bh, mode.l, cutoff)
    });
    if let Some(err) = violation.into_inner() {
        return Err(err);
    }
    let result = result?;
    let scale = 1.0 / (2.0 * mode.omega);
    Ok(BoundResult::from_integral(
        result.value * scale,
        BoundMethod::QuadratureHOmega,
        metadata_from(&result, spec, scale),
    ))
}

type ScalarFn<'a> = Box<dyn Fn(f64) -> f64 + Send + Sync + 'a>;

/// Positive trial function `h(r*)` for the general bound, optionally with an
/// analytic derivative `dh/dr*`.
pub struct HFunction<'a> {
    h: ScalarFn<'a>,
    h_prime: Option<ScalarFn<'a>>,
}

impl<'a> HFunction<'a> {
    /// `h` without a derivative; `h'` is taken by central differences.
    pub fn new(h: impl Fn(f64) -> f64 + Send + Sync + 'a) -> Self {
        Self {
            h: Box::new(h),
            h_prime: None,
        }
    }

    pub fn with_derivative(
        h: impl Fn(f64) -> f64 + Send + Sync + 'a,
        h_prime: impl Fn(f64) -> f64 + Send + Sync + 'a,
    ) -> Self {
        Self {
            h: Box::new(h),
            h_prime: Some(Box::new(h_prime)),
        }
    }

    /// `h ≡ value`
    pub fn constant(value: f64) -> Self {
        Self::with_derivative(move |_| value, |_| 0.0)
    }

    pub fn value(&self, r_star: f64) -> f64 {
        (self.h)(r_star)
    }

    pub fn has_derivative(&self) -> bool {
        self.h_prime.is_some()
    }

    pub fn derivative(&self, r_star: f64) -> f64 {
        match &self.h_prime {
            Some(h_prime) => h_prime(r_star),
            None => {
                let step = H_PRIME_STEP * r_star.abs().max(1.0);
                ((self.h)(r_star + step) - (self.h)(r_star - step)) / (2.0 * step)
            }
        }
    }
}

impl fmt::Debug for HFunction<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HFunction")
            .field("analytic_derivative", &self.h_prime.is_some())
            .finish()
    }
}

/// General transfer-matrix bound `∫ϑ dr*`, computed as `∫ϑ/Δ dr` over
/// `(r_+, ∞)`. Evaluations never come closer than `r_+(1 + 1e-10)`.
pub fn bound_general_h(
    bh: &BlackHole,
    mode: Mode,
    h: &HFunction<'_>,
    spec: &QuadratureSpec,
) -> Result<BoundResult> {
    bh.ensure_resolved()?;
    let mode = Mode::new(mode.l, mode.omega)?;
    let r_plus = bh.r_plus()?;
    let omega = mode.omega;
    let r_floor = r_plus * (1.0 + HORIZON_GUARD);

    for r in [r_floor, 1e6 * r_plus] {
        let r_star = bh.tortoise(r)?;
        let value = h.value(r_star);
        if !((value / omega - 1.0).abs() <= H_ASYMPTOTIC_TOLERANCE) {
            return Err(Error::InvalidH {
                r_star,
                reason: format!("h = {value} does not approach ω = {omega} at the ends of the domain"),
            });
        }
    }

    let failure = RefCell::new(None);
    let integrand = |r: f64| {
        let r = r.max(r_floor);
        let r_star = match bh.tortoise(r) {
            Ok(r_star) => r_star,
            Err(err) => {
                failure.borrow_mut().get_or_insert(err);
                return f64::NAN;
            }
        };
        let h_value = h.value(r_star);
        if !(h_value > 0.0 && h_value.is_finite()) {
            failure.borrow_mut().get_or_insert(Error::InvalidH {
                r_star,
                reason: format!("h = {h_value} is not positive"),
            });
            return f64::NAN;
        }
        let h_prime = h.derivative(r_star);
        let v = bh.potential_raw(mode.l, r);
        // (ω − h)(ω + h) is exactly zero for h ≡ ω, so no ω²-sized rounding
        // noise leaks into the far tail.
        let mismatch = (omega - h_value) * (omega + h_value) - v;
        h_prime.hypot(mismatch) / (2.0 * h_value * bh.delta_raw(r))
    };

    let result = integrate_exterior(integrand, r_plus, spec, |cutoff| {
        // beyond a large cutoff h ≈ ω and ϑ ≈ V/2ω
        potential_tail(bh, mode.l, cutoff) / (2.0 * omega)
    });
    if let Some(err) = failure.into_inner() {
        return Err(err);
    }
    let result = result?;
    let mut metadata = metadata_from(&result, spec, 1.0);
    metadata.h_prime_finite_difference = !h.has_derivative();
    Ok(BoundResult::from_integral(
        result.value,
        BoundMethod::QuadratureGeneralH,
        metadata,
    ))
}

/// `R ≤ 1 − T_lower`, the reflection bound paired with a transmission bound.
pub fn reflection_from_transmission(t_lower: f64) -> Result<f64> {
    if !(t_lower > 0.0 && t_lower <= 1.0) {
        return Err(Error::Domain(format!(
            "transmission bound must lie in (0, 1], got {t_lower}"
        )));
    }
    Ok(1.0 - t_lower)
}
