use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

pub const GK15_RULE: &str = "gauss-kronrod 7/15 (globally adaptive)";

/// How an infinite upper limit is handled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailStrategy {
    /// Map `x = a + t/(1 − t)` with `t ∈ [0, 1)` and integrate over `t`.
    CompactifiedVariable,
    /// Integrate up to `cutoff` and add an analytic tail. The generic
    /// [`integrate`] assumes the integrand behaves as `c/x²` beyond the cutoff
    /// and adds `cutoff · f(cutoff)`; callers that know the exact tail add it
    /// themselves.
    AnalyticTail { cutoff: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub tail: TailStrategy,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_subdivisions: 10_000,
            tail: TailStrategy::CompactifiedVariable,
        }
    }
}

impl QuadratureSpec {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_tail(mut self, tail: TailStrategy) -> Self {
        self.tail = tail;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "quadrature tolerances must be positive (rel_tol = {}, abs_tol = {})",
                self.rel_tol, self.abs_tol
            )));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidParameter(
                "max_subdivisions must be at least 1".into(),
            ));
        }
        if let TailStrategy::AnalyticTail { cutoff } = self.tail {
            if !(cutoff.is_finite() && cutoff > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "analytic-tail cutoff must be positive and finite, got {cutoff}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub subdivisions: usize,
    pub evaluations: usize,
    pub rule: &'static str,
    /// Set when the upper limit was infinite.
    pub tail: Option<TailStrategy>,
}

// Kronrod abscissae (descending, last is the centre) and weights; the Gauss
// nodes are the odd-indexed Kronrod nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One 15-point Kronrod panel with the QUADPACK error heuristic.
fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Result<Segment> {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let abs_half = half.abs();

    let mut eval = |x: f64| -> Result<f64> {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::IntegrandError { x })
        }
    };

    let f_centre = eval(centre)?;
    let mut res_gauss = f_centre * WG[3];
    let mut res_kronrod = f_centre * WGK[7];
    let mut res_abs = res_kronrod.abs();
    let mut f_minus = [0.0; 7];
    let mut f_plus = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let lo = eval(centre - dx)?;
        let hi = eval(centre + dx)?;
        f_minus[j] = lo;
        f_plus[j] = hi;
        res_kronrod += WGK[j] * (lo + hi);
        res_abs += WGK[j] * (lo.abs() + hi.abs());
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * (lo + hi);
        }
    }

    let mean = 0.5 * res_kronrod;
    let mut res_asc = WGK[7] * (f_centre - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((f_minus[j] - mean).abs() + (f_plus[j] - mean).abs());
    }

    let value = res_kronrod * half;
    res_abs *= abs_half;
    res_asc *= abs_half;
    let mut error = ((res_kronrod - res_gauss) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    let round_off = 50.0 * f64::EPSILON * res_abs;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(round_off);
    }
    Ok(Segment { a, b, value, error })
}

fn adaptive<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult> {
    let first = gk15(&mut f, a, b)?;
    let mut evaluations = 15;
    let mut total = first.value;
    let mut total_error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut subdivisions = 0;

    let target = |value: f64| spec.abs_tol.max(spec.rel_tol * value.abs());
    while total_error > target(total) {
        if subdivisions >= spec.max_subdivisions {
            return Err(Error::ToleranceNotMet {
                estimate: total,
                error_estimate: total_error,
                subdivisions,
            });
        }
        let worst = heap.pop().expect("heap never empties");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            // the segment cannot be split further in double precision
            return Err(Error::ToleranceNotMet {
                estimate: total,
                error_estimate: total_error,
                subdivisions,
            });
        }
        let left = gk15(&mut f, worst.a, mid)?;
        let right = gk15(&mut f, mid, worst.b)?;
        evaluations += 30;
        subdivisions += 1;
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);

        // periodic resummation keeps the running totals free of drift
        if subdivisions % 64 == 0 {
            total = heap.iter().map(|s| s.value).sum();
            total_error = heap.iter().map(|s| s.error).sum();
        }
    }
    total = heap.iter().map(|s| s.value).sum();
    total_error = heap.iter().map(|s| s.error).sum();

    Ok(QuadratureResult {
        value: total,
        error_estimate: total_error,
        subdivisions,
        evaluations,
        rule: GK15_RULE,
        tail: None,
    })
}

/// Integrates `f` over `[a, b]`; `b` may be `f64::INFINITY`.
///
/// Succeeds when the summed error estimate falls below
/// `max(abs_tol, rel_tol·|value|)`. For infinite `b` the integrand must decay
/// at least as fast as `x⁻²`.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult> {
    spec.validate()?;
    if !a.is_finite() {
        return Err(Error::Domain(format!("lower limit must be finite, got {a}")));
    }
    if b.is_nan() || b == f64::NEG_INFINITY {
        return Err(Error::Domain(format!("invalid upper limit {b}")));
    }
    if b.is_finite() {
        return adaptive(f, a, b, spec);
    }

    match spec.tail {
        TailStrategy::CompactifiedVariable => {
            let mapped = |t: f64| {
                let s = 1.0 - t;
                f(a + t / s) / (s * s)
            };
            let mut result = adaptive(mapped, 0.0, 1.0, spec)?;
            result.tail = Some(spec.tail);
            Ok(result)
        }
        TailStrategy::AnalyticTail { cutoff } => {
            if !(cutoff > a) {
                return Err(Error::Domain(format!(
                    "analytic-tail cutoff {cutoff} must exceed the lower limit {a}"
                )));
            }
            let tail = cutoff * f(cutoff);
            if !tail.is_finite() {
                return Err(Error::IntegrandError { x: cutoff });
            }
            let mut result = adaptive(&mut f, a, cutoff, spec)?;
            result.value += tail;
            result.tail = Some(spec.tail);
            Ok(result)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn textbook_semi_infinite() {
        let r = integrate(
            |x| 1.0 / ((1.0 + x) * (1.0 + x)),
            0.0,
            f64::INFINITY,
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert_relative_eq!(r.value, 1.0, max_relative = 1e-13);
        assert_eq!(r.rule, GK15_RULE);
        assert_eq!(r.tail, Some(TailStrategy::CompactifiedVariable));
    }

    #[test]
    fn analytic_tail_exact_for_inverse_square() {
        let spec = QuadratureSpec::default().with_tail(TailStrategy::AnalyticTail { cutoff: 50.0 });
        let r = integrate(|x| 3.0 / (x * x), 1.0, f64::INFINITY, &spec).unwrap();
        assert_relative_eq!(r.value, 3.0, max_relative = 1e-12);
    }

    #[test]
    fn finite_interval_polynomials_and_rationals() {
        let spec = QuadratureSpec::default();
        // exact for degree ≤ 22 on a single panel
        let r = integrate(|x| x.powi(7) - 2.0 * x * x, -1.0, 2.0, &spec).unwrap();
        assert_relative_eq!(r.value, 255.0 / 8.0 - 6.0, max_relative = 1e-14);
        let r = integrate(|x| 1.0 / (1.0 + x * x), 0.0, f64::INFINITY, &spec).unwrap();
        assert_relative_eq!(r.value, std::f64::consts::FRAC_PI_2, max_relative = 1e-12);
        let r = integrate(|x| x * x / (1.0 + x).powi(5), 0.0, f64::INFINITY, &spec).unwrap();
        assert_relative_eq!(r.value, 1.0 / 12.0, max_relative = 1e-12);
        // reversed limits flip the sign
        let r = integrate(|x| x.sin(), std::f64::consts::PI, 0.0, &spec).unwrap();
        assert_relative_eq!(r.value, -2.0, max_relative = 1e-13);
    }

    #[test]
    fn nan_integrand_reported() {
        let err = integrate(
            |x| if x > 0.5 { f64::NAN } else { x },
            0.0,
            1.0,
            &QuadratureSpec::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::IntegrandError { .. }));
    }

    #[test]
    fn subdivision_budget_exhausted() {
        let spec = QuadratureSpec {
            max_subdivisions: 3,
            rel_tol: 1e-14,
            ..QuadratureSpec::default()
        };
        // integrable singularity needs many bisections
        let err = integrate(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, &spec).unwrap_err();
        match err {
            Error::ToleranceNotMet {
                estimate,
                subdivisions,
                ..
            } => {
                assert_eq!(subdivisions, 3);
                assert!((estimate - 2.0).abs() < 0.1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn invalid_specs() {
        let bad = QuadratureSpec {
            rel_tol: 0.0,
            ..QuadratureSpec::default()
        };
        assert!(integrate(|x| x, 0.0, 1.0, &bad).is_err());
        let bad = QuadratureSpec {
            max_subdivisions: 0,
            ..QuadratureSpec::default()
        };
        assert!(integrate(|x| x, 0.0, 1.0, &bad).is_err());
        assert!(integrate(|x| x, f64::NEG_INFINITY, 1.0, &QuadratureSpec::default()).is_err());
    }

    #[test]
    fn error_contract_holds_and_tightening_never_hurts() {
        type Case = (fn(f64) -> f64, f64, f64, f64);
        let suite: [Case; 6] = [
            (|x| 1.0 / ((1.0 + x) * (1.0 + x)), 0.0, f64::INFINITY, 1.0),
            (|x| (-x).exp() * x.powi(3), 0.0, f64::INFINITY, 6.0),
            (
                |x| 1.0 / (1.0 + x * x),
                0.0,
                f64::INFINITY,
                std::f64::consts::FRAC_PI_2,
            ),
            (|x| x.ln(), 1e-300, 1.0, -1.0),
            (|x| (10.0 * x).cos(), 0.0, 3.0, (30f64).sin() / 10.0),
            (
                |x| 2.0 / (x * x) + 4.0 / (x * x * x),
                4.0,
                f64::INFINITY,
                0.5 + 0.125,
            ),
        ];
        let mut previous_total = f64::INFINITY;
        for rel_tol in [1e-6, 5e-7, 2.5e-7, 1e-8, 5e-9, 1e-10, 5e-11] {
            let spec = QuadratureSpec::default().with_rel_tol(rel_tol);
            let mut total = 0.0;
            for (f, a, b, exact) in suite {
                let r = integrate(f, a, b, &spec).unwrap();
                let err = (r.value - exact).abs();
                assert!(
                    err <= spec.abs_tol.max(rel_tol * exact.abs()),
                    "rel_tol={rel_tol} exact={exact} err={err}"
                );
                total += err;
            }
            assert!(
                total <= previous_total + 1e-15,
                "rel_tol={rel_tol}: {total} > {previous_total}"
            );
            previous_total = total;
        }
    }
}
