//! Static spherically symmetric black holes: metric function, horizons,
//! effective potentials and the tortoise coordinate.
//!
//! Everything is expressed in geometric units with an explicit Newton
//! constant `G` (default 1). The Schwarzschild hole is the `Q = 0` member of
//! the Reissner-Nordström family; there is no separate code path for it.
//!
//! The tortoise coordinate is the closed form with no added integration
//! constant. Bounds and transmission probabilities are invariant under a
//! constant shift of `r*`, so the choice of origin never leaks into results.

use std::fmt;

use crate::error::{Error, Result};

/// Smallest supported `A / GM` for sub-extremal holes. Below this the
/// `(G²M² + A²)/(2A)` coefficient of the tortoise coordinate loses precision.
pub const MIN_RELATIVE_A: f64 = 1e-6;

/// Smallest supported angular frequency.
pub const MIN_OMEGA: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Extremality {
    /// `G·M² > Q²`: two horizons.
    SubExtremal,
    /// `G·M² = Q²`: degenerate horizon at `r = GM`.
    Extremal,
    /// `G·M² < Q²`: naked singularity.
    SuperExtremal,
}

impl Extremality {
    pub fn label(self) -> &'static str {
        match self {
            Extremality::SubExtremal => "sub-extremal",
            Extremality::Extremal => "extremal",
            Extremality::SuperExtremal => "super-extremal",
        }
    }
}

impl fmt::Display for Extremality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Mass and charge of a Reissner-Nordström black hole together with the
/// derived horizon data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlackHole {
    newton_g: f64,
    mass: f64,
    charge: f64,
    class: Extremality,
    a_param: Option<f64>,
    b_param: Option<f64>,
}

impl BlackHole {
    pub fn new(newton_g: f64, mass: f64, charge: f64) -> Result<Self> {
        if !(newton_g.is_finite() && newton_g > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "G must be positive and finite, got {newton_g}"
            )));
        }
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "mass must be positive and finite, got {mass}"
            )));
        }
        if !(charge.is_finite() && charge >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "charge must be non-negative and finite, got {charge}"
            )));
        }

        let gm2 = newton_g * mass * mass;
        let q2 = charge * charge;
        let class = if gm2 > q2 {
            Extremality::SubExtremal
        } else if gm2 == q2 {
            Extremality::Extremal
        } else {
            Extremality::SuperExtremal
        };

        // A² = G²M² − GQ² = G(GM² − Q²), so its sign always agrees with the class.
        let a_squared = newton_g * (gm2 - q2);
        let a_param = (a_squared >= 0.0).then(|| a_squared.sqrt());
        let b_param = (a_squared <= 0.0).then(|| (-a_squared).sqrt());

        Ok(Self {
            newton_g,
            mass,
            charge,
            class,
            a_param,
            b_param,
        })
    }

    /// Schwarzschild hole with `G = 1`.
    pub fn schwarzschild(mass: f64) -> Result<Self> {
        Self::new(1.0, mass, 0.0)
    }

    /// Reissner-Nordström hole with `G = 1`.
    pub fn reissner_nordstrom(mass: f64, charge: f64) -> Result<Self> {
        Self::new(1.0, mass, charge)
    }

    pub fn newton_g(&self) -> f64 {
        self.newton_g
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn charge(&self) -> f64 {
        self.charge
    }

    pub fn class(&self) -> Extremality {
        self.class
    }

    /// `A = sqrt(G²M² − GQ²)` when real.
    pub fn a_param(&self) -> Option<f64> {
        self.a_param
    }

    /// `B = sqrt(GQ² − G²M²)` when real.
    pub fn b_param(&self) -> Option<f64> {
        self.b_param
    }

    pub fn gm(&self) -> f64 {
        self.newton_g * self.mass
    }

    /// `G·Q²`
    pub fn gq2(&self) -> f64 {
        self.newton_g * self.charge * self.charge
    }

    /// Largest charge that keeps this mass sub-extremal: `Q_max = M·sqrt(G)`.
    pub fn max_charge(&self) -> f64 {
        self.mass * self.newton_g.sqrt()
    }

    /// Same mass and `G`, no charge.
    pub fn uncharged(&self) -> Self {
        Self::new(self.newton_g, self.mass, 0.0).expect("mass and G already validated")
    }

    /// Outer and inner horizon radii `(r_+, r_-)`.
    pub fn horizons(&self) -> Result<(f64, f64)> {
        match (self.class, self.a_param) {
            (Extremality::SubExtremal, Some(a)) => {
                let r_plus = self.gm() + a;
                // Vieta: r_+ · r_- = GQ². Avoids cancellation in GM − A.
                let r_minus = self.gq2() / r_plus;
                Ok((r_plus, r_minus))
            }
            (class, _) => Err(Error::NotSubExtremal(class)),
        }
    }

    pub fn r_plus(&self) -> Result<f64> {
        self.horizons().map(|(r_plus, _)| r_plus)
    }

    /// Sub-extremal and far enough from extremality for the tortoise-based
    /// machinery (bounds by quadrature, scattering) to be well conditioned.
    pub fn ensure_resolved(&self) -> Result<()> {
        let a = match (self.class, self.a_param) {
            (Extremality::SubExtremal, Some(a)) => a,
            (class, _) => return Err(Error::NotSubExtremal(class)),
        };
        let ratio = a / self.gm();
        if ratio < MIN_RELATIVE_A {
            return Err(Error::NearExtremal { ratio });
        }
        Ok(())
    }

    /// Metric function `Δ(r) = 1 − 2GM/r + GQ²/r²`.
    pub fn delta(&self, r: f64) -> Result<f64> {
        check_radius(r)?;
        Ok(self.delta_raw(r))
    }

    /// `Δ` without argument checks. Sub-extremal holes use the factored form
    /// `(r − r_+)(r − r_-)/r²`, which keeps full relative precision near the
    /// outer horizon.
    pub(crate) fn delta_raw(&self, r: f64) -> f64 {
        match self.horizons() {
            Ok((r_plus, r_minus)) => (r - r_plus) * (r - r_minus) / (r * r),
            Err(_) => 1.0 - 2.0 * self.gm() / r + self.gq2() / (r * r),
        }
    }

    /// `∂ᵣΔ = 2GM/r² − 2GQ²/r³`
    pub(crate) fn delta_prime_raw(&self, r: f64) -> f64 {
        let r2 = r * r;
        2.0 * self.gm() / r2 - 2.0 * self.gq2() / (r2 * r)
    }

    /// Effective potential `V = l(l+1)Δ/r² + Δ·∂ᵣΔ/r`.
    ///
    /// For `Q = 0` this is the Regge-Wheeler form `f(r)[l(l+1)/r² + 2GM/r³]`.
    pub fn potential(&self, l: u32, r: f64) -> Result<f64> {
        let r_plus = self.r_plus()?;
        if !(r >= r_plus) || !r.is_finite() {
            return Err(Error::Domain(format!(
                "potential requires r ≥ r_+ = {r_plus}, got r = {r}"
            )));
        }
        Ok(self.potential_raw(l, r))
    }

    pub(crate) fn potential_raw(&self, l: u32, r: f64) -> f64 {
        self.delta_raw(r) * self.potential_over_delta_raw(l, r)
    }

    /// `V/Δ = l(l+1)/r² + ∂ᵣΔ/r`, the integrand of `∫V dr*` written in `r`.
    /// Regular at the outer horizon.
    pub fn potential_over_delta(&self, l: u32, r: f64) -> Result<f64> {
        check_radius(r)?;
        Ok(self.potential_over_delta_raw(l, r))
    }

    pub(crate) fn potential_over_delta_raw(&self, l: u32, r: f64) -> f64 {
        let ll = angular_factor(l);
        ll / (r * r) + self.delta_prime_raw(r) / r
    }

    /// Tortoise coordinate `r*(r)`, the closed form matching the hole's class.
    ///
    /// - sub-extremal (`r > r_+`):
    ///   `r + GM ln|u² − A²| + (G²M² + A²)/(2A) ln|(u − A)/(u + A)|`
    /// - super-extremal (`r > 0`):
    ///   `r + GM ln(u² + B²) + (G²M² − B²)/B · atan(u/B)`
    /// - extremal (`r > GM`): `r + GM ln(u²) − G²M²/u`
    ///
    /// with `u = r − GM`. Diverges to `−∞` at the outer horizon.
    pub fn tortoise(&self, r: f64) -> Result<f64> {
        check_radius(r)?;
        let gm = self.gm();
        match self.class {
            Extremality::SubExtremal => {
                self.ensure_resolved()?;
                let (r_plus, r_minus) = self.horizons()?;
                if !(r > r_plus) {
                    return Err(Error::Domain(format!(
                        "tortoise coordinate requires r > r_+ = {r_plus}, got r = {r}"
                    )));
                }
                Ok(self.tortoise_from_offset(r - r_plus, r_plus, r_minus))
            }
            Extremality::Extremal => {
                let u = r - gm;
                if !(u > 0.0) {
                    return Err(Error::Domain(format!(
                        "extremal tortoise coordinate requires r > GM = {gm}, got r = {r}"
                    )));
                }
                Ok(r + gm * (u * u).ln() - gm * gm / u)
            }
            Extremality::SuperExtremal => {
                let b = self.b_param.expect("super-extremal holes carry B");
                let u = r - gm;
                Ok(r + gm * (u * u + b * b).ln() + (gm * gm - b * b) / b * (u / b).atan())
            }
        }
    }

    /// Sub-extremal tortoise coordinate as a function of `x = r − r_+`, using
    /// `u − A = r − r_+` and `u + A = r − r_-`. Exact for arbitrarily small `x`.
    pub(crate) fn tortoise_from_offset(&self, x: f64, r_plus: f64, r_minus: f64) -> f64 {
        let gm = self.gm();
        let a = self.a_param.expect("sub-extremal holes carry A");
        let coeff = (gm * gm + a * a) / (2.0 * a);
        let ln_inner = (x + (r_plus - r_minus)).ln();
        let ln_outer = x.ln();
        (r_plus + x) + gm * (ln_outer + ln_inner) + coeff * (ln_outer - ln_inner)
    }

    /// Inverse of [`BlackHole::tortoise`] on the sub-extremal exterior,
    /// returning the offset `r − r_+`.
    pub fn inverse_tortoise_offset(&self, r_star: f64) -> Result<f64> {
        self.ensure_resolved()?;
        if !r_star.is_finite() {
            return Err(Error::Domain(format!("r* must be finite, got {r_star}")));
        }
        let (r_plus, r_minus) = self.horizons()?;
        // Solve in s = ln(r − r_+): r*(s) is smooth, increasing, and close to
        // linear as s → −∞.
        let residual = |s: f64| self.tortoise_from_offset(s.exp(), r_plus, r_minus) - r_star;
        let slope = |s: f64| {
            // dr*/ds = x/Δ = r²/(x + r_+ − r_-)
            let x = s.exp();
            let r = r_plus + x;
            r * r / (x + (r_plus - r_minus))
        };

        const S_MIN: f64 = -700.0;
        let centre = r_plus.ln();
        let mut lo = centre - 1.0;
        let mut hi = centre + 1.0;
        let mut width = 1.0;
        while residual(lo) > 0.0 {
            width *= 2.0;
            lo = (centre - width).max(S_MIN);
            if lo == S_MIN && residual(lo) > 0.0 {
                return Err(Error::Domain(format!(
                    "r* = {r_star} lies too close to the horizon to invert in double precision"
                )));
            }
        }
        width = 1.0;
        while residual(hi) < 0.0 {
            width *= 2.0;
            hi = centre + width;
            if hi > 710.0 {
                return Err(Error::Domain(format!("r* = {r_star} too large to invert")));
            }
        }

        // Newton with bisection fallback.
        let mut s = 0.5 * (lo + hi);
        for _ in 0..200 {
            let f = residual(s);
            if f == 0.0 {
                break;
            }
            if f < 0.0 {
                lo = s;
            } else {
                hi = s;
            }
            let mut next = s - f / slope(s);
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - s).abs() <= 4.0 * f64::EPSILON * s.abs().max(1.0) {
                s = next;
                break;
            }
            s = next;
        }
        Ok(s.exp())
    }

    /// Inverse of [`BlackHole::tortoise`] on the sub-extremal exterior.
    pub fn inverse_tortoise(&self, r_star: f64) -> Result<f64> {
        let x = self.inverse_tortoise_offset(r_star)?;
        Ok(self.r_plus()? + x)
    }

    /// Location and height `(r_peak, V_max)` of the potential barrier.
    pub fn potential_peak(&self, l: u32) -> Result<(f64, f64)> {
        let r_plus = self.r_plus()?;
        // V is unimodal on the exterior; the peak sits well inside (r_+, 4 r_+).
        let v = |r: f64| self.potential_raw(l, r);
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        let (mut a, mut b) = (r_plus, 4.0 * r_plus);
        let mut c = b - inv_phi * (b - a);
        let mut d = a + inv_phi * (b - a);
        let (mut vc, mut vd) = (v(c), v(d));
        while (b - a) > 1e-12 * r_plus {
            if vc > vd {
                b = d;
                d = c;
                vd = vc;
                c = b - inv_phi * (b - a);
                vc = v(c);
            } else {
                a = c;
                c = d;
                vc = vd;
                d = a + inv_phi * (b - a);
                vd = v(d);
            }
        }
        let r_peak = 0.5 * (a + b);
        Ok((r_peak, v(r_peak)))
    }

    /// Samples `(r, r*, V)` on `n` points spaced uniformly in `r*` between
    /// `r_min` and `r_max`.
    pub fn sample_profile(&self, l: u32, r_min: f64, r_max: f64, n: usize) -> Result<PotentialProfile> {
        let r_plus = self.r_plus()?;
        if !(r_min > r_plus && r_max > r_min && r_max.is_finite()) {
            return Err(Error::Domain(format!(
                "profile needs r_+ < r_min < r_max, got r_+ = {r_plus}, r_min = {r_min}, r_max = {r_max}"
            )));
        }
        if n < 2 {
            return Err(Error::Domain(format!(
                "profile needs at least 2 samples, got {n}"
            )));
        }

        let star_min = self.tortoise(r_min)?;
        let star_max = self.tortoise(r_max)?;
        let last = n - 1;
        let mut samples = Vec::with_capacity(n);
        for i in 0..n {
            let (r, r_star) = if i == 0 {
                (r_min, star_min)
            } else if i == last {
                (r_max, star_max)
            } else {
                let r_star = star_min + (star_max - star_min) * (i as f64 / last as f64);
                (self.inverse_tortoise(r_star)?, r_star)
            };
            samples.push(ProfileSample {
                r,
                r_star,
                potential: self.potential_raw(l, r),
            });
        }
        Ok(PotentialProfile {
            samples,
            black_hole: *self,
            l,
        })
    }
}

/// Angular momentum number and frequency of a scattered wave.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub l: u32,
    pub omega: f64,
}

impl Mode {
    pub fn new(l: u32, omega: f64) -> Result<Self> {
        if !(omega.is_finite() && omega >= MIN_OMEGA) {
            return Err(Error::InvalidParameter(format!(
                "ω must be finite and at least {MIN_OMEGA}, got {omega}"
            )));
        }
        Ok(Self { l, omega })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileSample {
    pub r: f64,
    pub r_star: f64,
    pub potential: f64,
}

/// Sampled potential barrier, ordered by increasing `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialProfile {
    pub samples: Vec<ProfileSample>,
    pub black_hole: BlackHole,
    pub l: u32,
}

impl PotentialProfile {
    /// Sample with the largest potential.
    pub fn peak(&self) -> Option<&ProfileSample> {
        self.samples
            .iter()
            .max_by(|a, b| a.potential.total_cmp(&b.potential))
    }
}

pub(crate) fn angular_factor(l: u32) -> f64 {
    let l = f64::from(l);
    l * (l + 1.0)
}

fn check_radius(r: f64) -> Result<()> {
    if r.is_finite() && r > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "radius must be positive and finite, got {r}"
        )))
    }
}
