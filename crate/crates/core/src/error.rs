use thiserror::Error;

use crate::scattering::ScatteringResult;
use crate::spacetime::Extremality;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("black hole is {0}, a sub-extremal hole (G·M² > Q²) is required")]
    NotSubExtremal(Extremality),

    #[error("black hole is too close to extremality (A/GM = {ratio:e} < 1e-6)")]
    NearExtremal { ratio: f64 },

    #[error("closed-form Schwarzschild bound requested for a charged hole (Q = {charge})")]
    WrongFamily { charge: f64 },

    #[error("potential is negative (V = {value:e}) at r = {r}; the h = ω bound requires V ≥ 0")]
    NegativePotential { r: f64, value: f64 },

    #[error("h function invalid at r* = {r_star}: {reason}")]
    InvalidH { r_star: f64, reason: String },

    #[error("integrand returned a non-finite value at x = {x}")]
    IntegrandError { x: f64 },

    #[error(
        "quadrature tolerance not met after {subdivisions} subdivisions \
         (best estimate {estimate}, error estimate {error_estimate:e})"
    )]
    ToleranceNotMet {
        estimate: f64,
        error_estimate: f64,
        subdivisions: usize,
    },

    #[error("ODE integration failed at t = {t_reached} after {steps} steps: {reason}")]
    IntegrationFailure {
        t_reached: f64,
        steps: usize,
        reason: String,
    },

    #[error("scattering solution did not converge (unitarity defect {:e})", .0.unitarity_defect)]
    NotConverged(Box<ScatteringResult>),
}
