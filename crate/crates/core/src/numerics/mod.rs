//! Numerical kernels with explicit tolerance contracts.
//!
//! [`integrate`] is a globally adaptive 7/15-point Gauss-Kronrod scheme with
//! a compactifying change of variable for semi-infinite ranges.
//! [`solve_second_order`] and [`integrate_system`] run an embedded
//! Dormand-Prince 5(4) pair on complex two-component systems.

mod ode;
mod quadrature;

pub use ode::{
    integrate_system, solve_second_order, OdeOutcome, OdeSpec, SecondOrderSolution, State, StepMode,
};
pub use quadrature::{integrate, QuadratureResult, QuadratureSpec, TailStrategy, GK15_RULE};
