//! Verification toolkit for nonuniformly elliptic `p`-Laplace equations
//! `div(a(x, grad u)) = 0` whose ellipticity bounds `lambda`, `mu` only lie in
//! `L^t`, `L^s`.
//!
//! The numerical core is generic over the scalar type. Exponent bookkeeping
//! ([`params`]) runs on any [`scalar::Scalar`], including exact rationals;
//! everything transcendental runs on [`scalar::Real`] (`f32`, `f64`). The
//! aliases below fix `f64` for everyday use.

pub mod campaign;
pub mod counterexample;
pub mod discrete;
pub mod error;
pub mod params;
pub mod quadrature;
pub mod scalar;

pub use error::{Error, Result};
pub use params::{classify, counterexample_params, moser_constants, theta_from_st, Exponent, RegimeTag};
pub use scalar::{Real, Scalar};

pub type Exponent64 = params::Exponent<f64>;
pub type ExponentConfig64 = params::ExponentConfig<f64>;
/// Exact exponent configuration.
pub type ExponentConfigQ = params::ExponentConfig<num_rational::BigRational>;
pub type MoserConstants64 = params::MoserConstants<f64>;
pub type CounterexampleParams64 = params::CounterexampleParams<f64>;
pub type CounterexampleSpec64 = counterexample::CounterexampleSpec<f64>;
pub type IntegralResult64 = quadrature::IntegralResult<f64>;
pub type AxisymGrid64 = discrete::AxisymGrid<f64>;
pub type GridField64 = discrete::GridField<f64>;
pub type DirichletProblem64 = discrete::DirichletProblem<f64>;
pub type SolveReport64 = discrete::SolveReport<f64>;
