//! Symbolic and numerical verification of the Rieffel-deformed quantum
//! Lorentz group, its coaction on quantum Minkowski space, the underlying
//! bicharacter cocycle, and the unbounded-operator model of the `p, q`
//! generators.

pub mod coact;
pub mod cocycle;
pub mod dsl;
pub mod ncalg;
pub mod oplab;
pub mod scalars;

pub use scalars::{GaussianRational, Scalar};

/// Polynomials over the Laurent ring in `q`.
pub type Poly = ncalg::NcPolynomial<Scalar>;
/// Presentations over the Laurent ring in `q`.
pub type Pres = ncalg::Presentation<Scalar>;
/// Morphisms over the Laurent ring in `q`.
pub type Mor = coact::Morphism<Scalar>;
/// Shift-multiplier operators in double precision.
pub type Operator = oplab::ShiftMultiplierOperator<f64>;
/// Closed-form multipliers in double precision.
pub type Mult = oplab::Multiplier<f64>;
/// The operator model of a commuting pair in double precision.
pub type Model = oplab::PqModel<f64>;
