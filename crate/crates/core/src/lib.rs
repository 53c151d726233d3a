//! Exponential sums over diagonal quaternary quadrics, Ramanujan τ and its
//! normalized Hecke eigenvalues, weighted zero counts, and numerical checks
//! of the summation formulas and oscillatory integrals that go with them.
//!
//! Floating-point code is generic over [`Real`] (`f32` or `f64`). The aliases
//! below fix `f64`, which is what the verification suites use.

pub mod arith;
pub mod error;
pub mod expsums;
pub mod modforms;
pub mod oscint;
pub mod quadric;
pub mod report;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Complex64 = num_complex::Complex<f64>;
pub type Complex32 = num_complex::Complex<f32>;

pub type Bump64 = oscint::Bump<f64>;
pub type SmoothWeight64 = quadric::SmoothWeight<f64>;
pub type Lambda64 = modforms::NormalizedCoefficients<f64>;
pub type QuadratureConfig64 = oscint::QuadratureConfig<f64>;
pub type VoronoiConfig64 = oscint::VoronoiConfig<f64>;
pub type PhaseConfig64 = oscint::PhaseConfig<f64>;
