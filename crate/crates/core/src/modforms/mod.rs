//! The discriminant form of weight 12: τ(n), `λ(n) = τ(n)/n^{11/2}`, the
//! Hecke relations, and `r(n)` for sums of two squares.

mod lambda;
mod squares;
mod tau;

pub use lambda::{hecke_convolution_check, lambda, twisted_sum, NormalizedCoefficients, TwistedSum};
pub use squares::{r_two_squares, RTable};
pub use tau::{build_tau_table, TauTable, DEFAULT_TAU_LIMIT, TAU_LIMIT};
