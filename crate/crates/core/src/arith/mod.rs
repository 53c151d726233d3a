//! Exact integer arithmetic: factorization, residues, Jacobi symbols and
//! the small multiplicative functions used by the exponential-sum formulas.

mod factor;
mod modular;

pub use factor::{factorize, is_prime, sieve, Factorization, SpfTable};
pub use modular::{
    crt_combine, delta, epsilon, euler_phi, gcd, jacobi, mobius, mod_inverse, multiplicative_basics, strip,
    unit_markers, valuation, FourthRoot, MultiplicativeBasics, UnitMarker,
};
