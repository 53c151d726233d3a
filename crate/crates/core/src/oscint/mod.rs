//! Quadrature-based checks: Bessel functions, the Hankel transform and its
//! decay, the Voronoi and Poisson summation identities, the dissection
//! identity, and the phase integral `∫ w(x) e(Ax² + B log x) dx`.

mod bessel;
mod dissection;
mod hankel;
mod phase;
mod poisson;
mod quad;
mod smooth;

pub use bessel::{bessel_derivative_identity, bessel_j, BESSEL_MAX_ARG, BESSEL_MAX_ORDER};
pub use dissection::{bump_mass, dissection_check, DissectionRecord};
pub use hankel::{
    hankel_decay, hankel_integral, hankel_transform, voronoi_check, HankelDecay, VoronoiConfig, VoronoiRecord, VoronoiSetup,
    HANKEL_MAX_SCALE, WEIGHT,
};
pub use phase::{phase_integral, PhaseConfig, PhaseIntegral, PhaseRegime, PHASE_MAX_A};
pub use poisson::{fourier_transform, poisson_check, PoissonRecord, POISSON_MAX_Q};
pub use quad::{integrate, integrate_real, QuadResult, QuadratureConfig};
pub use smooth::{sobolev_norm, Bump, Jet, SmoothFunction1D};

#[cfg(test)]
mod tests;
