use crate::error::{Error, Result};
use crate::scalar::Real;

/// `w₀(t) = exp(−1/(1 − t²))` on `|t| < 1`, zero outside.
pub fn w0<T: Real>(t: T) -> T {
    let s = T::one() - t * t;
    if s <= T::zero() {
        T::zero()
    } else {
        (-s.recip()).exp()
    }
}

/// Product bump `w(x) = ∏ w₀((xᵢ − center)/half_width)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SmoothWeight<T> {
    center: T,
    half_width: T,
}

impl<T: Real> Default for SmoothWeight<T> {
    /// Supported on exactly `(1/2, 2)⁴`.
    fn default() -> Self {
        Self { center: T::c(1.25), half_width: T::c(0.75) }
    }
}

impl<T: Real> SmoothWeight<T> {
    /// The support `(center ± half_width)` must sit inside `[1/2, 2]`.
    pub fn new(center: T, half_width: T) -> Result<Self> {
        let lo = center - half_width;
        let hi = center + half_width;
        if !(half_width > T::zero()) || lo < T::c(0.5) || hi > T::c(2.0) {
            return Err(Error::Domain(format!("bump ({lo}, {hi}) not inside [1/2, 2]")));
        }
        Ok(Self { center, half_width })
    }

    pub fn center(&self) -> T {
        self.center
    }

    pub fn half_width(&self) -> T {
        self.half_width
    }

    /// One coordinate factor.
    pub fn profile(&self, x: T) -> T {
        w0((x - self.center) / self.half_width)
    }

    pub fn eval(&self, x: [T; 4]) -> T {
        x.iter().fold(T::one(), |acc, &xi| acc * self.profile(xi))
    }
}
