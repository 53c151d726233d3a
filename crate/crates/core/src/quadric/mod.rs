//! Zeros of diagonal quaternary forms in a box, smooth-weighted counts
//! `N(a;X)`, and the offset classification by the dual form.

mod count;
mod weight;
mod zeros;

pub use count::{
    cancellation_experiment, loglog_slope, theorem1_sum, weighted_count, weighted_counts, CancellationRow,
    CancellationTable, CountResult, CountTriple, WeightKind, Weights,
};
pub use weight::{w0, SmoothWeight};
pub use zeros::{box_range, enumerate_zeros, Method, Point, MEET_LIMIT, NAIVE_LIMIT};

use crate::expsums::{DiagonalForm, OffsetVector};

/// `F⁻¹(c) = Σᵢ (∏_{j≠i} Aⱼ) cᵢ²`.
pub fn dual_form(form: &DiagonalForm, c: &OffsetVector) -> i128 {
    form.dual(c)
}

/// Offsets `c′` with `0 < |c′|∞ ≤ B`, split by whether `F⁻¹(0, c′)` vanishes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OffsetClasses {
    /// `F⁻¹(0, c′) = 0`
    pub c0: Vec<[i64; 3]>,
    pub c1: Vec<[i64; 3]>,
}

pub fn classify_offsets(form: &DiagonalForm, bound: u64) -> OffsetClasses {
    let b = bound as i64;
    let mut out = OffsetClasses::default();
    for c2 in -b..=b {
        for c3 in -b..=b {
            for c4 in -b..=b {
                let c = [c2, c3, c4];
                if c == [0; 3] {
                    continue;
                }
                if form.dual(&OffsetVector::new(0, c)) == 0 {
                    out.c0.push(c);
                } else {
                    out.c1.push(c);
                }
            }
        }
    }
    out
}

/// Indefinite forms used by the enumeration tests.
pub fn indefinite_test_forms() -> Vec<DiagonalForm> {
    [[1, 1, 1, -1], [1, 2, 3, -6], [3, 1, 1, -1], [2, 1, 1, -1], [1, -1, 1, -1]]
        .into_iter()
        .map(|a| DiagonalForm::new(a).expect("nonzero"))
        .collect()
}

#[cfg(test)]
mod tests;
