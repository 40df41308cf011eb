//! Size lower bound and the per-item weight function used to bound the
//! Planned-Harmonic bin count.

use crate::rational::rat;
use crate::Rational;

/// `ceil(sum of sizes)`: no packing can beat the total volume.
pub fn size_lower_bound(sizes: &[Rational]) -> usize {
    sizes
        .iter()
        .fold(Rational::zero(), |acc, s| acc + s)
        .ceil_usize()
}

/// Piecewise weight: `1/k` on `(1/(k+1), 1/k]` for `k <= 3`, zero on
/// `(0, 1/4]` (and at the degenerate size 0).
pub fn weight(size: &Rational) -> Rational {
    debug_assert!(*size >= 0 && *size <= Rational::one());
    if *size > rat(1, 2) {
        Rational::one()
    } else if *size > rat(1, 3) {
        rat(1, 2)
    } else if *size > rat(1, 4) {
        rat(1, 3)
    } else {
        Rational::zero()
    }
}

/// `W(L)`: sum of weights over all sizes.
pub fn total_weight(sizes: &[Rational]) -> Rational {
    sizes
        .iter()
        .fold(Rational::zero(), |acc, s| acc + weight(s))
}

/// For a feasible bin (sizes summing to at most 1), the combined weight
/// never exceeds 3/2. Used as a property-test oracle over sampled bins.
pub fn max_bin_weight_check(sizes: &[Rational]) -> bool {
    debug_assert!(
        sizes.iter().fold(Rational::zero(), |acc, s| acc + s) <= Rational::one(),
        "weight check expects a feasible bin"
    );
    total_weight(sizes) <= rat(3, 2)
}
