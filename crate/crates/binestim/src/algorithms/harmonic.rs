//! The Harmonic₄ strategy: items are classified by size and each class is
//! packed greedily into its own bins, never mixing classes.

use crate::core::{Announcement, Item, OnlineAlgorithm, PackingState};
use crate::rational::rat;
use crate::{Rational, Result};

/// Size class of an item: class `k <= 3` covers `(1/(k+1), 1/k]`, class 4
/// everything of size at most `1/4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HarmonicClass(u8);

impl HarmonicClass {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Classifies a size in `(0,1]`. Boundaries belong to the smaller-k class:
/// exactly `1/2` is class 2. Size zero (reachable at deviation 1, where the
/// band floor is 0) counts as class 4.
pub fn classify_harmonic(size: &Rational) -> HarmonicClass {
    debug_assert!(*size >= 0 && *size <= Rational::one());
    if *size > rat(1, 2) {
        HarmonicClass(1)
    } else if *size > rat(1, 3) {
        HarmonicClass(2)
    } else if *size > rat(1, 4) {
        HarmonicClass(3)
    } else {
        HarmonicClass(4)
    }
}

/// Greedy per-class packing state, reusable as a fallback by other
/// strategies. Keeps one open bin per class; class-1 items always open a new
/// bin.
#[derive(Debug, Default)]
pub struct Harmonic4State {
    open: [Option<usize>; 4],
}

impl Harmonic4State {
    pub fn new() -> Self {
        Harmonic4State::default()
    }

    /// Chooses the bin for `item` and updates the per-class open bin.
    pub fn choose(&mut self, state: &PackingState, item: &Item) -> usize {
        let class = classify_harmonic(&item.actual).index();
        if class == 1 {
            return state.fresh_index();
        }
        if let Some(bin) = self.open[class - 1] {
            if state.bins()[bin].fits(&item.actual) {
                return bin;
            }
        }
        let fresh = state.fresh_index();
        self.open[class - 1] = Some(fresh);
        fresh
    }
}

/// Standalone Harmonic₄ algorithm.
#[derive(Debug, Default)]
pub struct Harmonic4 {
    state: Harmonic4State,
}

impl Harmonic4 {
    pub fn new() -> Self {
        Harmonic4::default()
    }
}

impl OnlineAlgorithm for Harmonic4 {
    fn name(&self) -> &'static str {
        "harmonic4"
    }

    fn plan(&mut self, _announcement: &Announcement) {}

    fn place(&mut self, state: &PackingState, item: &Item) -> Result<usize> {
        Ok(self.state.choose(state, item))
    }
}
