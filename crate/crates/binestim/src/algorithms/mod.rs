//! Packing strategies behind the [`OnlineAlgorithm`] interface.

mod baselines;
mod dbf;
mod harmonic;
mod ph;

pub use baselines::{BestFit, FirstFit, NextFit};
pub use dbf::{classify_dbf_bins, special_item_ids, BinTypeCounts, DelayedBestFit};
pub use harmonic::{classify_harmonic, Harmonic4, HarmonicClass};
pub use ph::{analyze_ph_run, ph_plan, PhPlan, PhRunAnalysis, PlanSlot, PlannedHarmonic, SlotKind};

use crate::core::{Bin, OnlineAlgorithm, PackingState};
use crate::Rational;

/// Names accepted by [`algorithm_by_name`], in registry order.
pub const ALGORITHM_NAMES: &[&str] = &["nextfit", "firstfit", "bestfit", "harmonic4", "ph", "dbf"];

/// Looks up a fresh algorithm instance by its registry name.
pub fn algorithm_by_name(name: &str) -> Option<Box<dyn OnlineAlgorithm>> {
    match name {
        "nextfit" => Some(Box::new(NextFit::new())),
        "firstfit" => Some(Box::new(FirstFit::new())),
        "bestfit" => Some(Box::new(BestFit::new())),
        "harmonic4" => Some(Box::new(Harmonic4::new())),
        "ph" => Some(Box::new(PlannedHarmonic::new())),
        "dbf" => Some(Box::new(DelayedBestFit::new())),
        _ => None,
    }
}

/// Fullest bin that fits `size` among bins accepted by `pred`, ties broken
/// towards the lowest index.
pub(crate) fn fullest_fitting(
    state: &PackingState,
    size: &Rational,
    mut pred: impl FnMut(usize, &Bin) -> bool,
) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, bin) in state.bins().iter().enumerate() {
        if bin.fits(size) && pred(i, bin) {
            let better = match best {
                None => true,
                Some(j) => bin.load() > state.bins()[j].load(),
            };
            if better {
                best = Some(i);
            }
        }
    }
    best
}
