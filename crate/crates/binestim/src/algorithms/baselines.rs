//! The classical strategies: Next-Fit, First-Fit and Best-Fit.

use super::fullest_fitting;
use crate::core::{Announcement, Item, OnlineAlgorithm, PackingState};
use crate::Result;

/// Places each item in the last used bin if it fits, otherwise a new bin.
#[derive(Debug, Default)]
pub struct NextFit;

impl NextFit {
    pub fn new() -> Self {
        NextFit
    }
}

impl OnlineAlgorithm for NextFit {
    fn name(&self) -> &'static str {
        "nextfit"
    }

    fn plan(&mut self, _announcement: &Announcement) {}

    fn place(&mut self, state: &PackingState, item: &Item) -> Result<usize> {
        match state.bins().last() {
            Some(bin) if bin.fits(&item.actual) => Ok(state.num_bins() - 1),
            _ => Ok(state.fresh_index()),
        }
    }
}

/// Places each item in the first bin it fits into, otherwise a new bin.
#[derive(Debug, Default)]
pub struct FirstFit;

impl FirstFit {
    pub fn new() -> Self {
        FirstFit
    }
}

impl OnlineAlgorithm for FirstFit {
    fn name(&self) -> &'static str {
        "firstfit"
    }

    fn plan(&mut self, _announcement: &Announcement) {}

    fn place(&mut self, state: &PackingState, item: &Item) -> Result<usize> {
        Ok(state
            .bins()
            .iter()
            .position(|bin| bin.fits(&item.actual))
            .unwrap_or_else(|| state.fresh_index()))
    }
}

/// Places each item in the fullest bin it fits into (ties to the lowest
/// index), otherwise a new bin.
#[derive(Debug, Default)]
pub struct BestFit;

impl BestFit {
    pub fn new() -> Self {
        BestFit
    }
}

impl OnlineAlgorithm for BestFit {
    fn name(&self) -> &'static str {
        "bestfit"
    }

    fn plan(&mut self, _announcement: &Announcement) {}

    fn place(&mut self, state: &PackingState, item: &Item) -> Result<usize> {
        Ok(fullest_fitting(state, &item.actual, |_, _| true)
            .unwrap_or_else(|| state.fresh_index()))
    }
}
