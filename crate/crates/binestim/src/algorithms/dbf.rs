//! Delayed-Best-Fit: reserve the first third of the revealed small items for
//! bins holding a large item, packing everything else Best-Fit style. Built
//! for instances where no three items fit into one bin.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::fullest_fitting;
use crate::core::{Announcement, Item, OnlineAlgorithm, PackingState, Transcript};
use crate::rational::rat;
use crate::{Error, Rational, Result};

/// Ids of the special items of an instance: the first `floor(n/3)` items in
/// reveal order whose actual size is at most 1/2. This depends only on the
/// instance, never on placements.
pub fn special_item_ids(n: usize, actuals: &[Rational]) -> Vec<bool> {
    let budget = n / 3;
    let half = rat(1, 2);
    let mut used = 0;
    actuals
        .iter()
        .map(|a| {
            if used < budget && *a <= half {
                used += 1;
                true
            } else {
                false
            }
        })
        .collect()
}

/// The Delayed-Best-Fit strategy.
#[derive(Debug, Default)]
pub struct DelayedBestFit {
    budget: usize,
    specials_used: usize,
    bin_has_large: Vec<bool>,
}

impl DelayedBestFit {
    pub fn new() -> Self {
        DelayedBestFit::default()
    }
}

impl OnlineAlgorithm for DelayedBestFit {
    fn name(&self) -> &'static str {
        "dbf"
    }

    fn plan(&mut self, announcement: &Announcement) {
        self.budget = announcement.n() / 3;
        self.specials_used = 0;
        self.bin_has_large.clear();
    }

    fn place(&mut self, state: &PackingState, item: &Item) -> Result<usize> {
        let half = rat(1, 2);
        let special = item.actual <= half && self.specials_used < self.budget;
        let idx = if special {
            self.specials_used += 1;
            // Fullest bin holding a large item that still fits, else a fresh
            // bin; specials never share with anything else.
            fullest_fitting(state, &item.actual, |i, _| self.bin_has_large[i])
                .unwrap_or_else(|| state.fresh_index())
        } else {
            fullest_fitting(state, &item.actual, |_, _| true)
                .unwrap_or_else(|| state.fresh_index())
        };
        if idx == self.bin_has_large.len() {
            self.bin_has_large.push(false);
        }
        if item.actual > half {
            self.bin_has_large[idx] = true;
        }
        Ok(idx)
    }

    fn counters(&self) -> BTreeMap<String, i64> {
        BTreeMap::from([
            ("dbf.budget".to_string(), self.budget as i64),
            ("dbf.specials_used".to_string(), self.specials_used as i64),
        ])
    }
}

/// Bin-configuration census of a Delayed-Best-Fit packing:
/// a large item alone (`x`), large + regular small (`x2`), large + special
/// (`xs`), special alone (`y`), special + regular small (`y2`) and bins of
/// regular smalls only (`z`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BinTypeCounts {
    pub x: usize,
    pub x2: usize,
    pub xs: usize,
    pub y: usize,
    pub y2: usize,
    pub z: usize,
    /// Number of items larger than 1/2.
    pub n1: usize,
}

impl BinTypeCounts {
    /// `y' = y + y2`.
    pub fn y_prime(&self) -> usize {
        self.y + self.y2
    }

    pub fn total_bins(&self) -> usize {
        self.x + self.x2 + self.xs + self.y + self.y2 + self.z
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Role {
    Large,
    Special,
    Regular,
}

/// Classifies every bin of a Delayed-Best-Fit transcript. A bin outside the
/// taxonomy (three items, two larges, two specials, ...) signals an
/// implementation bug and is reported as [`Error::UnclassifiableBin`].
pub fn classify_dbf_bins(transcript: &Transcript) -> Result<BinTypeCounts> {
    let n = transcript.announcement.n();
    let specials = special_item_ids(n, &transcript.actuals);
    let half = rat(1, 2);
    let role = |id: usize| {
        if transcript.actuals[id] > half {
            Role::Large
        } else if specials[id] {
            Role::Special
        } else {
            Role::Regular
        }
    };

    let mut counts = BinTypeCounts {
        n1: transcript.actuals.iter().filter(|a| **a > half).count(),
        ..BinTypeCounts::default()
    };
    for (bin_index, bin) in transcript.final_state.bins().iter().enumerate() {
        let roles: Vec<Role> = bin.items().iter().map(|&id| role(id)).collect();
        match roles.as_slice() {
            [Role::Large] => counts.x += 1,
            [Role::Large, Role::Regular] | [Role::Regular, Role::Large] => counts.x2 += 1,
            [Role::Large, Role::Special] | [Role::Special, Role::Large] => counts.xs += 1,
            [Role::Special] => counts.y += 1,
            [Role::Special, Role::Regular] | [Role::Regular, Role::Special] => counts.y2 += 1,
            rs if !rs.is_empty() && rs.iter().all(|r| *r == Role::Regular) => counts.z += 1,
            rs => {
                return Err(Error::UnclassifiableBin {
                    bin: bin_index,
                    detail: format!("{rs:?}"),
                })
            }
        }
    }
    Ok(counts)
}
