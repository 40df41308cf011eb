//! Instance model, packing state and the online protocol referee.

mod io;
mod referee;
mod transcript;

pub use io::{parse_instance, render_instance};
pub use referee::{run_adaptive_game, run_game, AdaptiveAdversary, OnlineAlgorithm};
pub use transcript::Transcript;

use crate::{Error, Rational, Result};

/// The information handed to an algorithm before any item is revealed:
/// the accuracy factor and one estimated size per item.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Announcement {
    delta: Rational,
    announced: Vec<Rational>,
}

impl Announcement {
    /// Validates `delta` in `(0,1]` and every estimate in `(0,1]`.
    pub fn new(delta: Rational, announced: Vec<Rational>) -> Result<Self> {
        if !delta.is_positive() || delta > Rational::one() {
            return Err(Error::BadParameter(format!("delta {delta} not in (0,1]")));
        }
        for (i, a) in announced.iter().enumerate() {
            if !a.is_positive() || *a > Rational::one() {
                return Err(Error::BadParameter(format!(
                    "announced size {a} of item {i} not in (0,1]"
                )));
            }
        }
        Ok(Announcement { delta, announced })
    }

    pub fn delta(&self) -> &Rational {
        &self.delta
    }

    pub fn announced(&self) -> &[Rational] {
        &self.announced
    }

    pub fn n(&self) -> usize {
        self.announced.len()
    }

    /// Closed band of legal actual sizes for one item.
    pub fn band(&self, id: usize) -> (Rational, Rational) {
        band(&self.announced[id], &self.delta)
    }
}

/// Closed band `[c'(1-delta), min(c'(1+delta), 1)]` of legal actual sizes.
pub fn band(announced: &Rational, delta: &Rational) -> (Rational, Rational) {
    let lo = announced * &(Rational::one() - delta);
    let hi = (announced * &(Rational::one() + delta)).min(Rational::one());
    (lo, hi)
}

/// True iff `actual` lies inside the closed deviation band of `announced`.
/// Both endpoints are legal.
pub fn validate_actual(announced: &Rational, delta: &Rational, actual: &Rational) -> bool {
    let (lo, hi) = band(announced, delta);
    *actual >= lo && *actual <= hi
}

/// One revealed item: its index in the announcement, the estimate it was
/// announced with, and the actual size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Item {
    pub id: usize,
    pub announced: Rational,
    pub actual: Rational,
}

/// A single bin: the ids packed into it and their exact combined size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bin {
    items: Vec<usize>,
    load: Rational,
}

impl Bin {
    fn new() -> Self {
        Bin {
            items: Vec::new(),
            load: Rational::zero(),
        }
    }

    pub fn items(&self) -> &[usize] {
        &self.items
    }

    pub fn load(&self) -> &Rational {
        &self.load
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Remaining capacity check: would `size` still fit?
    pub fn fits(&self, size: &Rational) -> bool {
        &self.load + size <= Rational::one()
    }
}

/// The evolving packing. Bins are dense: a new bin is always opened at the
/// first empty index, which makes transcripts canonical and replayable.
/// There is no removal operation; every placement is irrevocable.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PackingState {
    bins: Vec<Bin>,
}

impl PackingState {
    pub fn new() -> Self {
        PackingState { bins: Vec::new() }
    }

    pub fn bins(&self) -> &[Bin] {
        &self.bins
    }

    pub fn num_bins(&self) -> usize {
        self.bins.len()
    }

    /// Index a fresh bin would receive.
    pub fn fresh_index(&self) -> usize {
        self.bins.len()
    }

    /// Appends `item` to the addressed bin, opening it on demand when
    /// `bin_index` equals the first empty index.
    pub fn place(&mut self, bin_index: usize, item: &Item) -> Result<()> {
        if bin_index > self.bins.len() {
            return Err(Error::InvalidBin {
                index: bin_index,
                fresh: self.bins.len(),
            });
        }
        if bin_index == self.bins.len() {
            self.bins.push(Bin::new());
        }
        let bin = &mut self.bins[bin_index];
        let new_load = &bin.load + &item.actual;
        if new_load > Rational::one() {
            return Err(Error::CapacityExceeded {
                bin: bin_index,
                load: bin.load.to_string(),
                item: item.actual.to_string(),
            });
        }
        bin.items.push(item.id);
        bin.load = new_load;
        Ok(())
    }

    /// Exact sum of all loads.
    pub fn total_load(&self) -> Rational {
        self.bins
            .iter()
            .fold(Rational::zero(), |acc, b| acc + &b.load)
    }
}

/// A full problem instance: the announcement plus, when known upfront, the
/// actual sizes. Adversary-driven games start without actuals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub announcement: Announcement,
    pub actuals: Option<Vec<Rational>>,
}

impl Instance {
    pub fn new(announcement: Announcement, actuals: Vec<Rational>) -> Result<Self> {
        if actuals.len() != announcement.n() {
            return Err(Error::BadParameter(format!(
                "{} actual sizes for {} announced items",
                actuals.len(),
                announcement.n()
            )));
        }
        Ok(Instance {
            announcement,
            actuals: Some(actuals),
        })
    }

    pub fn actuals(&self) -> Result<&[Rational]> {
        self.actuals
            .as_deref()
            .ok_or_else(|| Error::BadParameter("instance has no actual sizes".into()))
    }
}
