//! The referee drives the online protocol and validates both sides: the
//! algorithm may only make legal placements, the size source may only reveal
//! sizes inside the announced band.

use std::collections::BTreeMap;

use super::{validate_actual, Announcement, Item, PackingState, Transcript};
use crate::{Error, Rational, Result};

/// A deterministic online packing strategy.
///
/// The referee calls [`plan`](OnlineAlgorithm::plan) once with the full
/// announcement, then [`place`](OnlineAlgorithm::place) for every revealed
/// item in order. `place` returns the chosen bin index; the index of the
/// first empty bin opens a new one. Placements are irrevocable.
pub trait OnlineAlgorithm {
    fn name(&self) -> &'static str;

    fn plan(&mut self, announcement: &Announcement);

    fn place(&mut self, state: &PackingState, item: &Item) -> Result<usize>;

    /// Named counters exported into the transcript for invariant testing.
    /// The referee treats them as opaque.
    fn counters(&self) -> BTreeMap<String, i64> {
        BTreeMap::new()
    }
}

/// An adaptive size source. It commits to an announcement before the game,
/// then emits one actual size per item, observing every placement in between.
pub trait AdaptiveAdversary {
    fn name(&self) -> &'static str;

    fn announcement(&self) -> Announcement;

    /// Next actual size, or `None` to end the instance early.
    fn next_actual(&mut self) -> Result<Option<Rational>>;

    /// Called after the referee applied the placement; `state` is the packing
    /// after the item landed in `bin_index`.
    fn observe(&mut self, item: &Item, bin_index: usize, state: &PackingState);

    fn counters(&self) -> BTreeMap<String, i64> {
        BTreeMap::new()
    }
}

fn check_band(announcement: &Announcement, id: usize, actual: &Rational) -> Result<()> {
    if !validate_actual(&announcement.announced()[id], announcement.delta(), actual) {
        return Err(Error::AdversaryDishonest {
            item: id,
            actual: actual.to_string(),
            announced: announcement.announced()[id].to_string(),
            delta: announcement.delta().to_string(),
        });
    }
    Ok(())
}

/// Plays a full game on a fixed instance: plan once, then reveal the actual
/// sizes in announcement order.
pub fn run_game(
    algorithm: &mut dyn OnlineAlgorithm,
    announcement: &Announcement,
    actuals: &[Rational],
) -> Result<Transcript> {
    if actuals.len() != announcement.n() {
        return Err(Error::BadParameter(format!(
            "{} actual sizes for {} announced items",
            actuals.len(),
            announcement.n()
        )));
    }
    algorithm.plan(announcement);
    let mut state = PackingState::new();
    let mut placements = Vec::with_capacity(actuals.len());
    for (id, actual) in actuals.iter().enumerate() {
        check_band(announcement, id, actual)?;
        let item = Item {
            id,
            announced: announcement.announced()[id].clone(),
            actual: actual.clone(),
        };
        let bin = algorithm.place(&state, &item)?;
        state.place(bin, &item)?;
        placements.push(bin);
    }
    Ok(Transcript {
        announcement: announcement.clone(),
        actuals: actuals.to_vec(),
        placements,
        final_state: state,
        counters: algorithm.counters(),
    })
}

/// Plays an adaptive game: the adversary commits to the announcement, then
/// sizes and placements alternate until all announced items are revealed (or
/// the adversary ends the instance early). The transcript records the induced
/// instance so the game can be replayed offline.
pub fn run_adaptive_game(
    algorithm: &mut dyn OnlineAlgorithm,
    adversary: &mut dyn AdaptiveAdversary,
) -> Result<Transcript> {
    let announcement = adversary.announcement();
    algorithm.plan(&announcement);
    let mut state = PackingState::new();
    let mut placements = Vec::new();
    let mut actuals = Vec::new();
    for id in 0..announcement.n() {
        let actual = match adversary.next_actual()? {
            Some(a) => a,
            None => break,
        };
        check_band(&announcement, id, &actual)?;
        let item = Item {
            id,
            announced: announcement.announced()[id].clone(),
            actual: actual.clone(),
        };
        let bin = algorithm.place(&state, &item)?;
        state.place(bin, &item)?;
        adversary.observe(&item, bin, &state);
        actuals.push(actual);
        placements.push(bin);
    }
    let mut counters = algorithm.counters();
    counters.extend(adversary.counters());
    Ok(Transcript {
        announcement,
        actuals,
        placements,
        final_state: state,
        counters,
    })
}
