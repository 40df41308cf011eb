//! Game transcripts: everything needed to replay a finished game offline.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Announcement, Item, PackingState};
use crate::{Error, Rational, Result};

/// The record of one finished game. Replaying the decision sequence from the
/// announcement reproduces the final packing exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub announcement: Announcement,
    /// Actual sizes in reveal order; may be shorter than the announcement if
    /// an adversary ended the instance early.
    pub actuals: Vec<Rational>,
    /// Chosen bin index per revealed item.
    pub placements: Vec<usize>,
    pub final_state: PackingState,
    pub counters: BTreeMap<String, i64>,
}

impl Transcript {
    /// Number of bins the algorithm used.
    pub fn bins_used(&self) -> usize {
        self.final_state.num_bins()
    }

    /// Revealed items in order.
    pub fn items(&self) -> impl Iterator<Item = Item> + '_ {
        self.actuals.iter().enumerate().map(|(id, actual)| Item {
            id,
            announced: self.announcement.announced()[id].clone(),
            actual: actual.clone(),
        })
    }

    /// Re-applies the recorded placements and returns the resulting packing.
    pub fn replay(&self) -> Result<PackingState> {
        let mut state = PackingState::new();
        for (item, &bin) in self.items().zip(self.placements.iter()) {
            state.place(bin, &item)?;
        }
        Ok(state)
    }

    /// True for every item placed into a bin that was already non-empty.
    /// Index `i` refers to the i-th revealed item.
    pub fn stacked_flags(&self) -> Vec<bool> {
        let mut counts: Vec<usize> = Vec::new();
        let mut flags = Vec::with_capacity(self.placements.len());
        for &bin in &self.placements {
            if bin == counts.len() {
                counts.push(0);
            }
            flags.push(counts[bin] > 0);
            counts[bin] += 1;
        }
        flags
    }

    pub fn to_json(&self) -> String {
        let wire = TranscriptWire {
            delta: self.announcement.delta().clone(),
            announced: self.announcement.announced().to_vec(),
            actual: self.actuals.clone(),
            placements: self.placements.clone(),
            bins: self
                .final_state
                .bins()
                .iter()
                .map(|b| b.items().to_vec())
                .collect(),
            counters: self.counters.clone(),
        };
        serde_json::to_string_pretty(&wire).expect("transcript serializes")
    }

    pub fn from_json(text: &str) -> Result<Transcript> {
        let wire: TranscriptWire =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("transcript: {e}")))?;
        let announcement = Announcement::new(wire.delta, wire.announced)?;
        if wire.actual.len() != wire.placements.len() {
            return Err(Error::Parse(
                "transcript: actual and placement counts differ".into(),
            ));
        }
        let draft = Transcript {
            announcement,
            actuals: wire.actual,
            placements: wire.placements,
            final_state: PackingState::new(),
            counters: wire.counters,
        };
        let state = draft.replay()?;
        let recorded: Vec<Vec<usize>> = state.bins().iter().map(|b| b.items().to_vec()).collect();
        if recorded != wire.bins {
            return Err(Error::Parse(
                "transcript: recorded bins do not match replayed placements".into(),
            ));
        }
        Ok(Transcript {
            final_state: state,
            ..draft
        })
    }
}

#[derive(Serialize, Deserialize)]
struct TranscriptWire {
    delta: Rational,
    announced: Vec<Rational>,
    actual: Vec<Rational>,
    placements: Vec<usize>,
    bins: Vec<Vec<usize>>,
    counters: BTreeMap<String, i64>,
}
