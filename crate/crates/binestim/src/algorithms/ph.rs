//! Planned-Harmonic: reserve a bin for every item that might turn out larger
//! than 1/2, pre-assign the small items to those reserved bins, and fall back
//! to Harmonic₄ for everything the plan does not cover.

use std::collections::{BTreeMap, HashMap};

use super::harmonic::Harmonic4State;
use crate::core::{Announcement, Item, OnlineAlgorithm, PackingState, Transcript};
use crate::rational::rat;
use crate::{Error, Rational, Result};

/// What a planned bin is reserved for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SlotKind {
    /// Holds one item guaranteed larger than 1/2 plus its companion set.
    Companion { large: usize },
    /// Designated bin `B_{ord+1}`: holds a planned small-item set and later
    /// receives one potentially-large item.
    Designated { ord: usize },
}

/// One planned bin: its role and the small items assigned to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanSlot {
    pub kind: SlotKind,
    pub smalls: Vec<usize>,
}

/// Output of the planning phase. Planning is a pure function of the
/// announcement, so analyses can rebuild it from a transcript.
#[derive(Debug, Clone)]
pub struct PhPlan {
    /// Items with `(1-delta) c' > 1/2`: guaranteed larger than 1/2.
    pub i1g: Vec<usize>,
    /// Items with `(1+delta) c' > 1/2` that are not guaranteed: potentially
    /// large. Sorted by id.
    pub i1p: Vec<usize>,
    /// Items with `(1-delta) c' <= 1/4` (before extraction into sets).
    pub i4plus: Vec<usize>,
    pub slots: Vec<PlanSlot>,
    /// Item id -> index into `slots`, for every planned item.
    pub slot_of_item: HashMap<usize, usize>,
    /// Slot indices of the designated bins `B_1..B_k`, in order.
    pub designated_slots: Vec<usize>,
}

impl PhPlan {
    /// Number of designated bins.
    pub fn k(&self) -> usize {
        self.designated_slots.len()
    }

    /// Ids belonging to one slot: the guaranteed-large item first (for
    /// companion slots), then the planned smalls.
    pub fn slot_members(&self, slot: usize) -> Vec<usize> {
        let s = &self.slots[slot];
        let mut members = Vec::with_capacity(s.smalls.len() + 1);
        if let SlotKind::Companion { large } = s.kind {
            members.push(large);
        }
        members.extend_from_slice(&s.smalls);
        members
    }
}

/// Builds the plan: classify by announced size, then greedily extract a
/// maximal companion set for every guaranteed-large item, then designate bins
/// with maximal small-item sets for the potentially-large items.
///
/// "Maximal" is realized as a single greedy scan over the remaining small
/// items in descending announced size (ties towards the lower id), adding
/// every item that keeps the capacity constraint. The result is
/// inclusion-maximal and deterministic.
pub fn ph_plan(announcement: &Announcement) -> PhPlan {
    let announced = announcement.announced();
    let one = Rational::one();
    let half = rat(1, 2);
    let quarter = rat(1, 4);
    let lo_factor = &one - announcement.delta();
    let hi_factor = &one + announcement.delta();

    let mut i1g = Vec::new();
    let mut i1p = Vec::new();
    let mut i4plus = Vec::new();
    for (id, c) in announced.iter().enumerate() {
        let floor = &lo_factor * c;
        if floor > half {
            i1g.push(id);
        } else if &hi_factor * c > half {
            i1p.push(id);
        }
        if floor <= quarter {
            i4plus.push(id);
        }
    }

    let mut available = i4plus.clone();
    available.sort_by(|&a, &b| announced[b].cmp(&announced[a]).then(a.cmp(&b)));

    let mut slots: Vec<PlanSlot> = Vec::new();
    let mut slot_of_item: HashMap<usize, usize> = HashMap::new();

    // Greedy extraction under a (1+delta)-worst-case budget; `false` from the
    // retain closure moves the item into the set being built.
    let extract = |available: &mut Vec<usize>, base: &Rational| -> Vec<usize> {
        let mut sum = Rational::zero();
        let mut taken = Vec::new();
        available.retain(|&id| {
            let cand = &sum + &announced[id];
            if &hi_factor * &(base + &cand) <= one {
                sum = cand;
                taken.push(id);
                false
            } else {
                true
            }
        });
        taken
    };

    for &large in &i1g {
        let smalls = extract(&mut available, &announced[large]);
        let slot = slots.len();
        slot_of_item.insert(large, slot);
        for &s in &smalls {
            slot_of_item.insert(s, slot);
        }
        slots.push(PlanSlot {
            kind: SlotKind::Companion { large },
            smalls,
        });
    }

    // Potentially-large items are budgeted at their worst case 1/(2(1-delta)).
    // At delta = 1 that reserve is unbounded and no designated set can ever
    // satisfy the budget, so none are built.
    let mut designated_slots = Vec::new();
    if lo_factor.is_positive() {
        let reserve = &one / &(Rational::from_int(2) * &lo_factor);
        for ord in 0..i1p.len() {
            if available.is_empty() {
                break;
            }
            let smalls = extract(&mut available, &reserve);
            if smalls.is_empty() {
                // No remaining small item fits the budget, so no later set
                // can take one either; designating empty bins would change
                // nothing.
                break;
            }
            let slot = slots.len();
            for &s in &smalls {
                slot_of_item.insert(s, slot);
            }
            designated_slots.push(slot);
            slots.push(PlanSlot {
                kind: SlotKind::Designated { ord },
                smalls,
            });
        }
    }

    PhPlan {
        i1g,
        i1p,
        i4plus,
        slots,
        slot_of_item,
        designated_slots,
    }
}

/// The Planned-Harmonic strategy.
#[derive(Debug, Default)]
pub struct PlannedHarmonic {
    plan: Option<PhPlan>,
    /// slot index -> physical bin, assigned when the first member arrives.
    physical: HashMap<usize, usize>,
    /// Designated bins already holding a potentially-large item.
    l: usize,
    h4: Harmonic4State,
}

impl PlannedHarmonic {
    pub fn new() -> Self {
        PlannedHarmonic::default()
    }

    /// Physical bin of a planned slot, opened on first use. Checks capacity
    /// so a violated plan surfaces as an error instead of a referee fault.
    fn slot_bin(&mut self, state: &PackingState, slot: usize, item: &Item) -> Result<usize> {
        match self.physical.get(&slot) {
            Some(&bin) => {
                if state.bins()[bin].fits(&item.actual) {
                    Ok(bin)
                } else {
                    Err(Error::PlanViolation(format!(
                        "item {} of size {} does not fit planned bin {} with load {}",
                        item.id,
                        item.actual,
                        bin,
                        state.bins()[bin].load()
                    )))
                }
            }
            None => {
                let fresh = state.fresh_index();
                self.physical.insert(slot, fresh);
                Ok(fresh)
            }
        }
    }
}

impl OnlineAlgorithm for PlannedHarmonic {
    fn name(&self) -> &'static str {
        "ph"
    }

    fn plan(&mut self, announcement: &Announcement) {
        self.plan = Some(ph_plan(announcement));
        self.physical.clear();
        self.l = 0;
        self.h4 = Harmonic4State::new();
    }

    fn place(&mut self, state: &PackingState, item: &Item) -> Result<usize> {
        let (in_i1p, k, next_designated, planned_slot, m) = {
            let plan = self.plan.as_ref().expect("plan() must run before place()");
            let in_i1p = plan.i1p.binary_search(&item.id).is_ok();
            let next = plan.designated_slots.get(self.l).copied();
            // Potentially-large items not yet revealed; the reveal order is
            // the id order, so these are exactly the ids above the current.
            let m = plan.i1p.iter().filter(|&&id| id > item.id).count();
            (
                in_i1p,
                plan.k(),
                next,
                plan.slot_of_item.get(&item.id).copied(),
                m,
            )
        };

        if in_i1p && item.actual > rat(1, 2) {
            return match next_designated {
                Some(slot) => {
                    self.l += 1;
                    self.slot_bin(state, slot, item)
                }
                None => Ok(state.fresh_index()),
            };
        }
        if in_i1p && item.actual > rat(1, 3) {
            // Revealed medium: fall back to Harmonic₄ while enough
            // potentially-large items remain to fill the reserved bins.
            if m >= k - self.l {
                return Ok(self.h4.choose(state, item));
            }
            let slot = next_designated.expect("m < k - l implies l < k");
            self.l += 1;
            return self.slot_bin(state, slot, item);
        }
        match planned_slot {
            Some(slot) => self.slot_bin(state, slot, item),
            None => Ok(self.h4.choose(state, item)),
        }
    }

    fn counters(&self) -> BTreeMap<String, i64> {
        let mut c = BTreeMap::new();
        if let Some(plan) = &self.plan {
            c.insert("ph.k".into(), plan.k() as i64);
            c.insert("ph.l".into(), self.l as i64);
        }
        c
    }
}

/// Structural facts about a finished Planned-Harmonic run, recovered from the
/// transcript by rebuilding the plan.
#[derive(Debug)]
pub struct PhRunAnalysis {
    pub plan: PhPlan,
    /// Physical bin of each designated slot, in `B_1..B_k` order.
    pub designated_bins: Vec<usize>,
    /// True iff every item that revealed larger than 1/2 sits in a planned
    /// bin with a non-empty planned small set (all of which is present).
    pub all_large_companioned: bool,
    /// Bins whose final load is below 2/3.
    pub low_fill_bins: usize,
    /// Bins produced by the Harmonic₄ fallback that hold only items of size
    /// at most 1/4.
    pub fallback_small_bins: usize,
    /// Designated bins holding a potentially-large item that revealed at
    /// most 1/2.
    pub designated_with_medium: usize,
}

/// Analyzes a transcript produced by [`PlannedHarmonic`] on a full run.
///
/// Only meaningful while no planned small item is itself potentially large
/// (guaranteed for accuracies up to 1/3, where the two classes are
/// disjoint); past that, the large-item branches may legitimately route a
/// planned item away from its slot.
pub fn analyze_ph_run(transcript: &Transcript) -> Result<PhRunAnalysis> {
    if transcript.actuals.len() != transcript.announcement.n() {
        return Err(Error::BadParameter("analysis requires a full run".into()));
    }
    let plan = ph_plan(&transcript.announcement);
    if plan
        .i1p
        .iter()
        .any(|id| plan.slot_of_item.contains_key(id))
    {
        return Err(Error::BadParameter(
            "analysis undefined: a planned small item is potentially large".into(),
        ));
    }
    let bin_of = &transcript.placements;

    // Every slot's members must share one bin; that bin is the slot's
    // physical bin.
    let mut bin_to_slot: HashMap<usize, usize> = HashMap::new();
    for slot in 0..plan.slots.len() {
        let members = plan.slot_members(slot);
        if members.is_empty() {
            continue;
        }
        let bin = bin_of[members[0]];
        for &m in &members {
            if bin_of[m] != bin {
                return Err(Error::PlanViolation(format!(
                    "slot {slot} members scattered over bins {} and {}",
                    bin, bin_of[m]
                )));
            }
        }
        bin_to_slot.insert(bin, slot);
    }

    let designated_bins: Vec<usize> = plan
        .designated_slots
        .iter()
        .map(|&slot| bin_of[plan.slots[slot].smalls[0]])
        .collect();

    let half = rat(1, 2);
    let mut all_large_companioned = true;
    for item in transcript.items() {
        if item.actual > half {
            let companioned = bin_to_slot
                .get(&bin_of[item.id])
                .map(|&slot| !plan.slots[slot].smalls.is_empty())
                .unwrap_or(false);
            if !companioned {
                all_large_companioned = false;
            }
        }
    }

    let two_thirds = rat(2, 3);
    let low_fill_bins = transcript
        .final_state
        .bins()
        .iter()
        .filter(|b| b.load() < &two_thirds)
        .count();

    let quarter = rat(1, 4);
    let planned_bins: std::collections::HashSet<usize> = bin_to_slot.keys().copied().collect();
    let fallback_small_bins = transcript
        .final_state
        .bins()
        .iter()
        .enumerate()
        .filter(|(i, b)| {
            !planned_bins.contains(i)
                && b.items()
                    .iter()
                    .all(|&id| transcript.actuals[id] <= quarter)
        })
        .count();

    let designated_with_medium = designated_bins
        .iter()
        .enumerate()
        .filter(|&(ord, &bin)| {
            let slot = plan.designated_slots[ord];
            transcript.final_state.bins()[bin]
                .items()
                .iter()
                .any(|&id| {
                    !plan.slots[slot].smalls.contains(&id) && transcript.actuals[id] <= half
                })
        })
        .count();

    Ok(PhRunAnalysis {
        plan,
        designated_bins,
        all_large_companioned,
        low_fill_bins,
        fallback_small_bins,
        designated_with_medium,
    })
}
