//! The 4/3 forcing construction.
//!
//! All `2n` items are announced at exactly 1/2. During the first `4n/3`
//! reveals the sizes decrease so that whatever the algorithm stacks onto a
//! non-empty bin is strictly smaller than everything it laid out into fresh
//! bins. The second phase then presents one item per stacked item that fits
//! together only with stacked items, plus filler items of exactly 1/2. The
//! algorithm ends up with at least `4n/3` bins while the induced instance
//! packs into `n`.

use std::collections::BTreeMap;

use super::CertifiedAdversary;
use crate::core::{AdaptiveAdversary, Announcement, Item, PackingState, Transcript};
use crate::oracle::OptResult;
use crate::rational::rat;
use crate::{Error, Rational, Result};

/// `2n` announcements of exactly 1/2 with the given accuracy.
pub fn four_thirds_announce(n: usize, delta: &Rational) -> Result<Announcement> {
    if n == 0 || !n.is_multiple_of(3) {
        return Err(Error::BadParameter(format!(
            "fourthirds needs a positive n divisible by 3, got {n}"
        )));
    }
    Announcement::new(delta.clone(), vec![rat(1, 2); 2 * n])
}

#[derive(Debug)]
pub struct FourThirdsAdversary {
    n: usize,
    delta: Rational,
    announcement: Announcement,
    /// Items emitted so far; the item currently in flight has index
    /// `emitted - 1`.
    emitted: usize,
    /// Stacking events so far; `i = 1 + stacked`.
    stacked: usize,
    /// 1-based reveal index of the most recent stacking event.
    last_stack_at: usize,
    /// Size of the most recently laid-out item, the reference of the size
    /// formula for epochs past the first.
    reference: Option<Rational>,
    min_laid_out: Option<Rational>,
    max_stacked: Option<Rational>,
    /// Second-phase size for the forcing items, fixed at the phase boundary.
    large_size: Option<Rational>,
}

impl FourThirdsAdversary {
    pub fn new(n: usize, delta: Rational) -> Result<Self> {
        let announcement = four_thirds_announce(n, &delta)?;
        Ok(FourThirdsAdversary {
            n,
            delta,
            announcement,
            emitted: 0,
            stacked: 0,
            last_stack_at: 0,
            reference: None,
            min_laid_out: None,
            max_stacked: None,
            large_size: None,
        })
    }

    fn phase1_len(&self) -> usize {
        4 * self.n / 3
    }

    /// Size of the next phase-1 item: `1/2 - k delta / (2 n^i)`, anchored at
    /// 1/2 for the first epoch and at the last laid-out size afterwards.
    ///
    /// The formula stays inside the band only while no epoch outlasts n
    /// items; an opponent that rarely stacks pushes k past that. Every
    /// emission therefore must land strictly between the largest stacked and
    /// the smallest laid-out size (and above the band floor); when the
    /// formula value escapes that window, the window midpoint is emitted
    /// instead, which preserves both the ordering invariant and band
    /// honesty.
    fn phase1_size(&self) -> Rational {
        let k = self.emitted + 1 - self.last_stack_at;
        let i = 1 + self.stacked;
        let step = (Rational::from(k) * &self.delta)
            / (Rational::from_int(2) * Rational::from(self.n).pow(i as u32));
        let formula = match (&self.reference, i) {
            (_, 1) => rat(1, 2) - step,
            (Some(r), _) => r - step,
            (None, _) => unreachable!("a stacking event requires a laid-out item first"),
        };
        let band_lo = rat(1, 2) * (Rational::one() - &self.delta);
        let lower = match &self.max_stacked {
            Some(s) => s.clone().max(band_lo),
            None => band_lo,
        };
        let upper = self.min_laid_out.clone().unwrap_or_else(|| rat(1, 2));
        if formula > lower && formula < upper {
            formula
        } else {
            (lower + upper) / Rational::from_int(2)
        }
    }

    /// Fixes the phase-2 forcing size: strictly too big for every laid-out
    /// item, fitting next to every stacked item, inside the band. The
    /// admissible interval is open below and closed above; the midpoint
    /// keeps clear of both ends.
    fn fix_large_size(&mut self) -> Result<()> {
        if self.stacked == 0 {
            self.large_size = None;
            return Ok(());
        }
        let (max_stacked, min_laid) = match (&self.max_stacked, &self.min_laid_out) {
            (Some(s), Some(l)) => (s, l),
            _ => {
                return Err(Error::ConstructionFailure(
                    "stacked items without laid-out items".into(),
                ))
            }
        };
        let one = Rational::one();
        let band_hi = (rat(1, 2) * (&one + &self.delta)).min(one.clone());
        let lower = &one - min_laid; // exclusive
        let upper = (&one - max_stacked).min(band_hi); // inclusive
        if lower >= upper {
            return Err(Error::ConstructionFailure(format!(
                "no admissible forcing size in ({lower}, {upper}]"
            )));
        }
        self.large_size = Some((lower + upper) / Rational::from_int(2));
        Ok(())
    }
}

impl AdaptiveAdversary for FourThirdsAdversary {
    fn name(&self) -> &'static str {
        "fourthirds"
    }

    fn announcement(&self) -> Announcement {
        self.announcement.clone()
    }

    fn next_actual(&mut self) -> Result<Option<Rational>> {
        let id = self.emitted;
        if id >= 2 * self.n {
            return Ok(None);
        }
        if id == self.phase1_len() {
            self.fix_large_size()?;
        }
        let size = if id < self.phase1_len() {
            self.phase1_size()
        } else if id < self.phase1_len() + self.stacked {
            self.large_size.clone().expect("fixed at phase boundary")
        } else {
            rat(1, 2)
        };
        self.emitted += 1;
        Ok(Some(size))
    }

    fn observe(&mut self, item: &Item, bin_index: usize, state: &PackingState) {
        if item.id >= self.phase1_len() {
            return;
        }
        let stacked = state.bins()[bin_index].len() > 1;
        if stacked {
            self.stacked += 1;
            self.last_stack_at = item.id + 1;
            let worst = match &self.max_stacked {
                Some(m) => item.actual.clone().max(m.clone()),
                None => item.actual.clone(),
            };
            self.max_stacked = Some(worst);
        } else {
            self.reference = Some(item.actual.clone());
            let best = match &self.min_laid_out {
                Some(m) => item.actual.clone().min(m.clone()),
                None => item.actual.clone(),
            };
            self.min_laid_out = Some(best);
        }
    }

    fn counters(&self) -> BTreeMap<String, i64> {
        BTreeMap::from([
            ("ft.t".to_string(), self.stacked as i64),
            ("ft.n".to_string(), self.n as i64),
        ])
    }
}

impl CertifiedAdversary for FourThirdsAdversary {
    fn certificate(&self, transcript: &Transcript) -> Result<OptResult> {
        four_thirds_certificate(transcript)
    }
}

/// Builds and verifies the n-bin optimal packing of a finished game: each
/// phase-2 forcing item shares a bin with one stacked item; everything else
/// (all of size at most 1/2) is paired up arbitrarily.
pub fn four_thirds_certificate(transcript: &Transcript) -> Result<OptResult> {
    let total = transcript.announcement.n();
    if transcript.actuals.len() != total || !total.is_multiple_of(2) {
        return Err(Error::CertificateInfeasible(
            "certificate requires a finished game".into(),
        ));
    }
    let n = total / 2;
    let phase1 = 4 * n / 3;
    let half = rat(1, 2);
    let flags = transcript.stacked_flags();

    let stacked: Vec<usize> = (0..phase1).filter(|&i| flags[i]).collect();
    let laid_out: Vec<usize> = (0..phase1).filter(|&i| !flags[i]).collect();
    let forcing: Vec<usize> = (phase1..total)
        .filter(|&i| transcript.actuals[i] > half)
        .collect();
    if forcing.len() != stacked.len() {
        return Err(Error::CertificateInfeasible(format!(
            "{} forcing items for {} stacked items",
            forcing.len(),
            stacked.len()
        )));
    }

    let mut certificate: Vec<Vec<usize>> = forcing
        .iter()
        .zip(stacked.iter())
        .map(|(&f, &s)| {
            let mut bin = vec![f, s];
            bin.sort_unstable();
            bin
        })
        .collect();
    let mut rest: Vec<usize> = laid_out;
    rest.extend((phase1..total).filter(|&i| transcript.actuals[i] <= half));
    for pair in rest.chunks(2) {
        certificate.push(pair.to_vec());
    }
    certificate.sort();

    // All sizes above 1/3 means no bin can hold three items, making the
    // n-bin certificate not just feasible but optimal.
    let third = rat(1, 3);
    let exact = transcript.actuals.iter().all(|a| *a > third);

    let result = OptResult {
        bins: certificate.len(),
        certificate,
        exact,
    };
    result.verify(&transcript.actuals)?;
    if result.bins != n {
        return Err(Error::CertificateInfeasible(format!(
            "certificate uses {} bins, expected {n}",
            result.bins
        )));
    }
    Ok(result)
}

/// Checks the heart of the construction on a finished transcript: every
/// phase-1 stacked item is strictly smaller than every phase-1 laid-out item.
pub fn verify_stacked_minimality(transcript: &Transcript) -> Result<()> {
    let n = transcript.announcement.n() / 2;
    let phase1 = 4 * n / 3;
    let flags = transcript.stacked_flags();
    let max_stacked = (0..phase1.min(transcript.actuals.len()))
        .filter(|&i| flags[i])
        .map(|i| &transcript.actuals[i])
        .max();
    let min_laid = (0..phase1.min(transcript.actuals.len()))
        .filter(|&i| !flags[i])
        .map(|i| &transcript.actuals[i])
        .min();
    if let (Some(s), Some(l)) = (max_stacked, min_laid) {
        if s >= l {
            return Err(Error::ConstructionFailure(format!(
                "stacked item of size {s} not below laid-out minimum {l}"
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::NextFit;
    use crate::core::{run_adaptive_game, validate_actual, OnlineAlgorithm};
    use crate::oracle::opt_pairing;

    #[test]
    fn announce_validates_parameters() {
        assert!(four_thirds_announce(4, &rat(1, 100)).is_err());
        assert!(four_thirds_announce(0, &rat(1, 100)).is_err());
        let ann = four_thirds_announce(3, &rat(1, 100)).unwrap();
        assert_eq!(ann.n(), 6);
        assert!(ann.announced().iter().all(|a| *a == rat(1, 2)));
        assert_eq!(four_thirds_announce(300, &rat(1, 35)).unwrap().n(), 600);
    }

    #[test]
    fn first_size_matches_formula() {
        // n = 3, delta = 1/100: 1/2 - delta/(2n) = 1/2 - 1/600 = 299/600.
        let mut adv = FourThirdsAdversary::new(3, rat(1, 100)).unwrap();
        let first = adv.next_actual().unwrap().unwrap();
        assert_eq!(first, rat(299, 600));
    }

    #[test]
    fn second_size_after_laying_out_continues_epoch_one() {
        let mut adv = FourThirdsAdversary::new(3, rat(1, 100)).unwrap();
        let first = adv.next_actual().unwrap().unwrap();
        let mut state = PackingState::new();
        let item = Item {
            id: 0,
            announced: rat(1, 2),
            actual: first,
        };
        state.place(0, &item).unwrap();
        adv.observe(&item, 0, &state);
        // Laid out: k = 2, still epoch 1: 1/2 - 2/600 = 149/300.
        let second = adv.next_actual().unwrap().unwrap();
        assert_eq!(second, rat(149, 300));
    }

    #[test]
    fn next_fit_duel_is_replayable_and_forced() {
        let mut adv = FourThirdsAdversary::new(3, rat(1, 100)).unwrap();
        let t = run_adaptive_game(&mut NextFit::new(), &mut adv).unwrap();
        assert_eq!(t.actuals.len(), 6);
        // Replaying the induced instance offline reproduces the game.
        let mut replay_alg = NextFit::new();
        let again =
            crate::core::run_game(&mut replay_alg, &t.announcement, &t.actuals).unwrap();
        assert_eq!(again.placements, t.placements);

        verify_stacked_minimality(&t).unwrap();
        for (id, actual) in t.actuals.iter().enumerate() {
            assert!(validate_actual(
                &t.announcement.announced()[id],
                t.announcement.delta(),
                actual
            ));
        }

        let cert = four_thirds_certificate(&t).unwrap();
        assert_eq!(cert.bins, 3);
        assert!(cert.exact);
        assert_eq!(cert.bins, opt_pairing(&t.actuals).unwrap().bins);
        // Next-Fit stacks every other item, ending at 4n/3 = 4 bins.
        assert_eq!(t.bins_used(), 4);
    }

    /// Algorithm that never stacks anything.
    struct AlwaysNewBin;

    impl OnlineAlgorithm for AlwaysNewBin {
        fn name(&self) -> &'static str {
            "alwaysnew"
        }
        fn plan(&mut self, _: &Announcement) {}
        fn place(&mut self, state: &PackingState, _: &Item) -> Result<usize> {
            Ok(state.fresh_index())
        }
    }

    #[test]
    fn no_stacking_means_all_halves_tail() {
        let mut adv = FourThirdsAdversary::new(3, rat(1, 100)).unwrap();
        let t = run_adaptive_game(&mut AlwaysNewBin, &mut adv).unwrap();
        assert_eq!(t.counters["ft.t"], 0);
        // Tail items are exactly 1/2.
        for actual in &t.actuals[4..] {
            assert_eq!(actual, &rat(1, 2));
        }
        let cert = four_thirds_certificate(&t).unwrap();
        assert_eq!(cert.bins, 3);
        assert_eq!(t.bins_used(), 6);
    }

    #[test]
    fn forcing_size_fits_only_stacked_items() {
        let mut adv = FourThirdsAdversary::new(6, rat(1, 100)).unwrap();
        let t = run_adaptive_game(&mut crate::algorithms::BestFit::new(), &mut adv).unwrap();
        let phase1 = 8;
        let flags = t.stacked_flags();
        let half = rat(1, 2);
        let forcing: Vec<&Rational> = t.actuals[phase1..]
            .iter()
            .filter(|a| **a > half)
            .collect();
        assert!(!forcing.is_empty());
        for s in forcing {
            for (actual, stacked) in t.actuals[..phase1].iter().zip(&flags) {
                let sum = s + actual;
                if *stacked {
                    assert!(sum <= Rational::one());
                } else {
                    assert!(sum > Rational::one());
                }
            }
        }
    }
}
