//! The three-phase forcing construction for coarse estimates
//! (deviation above 41/43).
//!
//! All `3n` items are announced at 43/168. Phase 1 presents sizes `1/7 + e`,
//! phase 2 `1/3 + e`, phase 3 `1/2 + e`; whenever the algorithm has already
//! used too many bins, the remaining items are instead presented at the
//! band's lower edge (below 1/84) so that a very dense packing exists. Each
//! branch comes with an explicit optimal packing.

use std::collections::{BTreeMap, HashSet};

use super::CertifiedAdversary;
use crate::core::{AdaptiveAdversary, Announcement, Item, PackingState, Transcript};
use crate::oracle::OptResult;
use crate::rational::rat;
use crate::{Error, Rational, Result};

/// `3n` announcements of exactly 43/168 with the given accuracy.
pub fn yao_announce(n: usize, delta: &Rational) -> Result<Announcement> {
    check_params(n, delta)?;
    Announcement::new(delta.clone(), vec![rat(43, 168); 3 * n])
}

fn check_params(n: usize, delta: &Rational) -> Result<()> {
    if n == 0 || !n.is_multiple_of(12) {
        return Err(Error::BadParameter(format!(
            "yao4143 needs a positive n divisible by 12, got {n}"
        )));
    }
    if *delta <= rat(41, 43) || *delta > Rational::one() {
        return Err(Error::BadParameter(format!(
            "yao4143 needs delta in (41/43, 1], got {delta}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Branch {
    Phase1,
    TinyAfter1,
    Phase2,
    TinyAfter2,
    Full,
}

#[derive(Debug)]
pub struct YaoAdversary {
    n: usize,
    announcement: Announcement,
    /// Shared phase offset, chosen so every phase size sits in the band and
    /// every branch certificate stays feasible.
    epsilon: Rational,
    /// Band lower edge `43/168 (1 - delta)`, below 1/84; the tiny-tail size.
    tiny: Rational,
    emitted: usize,
    branch: Branch,
    bins_seen: usize,
    bins_with_mid: HashSet<usize>,
}

impl YaoAdversary {
    pub fn new(n: usize, delta: Rational) -> Result<Self> {
        check_params(n, &delta)?;
        let announcement = yao_announce(n, &delta)?;
        let one = Rational::one();
        let announced = rat(43, 168);
        let tiny = &announced * &(&one - &delta);
        let hi = (&announced * &(&one + &delta)).min(one.clone());

        // Half the tightest slack: the band above 1/2, the 18-item and the
        // 6-item tail bins, and the one-of-each full bin.
        let slacks = [
            &hi - &rat(1, 2),
            (rat(1, 7) - Rational::from_int(12) * &tiny) / Rational::from_int(6),
            (rat(1, 21) - Rational::from_int(2) * &tiny) / Rational::from_int(4),
            rat(1, 126),
        ];
        let epsilon = slacks
            .iter()
            .cloned()
            .reduce(Rational::min)
            .expect("non-empty")
            / Rational::from_int(2);
        if !epsilon.is_positive() {
            return Err(Error::BadParameter(format!(
                "no admissible phase offset for delta {delta}"
            )));
        }

        Ok(YaoAdversary {
            n,
            announcement,
            epsilon,
            tiny,
            emitted: 0,
            branch: Branch::Phase1,
            bins_seen: 0,
            bins_with_mid: HashSet::new(),
        })
    }

    pub fn epsilon(&self) -> &Rational {
        &self.epsilon
    }
}

impl AdaptiveAdversary for YaoAdversary {
    fn name(&self) -> &'static str {
        "yao4143"
    }

    fn announcement(&self) -> Announcement {
        self.announcement.clone()
    }

    fn next_actual(&mut self) -> Result<Option<Rational>> {
        let id = self.emitted;
        if id >= 3 * self.n {
            return Ok(None);
        }
        if id == self.n && self.branch == Branch::Phase1 {
            self.branch = if self.bins_seen > self.n / 4 {
                Branch::TinyAfter1
            } else {
                Branch::Phase2
            };
        }
        if id == 2 * self.n && self.branch == Branch::Phase2 {
            self.branch = if self.bins_with_mid.len() > 3 * self.n / 4 {
                Branch::TinyAfter2
            } else {
                Branch::Full
            };
        }
        let size = if id < self.n {
            rat(1, 7) + &self.epsilon
        } else {
            match self.branch {
                Branch::TinyAfter1 => self.tiny.clone(),
                _ if id < 2 * self.n => rat(1, 3) + &self.epsilon,
                Branch::TinyAfter2 => self.tiny.clone(),
                _ => rat(1, 2) + &self.epsilon,
            }
        };
        self.emitted += 1;
        Ok(Some(size))
    }

    fn observe(&mut self, item: &Item, bin_index: usize, state: &PackingState) {
        self.bins_seen = state.num_bins();
        if item.id >= self.n && item.id < 2 * self.n && self.branch == Branch::Phase2 {
            self.bins_with_mid.insert(bin_index);
        }
    }

    fn counters(&self) -> BTreeMap<String, i64> {
        let branch = match self.branch {
            Branch::Phase1 | Branch::Phase2 | Branch::Full => 0,
            Branch::TinyAfter1 => 1,
            Branch::TinyAfter2 => 2,
        };
        BTreeMap::from([
            ("yao.branch".to_string(), branch),
            ("yao.n".to_string(), self.n as i64),
        ])
    }
}

impl CertifiedAdversary for YaoAdversary {
    fn certificate(&self, transcript: &Transcript) -> Result<OptResult> {
        yao_certificate(transcript)
    }
}

/// Builds and verifies the branch-appropriate optimal packing of a finished
/// game, recovering the branch from the recorded sizes alone.
pub fn yao_certificate(transcript: &Transcript) -> Result<OptResult> {
    let total = transcript.announcement.n();
    if transcript.actuals.len() != total || !total.is_multiple_of(3) {
        return Err(Error::CertificateInfeasible(
            "certificate requires a finished game".into(),
        ));
    }
    let n = total / 3;
    let sizes = &transcript.actuals;
    let tiny_limit = rat(1, 84);
    let is_tiny = |s: &Rational| *s < tiny_limit;

    let (bins, certificate) = if is_tiny(&sizes[n]) {
        // Everything after phase 1 is tiny: n/6 bins of 6 phase-1 items plus
        // 12 tiny items each. Optimal because no bin holds 7 phase-1 items.
        if !(Rational::from_int(7) * &sizes[0] > Rational::one()) {
            return Err(Error::CertificateInfeasible(
                "phase-1 items too small for the 6-per-bin bound".into(),
            ));
        }
        let mut cert: Vec<Vec<usize>> = Vec::with_capacity(n / 6);
        for b in 0..n / 6 {
            let mut bin: Vec<usize> = (6 * b..6 * b + 6).collect();
            bin.extend(n + 12 * b..n + 12 * b + 12);
            cert.push(bin);
        }
        (n / 6, cert)
    } else if is_tiny(&sizes[2 * n]) {
        // Tail tiny after phase 2: n/2 bins of two items per class. Optimal
        // because no bin holds three phase-2 items.
        if !(Rational::from_int(3) * &sizes[n] > Rational::one()) {
            return Err(Error::CertificateInfeasible(
                "phase-2 items too small for the 2-per-bin bound".into(),
            ));
        }
        let mut cert: Vec<Vec<usize>> = Vec::with_capacity(n / 2);
        for b in 0..n / 2 {
            cert.push(vec![
                2 * b,
                2 * b + 1,
                n + 2 * b,
                n + 2 * b + 1,
                2 * n + 2 * b,
                2 * n + 2 * b + 1,
            ]);
        }
        (n / 2, cert)
    } else {
        // Full run: one item of each class per bin. Optimal because the
        // phase-3 items are larger than 1/2.
        if !(sizes[2 * n] > rat(1, 2)) {
            return Err(Error::CertificateInfeasible(
                "phase-3 items not above 1/2".into(),
            ));
        }
        let cert: Vec<Vec<usize>> = (0..n).map(|b| vec![b, n + b, 2 * n + b]).collect();
        (n, cert)
    };

    let result = OptResult {
        bins,
        certificate,
        exact: true,
    };
    result.verify(sizes)?;
    Ok(result)
}
