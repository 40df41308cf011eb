//! Exact minimum bin count by branch and bound.

use std::collections::HashSet;

use super::OptResult;
use crate::{Error, Rational, Result};

/// Default item limit; beyond it the solver refuses instead of hanging.
pub const DEFAULT_EXACT_LIMIT: usize = 20;

/// Exact optimum with the default limit.
pub fn opt_exact(sizes: &[Rational]) -> Result<OptResult> {
    opt_exact_with_limit(sizes, DEFAULT_EXACT_LIMIT)
}

/// Branch and bound over items in descending size order. Prunes with the
/// size lower bound and the count of items above 1/2, deduplicates branches
/// into equal-load bins, and seeds the incumbent with first-fit-decreasing.
pub fn opt_exact_with_limit(sizes: &[Rational], limit: usize) -> Result<OptResult> {
    if sizes.len() > limit {
        return Err(Error::InstanceTooLarge {
            n: sizes.len(),
            limit,
        });
    }
    for (i, s) in sizes.iter().enumerate() {
        if !s.is_positive() || *s > Rational::one() {
            return Err(Error::BadParameter(format!(
                "size {s} of item {i} not in (0,1]"
            )));
        }
    }
    if sizes.is_empty() {
        return Ok(OptResult {
            bins: 0,
            certificate: vec![],
            exact: true,
        });
    }

    let mut order: Vec<usize> = (0..sizes.len()).collect();
    order.sort_by(|&a, &b| sizes[b].cmp(&sizes[a]).then(a.cmp(&b)));
    let sorted: Vec<Rational> = order.iter().map(|&i| sizes[i].clone()).collect();

    // Suffix sums and suffix counts of items larger than 1/2 for the bounds.
    let n = sorted.len();
    let half = Rational::new(1, 2);
    let mut suffix_sum = vec![Rational::zero(); n + 1];
    let mut suffix_large = vec![0usize; n + 1];
    for i in (0..n).rev() {
        suffix_sum[i] = &suffix_sum[i + 1] + &sorted[i];
        suffix_large[i] = suffix_large[i + 1] + usize::from(sorted[i] > half);
    }

    let mut search = Search {
        sizes: &sorted,
        suffix_sum: &suffix_sum,
        suffix_large: &suffix_large,
        half,
        best: first_fit_decreasing(&sorted),
        loads: Vec::new(),
        assignment: vec![usize::MAX; n],
    };
    search.descend(0);

    let (bins, assignment) = search.best;
    let mut certificate = vec![Vec::new(); bins];
    for (pos, &bin) in assignment.iter().enumerate() {
        certificate[bin].push(order[pos]);
    }
    for bin in &mut certificate {
        bin.sort_unstable();
    }
    let result = OptResult {
        bins,
        certificate,
        exact: true,
    };
    result.verify(sizes)?;
    Ok(result)
}

fn first_fit_decreasing(sorted: &[Rational]) -> (usize, Vec<usize>) {
    let mut loads: Vec<Rational> = Vec::new();
    let mut assignment = Vec::with_capacity(sorted.len());
    for s in sorted {
        match loads
            .iter()
            .position(|load| load + s <= Rational::one())
        {
            Some(i) => {
                loads[i] = &loads[i] + s;
                assignment.push(i);
            }
            None => {
                loads.push(s.clone());
                assignment.push(loads.len() - 1);
            }
        }
    }
    (loads.len(), assignment)
}

struct Search<'a> {
    sizes: &'a [Rational],
    suffix_sum: &'a [Rational],
    suffix_large: &'a [usize],
    half: Rational,
    best: (usize, Vec<usize>),
    loads: Vec<Rational>,
    assignment: Vec<usize>,
}

impl Search<'_> {
    fn lower_bound(&self, next: usize) -> usize {
        // Remaining volume can at best top up the open bins to 1 each.
        let free = self
            .loads
            .iter()
            .fold(Rational::zero(), |acc, l| acc + &(Rational::one() - l));
        let volume = if self.suffix_sum[next] > free {
            (&self.suffix_sum[next] - &free).ceil_usize()
        } else {
            0
        };
        // Each remaining large item needs a bin that is at most half full.
        let slots = self
            .loads
            .iter()
            .filter(|l| **l < self.half)
            .count();
        let large = self.suffix_large[next].saturating_sub(slots);
        self.loads.len() + volume.max(large)
    }

    fn descend(&mut self, next: usize) {
        if next == self.sizes.len() {
            if self.loads.len() < self.best.0 {
                self.best = (self.loads.len(), self.assignment.clone());
            }
            return;
        }
        if self.lower_bound(next) >= self.best.0 {
            return;
        }
        let size = self.sizes[next].clone();
        // Equal-load bins are interchangeable; try one per distinct load.
        let mut tried: HashSet<Rational> = HashSet::new();
        for i in 0..self.loads.len() {
            let load = self.loads[i].clone();
            if &load + &size > Rational::one() || !tried.insert(load.clone()) {
                continue;
            }
            self.loads[i] = &load + &size;
            self.assignment[next] = i;
            self.descend(next + 1);
            self.loads[i] = load;
        }
        // New bin; +1 because the fresh bin itself must stay under the bound.
        if self.loads.len() + 1 < self.best.0 {
            self.loads.push(size);
            self.assignment[next] = self.loads.len() - 1;
            self.descend(next + 1);
            self.loads.pop();
        }
    }
}
