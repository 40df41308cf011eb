//! Exact optimum for instances where no bin can hold three items:
//! `OPT = n - (maximum number of disjoint pairs with size sum at most 1)`,
//! found by the ascending two-pointer sweep.

use super::OptResult;
use crate::{Error, Rational, Result};

/// Checks that no three items can share a bin: either every size is larger
/// than 1/3, or the three smallest sizes already sum above 1.
pub fn two_per_bin_precondition(sizes: &[Rational]) -> bool {
    if sizes.len() < 3 {
        return true;
    }
    let third = Rational::new(1, 3);
    if sizes.iter().all(|s| *s > third) {
        return true;
    }
    let mut sorted: Vec<&Rational> = sizes.iter().collect();
    sorted.sort();
    sorted[0] + sorted[1] + sorted[2] > Rational::one()
}

/// Maximum-pairing optimum. The sweep pairs the lightest remaining item with
/// the heaviest one it still fits next to; its optimality for this threshold
/// compatibility structure is validated against [`super::opt_exact`] by the
/// oracle-equivalence suite rather than assumed.
pub fn opt_pairing(sizes: &[Rational]) -> Result<OptResult> {
    if !two_per_bin_precondition(sizes) {
        return Err(Error::PreconditionViolated(
            "three items could share a bin".into(),
        ));
    }
    for (i, s) in sizes.iter().enumerate() {
        if !s.is_positive() || *s > Rational::one() {
            return Err(Error::BadParameter(format!(
                "size {s} of item {i} not in (0,1]"
            )));
        }
    }

    let mut order: Vec<usize> = (0..sizes.len()).collect();
    order.sort_by(|&a, &b| sizes[a].cmp(&sizes[b]).then(a.cmp(&b)));

    let mut certificate: Vec<Vec<usize>> = Vec::new();
    let mut lo = 0;
    let mut hi = order.len();
    while lo < hi {
        if hi - lo >= 2 && &sizes[order[lo]] + &sizes[order[hi - 1]] <= Rational::one() {
            certificate.push(vec![order[lo], order[hi - 1]]);
            lo += 1;
            hi -= 1;
        } else {
            certificate.push(vec![order[hi - 1]]);
            hi -= 1;
        }
    }
    for bin in &mut certificate {
        bin.sort_unstable();
    }
    certificate.sort();

    let result = OptResult {
        bins: certificate.len(),
        certificate,
        exact: true,
    };
    result.verify(sizes)?;
    Ok(result)
}
