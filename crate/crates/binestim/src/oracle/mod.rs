//! Ground truth: exact optima for small instances, a pairing-based exact
//! optimum for the at-most-two-per-bin regime, size lower bounds, and the
//! weight-function analysis utilities.

mod exact;
mod pairing;
mod weights;

pub use exact::{opt_exact, opt_exact_with_limit, DEFAULT_EXACT_LIMIT};
pub use pairing::{opt_pairing, two_per_bin_precondition};
pub use weights::{max_bin_weight_check, size_lower_bound, total_weight, weight};

use serde::{Deserialize, Serialize};

use crate::{Error, Rational, Result};

/// The outcome of an optimality oracle: a bin count together with an explicit
/// assignment certifying it. `exact` distinguishes true optima from bounds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptResult {
    pub bins: usize,
    /// Bin -> item ids. Feasible and using exactly `bins` bins when `exact`.
    pub certificate: Vec<Vec<usize>>,
    pub exact: bool,
}

impl OptResult {
    /// Exact feasibility check of the certificate against the sizes it
    /// claims to pack: loads at most 1, every item exactly once, bin count
    /// matching.
    pub fn verify(&self, sizes: &[Rational]) -> Result<()> {
        if self.certificate.len() != self.bins {
            return Err(Error::CertificateInfeasible(format!(
                "{} bins claimed, {} in certificate",
                self.bins,
                self.certificate.len()
            )));
        }
        let mut seen = vec![false; sizes.len()];
        for (b, bin) in self.certificate.iter().enumerate() {
            if bin.is_empty() {
                return Err(Error::CertificateInfeasible(format!("bin {b} is empty")));
            }
            let mut load = Rational::zero();
            for &id in bin {
                if id >= sizes.len() || seen[id] {
                    return Err(Error::CertificateInfeasible(format!(
                        "item {id} missing or duplicated"
                    )));
                }
                seen[id] = true;
                load = load + &sizes[id];
            }
            if load > Rational::one() {
                return Err(Error::CertificateInfeasible(format!(
                    "bin {b} overfull at {load}"
                )));
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::CertificateInfeasible("items dropped".into()));
        }
        Ok(())
    }
}

/// True iff `alg_bins <= c * opt.bins + k`, compared exactly. With a
/// lower-bound `opt` the check is conservative: `true` is trustworthy, a
/// failure proves nothing.
pub fn competitive_point(alg_bins: usize, opt: &OptResult, c: &Rational, k: &Rational) -> bool {
    Rational::from(alg_bins) <= c * &Rational::from(opt.bins) + k
}
