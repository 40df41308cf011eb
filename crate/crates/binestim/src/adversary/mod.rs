//! Adaptive adversaries realizing the lower-bound constructions, each paired
//! with a certificate generator proving the optimum of the induced instance.

mod four_thirds;
mod yao;

pub use four_thirds::{
    four_thirds_announce, four_thirds_certificate, verify_stacked_minimality, FourThirdsAdversary,
};
pub use yao::{yao_announce, yao_certificate, YaoAdversary};

use crate::core::{AdaptiveAdversary, Transcript};
use crate::oracle::OptResult;
use crate::{Error, Rational, Result};

/// An adaptive adversary that can also certify the optimum of the instance
/// it induced. Certificates are verified feasible before use.
pub trait CertifiedAdversary: AdaptiveAdversary {
    fn certificate(&self, transcript: &Transcript) -> Result<OptResult>;
}

/// Names accepted by [`adversary_by_name`].
pub const ADVERSARY_NAMES: &[&str] = &["fourthirds", "yao4143"];

/// Builds a fresh adversary by registry name.
pub fn adversary_by_name(
    name: &str,
    n: usize,
    delta: &Rational,
) -> Result<Box<dyn CertifiedAdversary>> {
    match name {
        "fourthirds" => Ok(Box::new(FourThirdsAdversary::new(n, delta.clone())?)),
        "yao4143" => Ok(Box::new(YaoAdversary::new(n, delta.clone())?)),
        _ => Err(Error::BadParameter(format!("unknown adversary {name:?}"))),
    }
}
