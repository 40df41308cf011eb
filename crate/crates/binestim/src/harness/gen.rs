//! Seeded instance generators. The seed fully determines the instance.

use std::fmt;
use std::str::FromStr;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::core::{band, Announcement, Instance};
use crate::rational::rat;
use crate::{Error, Rational, Result};

/// Announced-size profile of the generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    /// Estimates uniform on (0,1].
    Uniform,
    /// Every estimate exactly 1/2.
    Halves,
    /// One third of the mass in each of (0,1/4], (1/3,1/2] and (1/2,1].
    Mixed,
    /// Estimates large enough that every actual exceeds 1/3, so no three
    /// items ever share a bin.
    TwoBin,
}

impl Profile {
    pub const ALL: &'static [Profile] = &[
        Profile::Uniform,
        Profile::Halves,
        Profile::Mixed,
        Profile::TwoBin,
    ];
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Profile::Uniform => "uniform",
            Profile::Halves => "halves",
            Profile::Mixed => "mixed",
            Profile::TwoBin => "twobin",
        };
        f.write_str(name)
    }
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Profile::Uniform),
            "halves" => Ok(Profile::Halves),
            "mixed" => Ok(Profile::Mixed),
            "twobin" => Ok(Profile::TwoBin),
            other => Err(Error::BadParameter(format!("unknown profile {other:?}"))),
        }
    }
}

/// Uniform grid point in the closed interval [lo, hi].
fn sample_closed(rng: &mut ChaCha8Rng, lo: &Rational, hi: &Rational) -> Rational {
    let k = rng.next_u32() as i64;
    let u = Rational::new(k, u32::MAX as i64);
    lo + &((hi - lo) * u)
}

/// Uniform grid point in the half-open interval (lo, hi].
fn sample_half_open(rng: &mut ChaCha8Rng, lo: &Rational, hi: &Rational) -> Rational {
    let k = rng.next_u32() as i64;
    let u = Rational::new(k + 1, 1i64 << 32);
    lo + &((hi - lo) * u)
}

/// Generates one instance: announced sizes per profile, actual sizes drawn
/// inside the band - uniformly, or snapped to a band endpoint when
/// `adversarial_rounding` is set.
pub fn gen_instance(
    profile: Profile,
    n: usize,
    delta: &Rational,
    seed: u64,
    adversarial_rounding: bool,
) -> Result<Instance> {
    if !delta.is_positive() || *delta > Rational::one() {
        return Err(Error::BadParameter(format!("delta {delta} not in (0,1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let one = Rational::one();
    let zero = Rational::zero();

    let mut announced = Vec::with_capacity(n);
    for _ in 0..n {
        let size = match profile {
            Profile::Uniform => sample_half_open(&mut rng, &zero, &one),
            Profile::Halves => rat(1, 2),
            Profile::Mixed => match rng.next_u32() % 3 {
                0 => sample_half_open(&mut rng, &zero, &rat(1, 4)),
                1 => sample_half_open(&mut rng, &rat(1, 3), &rat(1, 2)),
                _ => sample_half_open(&mut rng, &rat(1, 2), &one),
            },
            Profile::TwoBin => {
                let floor = &one / &(Rational::from_int(3) * (&one - delta));
                if floor >= one {
                    return Err(Error::BadParameter(format!(
                        "no announced range guarantees two-per-bin at delta {delta}"
                    )));
                }
                sample_half_open(&mut rng, &floor, &one)
            }
        };
        announced.push(size);
    }

    let mut actuals = Vec::with_capacity(n);
    for a in &announced {
        let (lo, hi) = band(a, delta);
        let mut actual = if adversarial_rounding {
            if rng.next_u32() % 2 == 0 {
                lo
            } else {
                hi.clone()
            }
        } else {
            sample_closed(&mut rng, &lo, &hi)
        };
        // At delta = 1 the band floor is 0; clamp back into (0,1].
        if actual.is_zero() {
            actual = &hi / &Rational::from_int(1000);
        }
        actuals.push(actual);
    }

    Instance::new(Announcement::new(delta.clone(), announced)?, actuals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::validate_actual;
    use crate::oracle::two_per_bin_precondition;

    #[test]
    fn same_seed_same_instance() {
        let a = gen_instance(Profile::Uniform, 30, &rat(1, 10), 42, false).unwrap();
        let b = gen_instance(Profile::Uniform, 30, &rat(1, 10), 42, false).unwrap();
        assert_eq!(a, b);
        let c = gen_instance(Profile::Uniform, 30, &rat(1, 10), 43, false).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn halves_actuals_stay_in_band() {
        let inst = gen_instance(Profile::Halves, 50, &rat(1, 35), 7, false).unwrap();
        let (lo, hi) = (rat(17, 35), rat(18, 35));
        for actual in inst.actuals().unwrap() {
            assert!(*actual >= lo && *actual <= hi);
        }
    }

    #[test]
    fn generated_actuals_always_validate() {
        for profile in [Profile::Uniform, Profile::Mixed, Profile::TwoBin] {
            for seed in 0..20 {
                let inst = gen_instance(profile, 25, &rat(1, 5), seed, seed % 2 == 0).unwrap();
                for (i, actual) in inst.actuals().unwrap().iter().enumerate() {
                    assert!(
                        validate_actual(
                            &inst.announcement.announced()[i],
                            inst.announcement.delta(),
                            actual
                        ),
                        "profile {profile} seed {seed} item {i}"
                    );
                }
            }
        }
    }

    #[test]
    fn twobin_instances_satisfy_the_pairing_precondition() {
        let third = rat(1, 3);
        for seed in 0..20 {
            let inst = gen_instance(Profile::TwoBin, 40, &rat(1, 35), seed, false).unwrap();
            let actuals = inst.actuals().unwrap();
            assert!(actuals.iter().all(|a| *a > third));
            assert!(two_per_bin_precondition(actuals));
        }
    }

    #[test]
    fn twobin_rejects_huge_delta() {
        assert!(gen_instance(Profile::TwoBin, 5, &rat(3, 4), 1, false).is_err());
    }

    #[test]
    fn empty_instance_is_fine() {
        let inst = gen_instance(Profile::TwoBin, 0, &rat(1, 35), 1, false).unwrap();
        assert_eq!(inst.announcement.n(), 0);
    }

    #[test]
    fn adversarial_rounding_snaps_to_endpoints() {
        let inst = gen_instance(Profile::Halves, 40, &rat(1, 35), 3, true).unwrap();
        let (lo, hi) = (rat(17, 35), rat(18, 35));
        for actual in inst.actuals().unwrap() {
            assert!(*actual == lo || *actual == hi);
        }
    }
}
