//! Property tests for the protocol invariants: conservation, replay
//! determinism, plan feasibility under worst-case bands, class purity and
//! the baseline bin bounds.

use proptest::prelude::*;

use binestim::algorithms::{algorithm_by_name, classify_harmonic, ALGORITHM_NAMES};
use binestim::core::{run_game, Announcement, Transcript};
use binestim::oracle::{opt_exact, size_lower_bound};
use binestim::rational::rat;
use binestim::Rational;

/// Announced sizes on a 1/100 grid, accuracies on a 1/50 grid, actuals
/// anywhere in the closed band (endpoints included via t in 0..=64).
fn instance_strategy(
    max_n: usize,
) -> impl Strategy<Value = (Rational, Vec<Rational>, Vec<Rational>)> {
    let item = (1u32..=100, 0u32..=64);
    (1u32..=50, prop::collection::vec(item, 0..max_n)).prop_map(|(d, raw)| {
        let delta = Rational::new(d as i64, 50);
        let mut announced = Vec::with_capacity(raw.len());
        let mut actuals = Vec::with_capacity(raw.len());
        for (c, t) in raw {
            let a = Rational::new(c as i64, 100);
            let lo = &a * &(Rational::one() - &delta);
            let hi = (&a * &(Rational::one() + &delta)).min(Rational::one());
            let actual = &lo + &((&hi - &lo) * Rational::new(t as i64, 64));
            announced.push(a);
            actuals.push(actual);
        }
        (delta, announced, actuals)
    })
}

fn run(name: &str, delta: Rational, announced: Vec<Rational>, actuals: &[Rational]) -> Transcript {
    let announcement = Announcement::new(delta, announced).expect("valid announcement");
    let mut alg = algorithm_by_name(name).expect("registered");
    run_game(alg.as_mut(), &announcement, actuals).expect("legal game")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Every algorithm produces a feasible packing that conserves volume,
    /// replays to the same state, and survives a JSON roundtrip. In
    /// particular Planned-Harmonic never hits a plan violation while the
    /// actuals respect their bands.
    #[test]
    fn games_are_feasible_conserving_and_replayable(
        (delta, announced, actuals) in instance_strategy(24),
        alg_index in 0..ALGORITHM_NAMES.len(),
    ) {
        let name = ALGORITHM_NAMES[alg_index];
        let t = run(name, delta, announced, &actuals);

        let total = actuals.iter().fold(Rational::zero(), |acc, s| acc + s);
        prop_assert_eq!(t.final_state.total_load(), total);
        for bin in t.final_state.bins() {
            prop_assert!(bin.load() <= &Rational::one());
            prop_assert!(!bin.is_empty());
        }
        let mut seen = vec![false; actuals.len()];
        for bin in t.final_state.bins() {
            for &id in bin.items() {
                prop_assert!(!seen[id], "item {} appears twice", id);
                seen[id] = true;
            }
        }
        prop_assert!(seen.iter().all(|s| *s), "an item was dropped");

        prop_assert_eq!(t.replay().expect("replays"), t.final_state.clone());
        prop_assert_eq!(Transcript::from_json(&t.to_json()).expect("parses"), t);
    }

    /// Harmonic₄ never mixes classes and closes class-2/3 bins at exactly
    /// k items, with at most one open bin per class.
    #[test]
    fn harmonic_class_purity((delta, announced, actuals) in instance_strategy(40)) {
        let t = run("harmonic4", delta, announced, &actuals);
        let mut short_bins = [0usize; 5];
        for bin in t.final_state.bins() {
            let classes: Vec<usize> = bin
                .items()
                .iter()
                .map(|&id| classify_harmonic(&actuals[id]).index())
                .collect();
            prop_assert!(classes.windows(2).all(|w| w[0] == w[1]), "mixed bin");
            let k = classes[0];
            if k == 2 || k == 3 {
                prop_assert!(bin.len() <= k);
                if bin.len() < k {
                    short_bins[k] += 1;
                }
            }
        }
        prop_assert!(short_bins[2] <= 1, "two open class-2 bins");
        prop_assert!(short_bins[3] <= 1, "two open class-3 bins");
    }

    /// Next-Fit stays within twice the volume bound plus one bin.
    #[test]
    fn next_fit_volume_bound((delta, announced, actuals) in instance_strategy(40)) {
        let t = run("nextfit", delta, announced, &actuals);
        let bound = 2 * size_lower_bound(&actuals) + 1;
        prop_assert!(t.bins_used() <= bound, "{} bins > {}", t.bins_used(), bound);
    }

    /// The volume bound never exceeds the exact optimum, and the optimum
    /// never exceeds what any online algorithm used.
    #[test]
    fn lower_bound_sandwich((delta, announced, actuals) in instance_strategy(10)) {
        // The oracles require strictly positive sizes; the protocol itself
        // tolerates the zero-size items possible at delta = 1.
        prop_assume!(actuals.iter().all(|a| a.is_positive()));
        let opt = opt_exact(&actuals).expect("solvable");
        prop_assert!(size_lower_bound(&actuals) <= opt.bins);
        for name in ALGORITHM_NAMES {
            let t = run(name, delta.clone(), announced.clone(), &actuals);
            prop_assert!(
                t.bins_used() >= opt.bins,
                "{} beat the optimum: {} < {}",
                name,
                t.bins_used(),
                opt.bins
            );
        }
    }

    /// Announced sizes at the band edge stress the planner: the companion
    /// and designated budgets must absorb any in-band reveal.
    #[test]
    fn ph_plan_feasible_at_band_edges(
        raw in prop::collection::vec((40u32..=100, prop_oneof![Just(0u32), Just(64u32)]), 1..20),
    ) {
        let delta = rat(1, 35);
        let mut announced = Vec::new();
        let mut actuals = Vec::new();
        for (c, edge) in raw {
            let a = Rational::new(c as i64, 100);
            let lo = &a * &(Rational::one() - &delta);
            let hi = (&a * &(Rational::one() + &delta)).min(Rational::one());
            announced.push(a);
            actuals.push(if edge == 0 { lo } else { hi });
        }
        // run() already asserts the game is legal (no plan violation).
        run("ph", delta, announced, &actuals);
    }
}

/// Worked instance from the documentation: Best-Fit on [3/5, 2/5, 1/2].
#[test]
fn best_fit_worked_example() {
    let sizes = vec![rat(3, 5), rat(2, 5), rat(1, 2)];
    let t = run("bestfit", Rational::one(), sizes.clone(), &sizes);
    assert_eq!(t.bins_used(), 2);
}
