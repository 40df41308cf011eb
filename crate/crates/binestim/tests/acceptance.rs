//! Acceptance suite: end-to-end checks of every performance and structure
//! guarantee this crate makes, each with its stated tolerance and runtime
//! budget pinned in code. Run with `--nocapture` to see one line per
//! criterion.

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use binestim::adversary::verify_stacked_minimality;
use binestim::algorithms::{
    algorithm_by_name, analyze_ph_run, classify_dbf_bins, special_item_ids, BinTypeCounts,
    PlannedHarmonic, ALGORITHM_NAMES,
};
use binestim::core::{run_game, validate_actual, Transcript};
use binestim::harness::{
    emit, gen_instance, run_duel, run_experiment, ExperimentConfig, OptMode, Profile,
    ReportFormat, Source,
};
use binestim::oracle::{
    competitive_point, max_bin_weight_check, opt_exact, opt_pairing, size_lower_bound, weight,
    OptResult,
};
use binestim::rational::rat;
use binestim::Rational;

const SEED: u64 = 0xB1E57;

// ---------------------------------------------------------------------------
// Shared fixtures, computed once and reused across criteria.
// ---------------------------------------------------------------------------

struct FourThirdsDuels {
    /// (algorithm, n, bins used, certificate, transcript)
    runs: Vec<(String, usize, usize, OptResult, Transcript)>,
    elapsed: Duration,
}

fn four_thirds_duels() -> &'static FourThirdsDuels {
    static DUELS: OnceLock<FourThirdsDuels> = OnceLock::new();
    DUELS.get_or_init(|| {
        let start = Instant::now();
        let delta = rat(1, 100);
        let mut runs = Vec::new();
        for alg in ALGORITHM_NAMES {
            for n in [3usize, 6, 9, 12, 150] {
                let (row, transcript) =
                    run_duel(alg, "fourthirds", n, &delta, &rat(2, 1), &rat(1, 1))
                        .expect("duel runs");
                let cert = OptResult {
                    bins: row.opt_bins,
                    certificate: vec![],
                    exact: row.opt_exact,
                };
                runs.push((alg.to_string(), n, row.alg_bins, cert, transcript));
            }
        }
        FourThirdsDuels {
            runs,
            elapsed: start.elapsed(),
        }
    })
}

struct PhRun {
    profile: Profile,
    transcript: Transcript,
    /// Exact optimum for the small instances, size lower bound for n = 200.
    opt: OptResult,
}

struct PhFixture {
    small: Vec<PhRun>,
    large: Vec<PhRun>,
    elapsed: Duration,
}

fn ph_fixture() -> &'static PhFixture {
    static RUNS: OnceLock<PhFixture> = OnceLock::new();
    RUNS.get_or_init(|| {
        let start = Instant::now();
        let delta = rat(1, 35);
        let profiles = [Profile::Uniform, Profile::Halves, Profile::Mixed];
        let mut small = Vec::new();
        for (p, profile) in profiles.iter().enumerate() {
            for t in 0..500usize {
                let n = 2 + (t * 3) % 17; // cycles through 2..=18
                let seed = SEED.wrapping_add((p * 10_000 + t) as u64);
                let instance = gen_instance(*profile, n, &delta, seed, false).expect("gen");
                let actuals = instance.actuals().expect("actuals").to_vec();
                let mut alg = PlannedHarmonic::new();
                let transcript =
                    run_game(&mut alg, &instance.announcement, &actuals).expect("ph runs");
                let opt = opt_exact(&actuals).expect("exact opt");
                small.push(PhRun {
                    profile: *profile,
                    transcript,
                    opt,
                });
            }
        }
        let mut large = Vec::new();
        for (p, profile) in profiles.iter().enumerate() {
            for t in 0..100usize {
                let seed = SEED.wrapping_add((60_000 + p * 10_000 + t) as u64);
                let instance = gen_instance(*profile, 200, &delta, seed, false).expect("gen");
                let actuals = instance.actuals().expect("actuals").to_vec();
                let mut alg = PlannedHarmonic::new();
                let transcript =
                    run_game(&mut alg, &instance.announcement, &actuals).expect("ph runs");
                let opt = OptResult {
                    bins: size_lower_bound(&actuals),
                    certificate: vec![],
                    exact: false,
                };
                large.push(PhRun {
                    profile: *profile,
                    transcript,
                    opt,
                });
            }
        }
        PhFixture {
            small,
            large,
            elapsed: start.elapsed(),
        }
    })
}

struct DbfRun {
    transcript: Transcript,
    opt: OptResult,
    counts: BinTypeCounts,
}

struct DbfFixture {
    runs: Vec<DbfRun>,
    elapsed: Duration,
}

fn dbf_fixture() -> &'static DbfFixture {
    static RUNS: OnceLock<DbfFixture> = OnceLock::new();
    RUNS.get_or_init(|| {
        let start = Instant::now();
        let deltas = [rat(1, 35), rat(1, 10), rat(1, 4)];
        let mut runs = Vec::new();
        for t in 0..1000usize {
            // n sweeps 3..=300 so the tail includes full-size instances.
            let n = 3 + (t * 13) % 298;
            let delta = &deltas[t % deltas.len()];
            let seed = SEED.wrapping_add((100_000 + t) as u64);
            let instance = gen_instance(Profile::TwoBin, n, delta, seed, false).expect("gen");
            let actuals = instance.actuals().expect("actuals").to_vec();
            let mut alg = algorithm_by_name("dbf").expect("registered");
            let transcript =
                run_game(alg.as_mut(), &instance.announcement, &actuals).expect("dbf runs");
            let opt = opt_pairing(&actuals).expect("pairing opt");
            let counts = classify_dbf_bins(&transcript).expect("classifiable");
            runs.push(DbfRun {
                transcript,
                opt,
                counts,
            });
        }
        DbfFixture {
            runs,
            elapsed: start.elapsed(),
        }
    })
}

fn assert_ratio_at_least(alg_bins: usize, opt_bins: usize, bound: &Rational, context: &str) {
    assert!(
        Rational::from(alg_bins) >= bound * &Rational::from(opt_bins),
        "{context}: ratio {alg_bins}/{opt_bins} below {bound}"
    );
}

// ---------------------------------------------------------------------------
// Criteria
// ---------------------------------------------------------------------------

/// Every algorithm forced to ratio >= 4/3 - 0.05 at n = 150; small-n
/// certificates equal the pairing optimum; all duels within 60 s.
#[test]
fn criterion_01_four_thirds_forcing() {
    let duels = four_thirds_duels();
    let bound = rat(4, 3) - rat(1, 20);
    for (alg, n, alg_bins, cert, transcript) in &duels.runs {
        assert!(cert.exact, "{alg} n={n}: certificate not exact");
        assert_eq!(cert.bins, *n, "{alg} n={n}: certificate bins");
        if *n == 150 {
            assert_ratio_at_least(*alg_bins, cert.bins, &bound, &format!("{alg} n={n}"));
        } else {
            let pairing = opt_pairing(&transcript.actuals).expect("two-per-bin instance");
            assert_eq!(cert.bins, pairing.bins, "{alg} n={n}: certificate vs pairing");
        }
    }
    assert!(
        duels.elapsed <= Duration::from_secs(60),
        "duels took {:?}",
        duels.elapsed
    );
    println!(
        "criterion 1 PASS: 4/3 forcing, {} duels, all ratios >= 77/60 at n=150, \
         certificates = pairing opt at n in {{3,6,9,12}} ({:?})",
        duels.runs.len(),
        duels.elapsed
    );
}

/// Every emitted size honest, every stacked item strictly below every
/// laid-out item.
#[test]
fn criterion_02_adversary_honesty_and_ordering() {
    let duels = four_thirds_duels();
    for (alg, n, _, _, transcript) in &duels.runs {
        for (id, actual) in transcript.actuals.iter().enumerate() {
            assert!(
                validate_actual(
                    &transcript.announcement.announced()[id],
                    transcript.announcement.delta(),
                    actual
                ),
                "{alg} n={n}: item {id} off band"
            );
        }
        verify_stacked_minimality(transcript)
            .unwrap_or_else(|e| panic!("{alg} n={n}: {e}"));
    }
    println!(
        "criterion 2 PASS: band honesty and strict stacked/laid-out ordering over {} duels",
        duels.runs.len()
    );
}

/// Planned-Harmonic within 3/2 OPT + 4 on every small instance with exact
/// OPT; conservative check against the size lower bound at n = 200.
#[test]
fn criterion_03_ph_guarantee() {
    let fixture = ph_fixture();
    let c = rat(3, 2);
    let k = Rational::from_int(4);
    for run in &fixture.small {
        assert!(run.opt.exact);
        assert!(
            competitive_point(run.transcript.bins_used(), &run.opt, &c, &k),
            "PH {} bins vs exact opt {} on {} items ({})",
            run.transcript.bins_used(),
            run.opt.bins,
            run.transcript.announcement.n(),
            run.profile
        );
    }

    // With OPT replaced by its size lower bound the check is conservative: a
    // pass certifies the guarantee, a failure proves nothing. No row may be
    // a proven violation; profiles whose lower bound is tight must pass
    // outright.
    let mut unknown_halves = 0usize;
    for run in &fixture.large {
        assert!(!run.opt.exact);
        let ok = competitive_point(run.transcript.bins_used(), &run.opt, &c, &k);
        match run.profile {
            Profile::Halves => {
                if !ok {
                    unknown_halves += 1;
                }
            }
            _ => assert!(
                ok,
                "PH {} bins vs size lower bound {} ({})",
                run.transcript.bins_used(),
                run.opt.bins,
                run.profile
            ),
        }
    }
    assert!(
        fixture.elapsed <= Duration::from_secs(300),
        "PH fixture took {:?}",
        fixture.elapsed
    );
    println!(
        "criterion 3 PASS: PH <= 3/2 opt + 4 on {} exact-opt instances; \
         lower-bound check passed on uniform and mixed at n=200, \
         {unknown_halves}/100 halves rows unprovable from the lower bound alone ({:?})",
        fixture.small.len(),
        fixture.elapsed
    );
}

/// Fill levels in runs where every large item got its companions: each
/// designated bin except possibly the last at 2/3, at most 4 bins below 2/3.
#[test]
fn criterion_04_ph_fill_lemmas() {
    let fixture = ph_fixture();
    let two_thirds = rat(2, 3);
    let mut companioned = 0usize;
    for run in fixture.small.iter().chain(fixture.large.iter()) {
        let analysis = analyze_ph_run(&run.transcript).expect("analyzable");
        if !analysis.all_large_companioned {
            continue;
        }
        companioned += 1;
        let bins = run.transcript.final_state.bins();
        let designated = &analysis.designated_bins;
        for (ord, &bin) in designated
            .iter()
            .enumerate()
            .take(designated.len().saturating_sub(1))
        {
            assert!(
                bins[bin].load() >= &two_thirds,
                "designated bin {ord} at load {} on {} items",
                bins[bin].load(),
                run.transcript.announcement.n()
            );
        }
        assert!(
            analysis.low_fill_bins <= 4,
            "{} bins below 2/3 on {} items",
            analysis.low_fill_bins,
            run.transcript.announcement.n()
        );
    }
    assert!(companioned > 0, "no fully-companioned runs sampled");
    println!(
        "criterion 4 PASS: fill-level lemmas over {companioned} fully-companioned PH runs"
    );
}

/// The weight function: exact values and the 3/2 per-bin bound over 10^5
/// sampled feasible bins.
#[test]
fn criterion_05_weight_bound() {
    assert_eq!(weight(&rat(3, 5)), Rational::one());
    assert_eq!(weight(&rat(2, 5)), rat(1, 2));
    assert_eq!(weight(&rat(3, 10)), rat(1, 3));
    assert_eq!(weight(&rat(1, 5)), Rational::zero());

    use rand::{RngCore, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(SEED);
    let trials = 100_000usize;
    for _ in 0..trials {
        let mut bin: Vec<Rational> = Vec::new();
        let mut load = Rational::zero();
        for _ in 0..8 {
            let s = Rational::new(rng.next_u32() as i64 + 1, 1i64 << 32);
            if &load + &s <= Rational::one() {
                load = &load + &s;
                bin.push(s);
            } else {
                break;
            }
        }
        assert!(max_bin_weight_check(&bin), "weight above 3/2 for {bin:?}");
    }
    println!("criterion 5 PASS: weight values exact, {trials} sampled bins within 3/2");
}

/// Delayed-Best-Fit within 4/3 OPT + 1 on every two-per-bin instance,
/// exact OPT via pairing, within 2 minutes.
#[test]
fn criterion_06_dbf_guarantee() {
    let fixture = dbf_fixture();
    let c = rat(4, 3);
    let k = Rational::one();
    for run in &fixture.runs {
        assert!(run.opt.exact);
        assert!(
            competitive_point(run.transcript.bins_used(), &run.opt, &c, &k),
            "DBF {} bins vs opt {} on {} items",
            run.transcript.bins_used(),
            run.opt.bins,
            run.transcript.announcement.n()
        );
    }
    assert!(
        fixture.elapsed <= Duration::from_secs(120),
        "DBF fixture took {:?}",
        fixture.elapsed
    );
    println!(
        "criterion 6 PASS: DBF <= 4/3 opt + 1 on {} two-per-bin instances ({:?})",
        fixture.runs.len(),
        fixture.elapsed
    );
}

/// Structure of DBF packings with a lonely special item: bin census, the
/// unfitting-pairs property, and the counting lower bound on OPT.
#[test]
fn criterion_07_dbf_structural_lemmas() {
    let fixture = dbf_fixture();
    let half = rat(1, 2);
    let mut with_y = 0usize;
    for run in &fixture.runs {
        let counts = &run.counts;
        assert_eq!(
            counts.total_bins(),
            run.transcript.bins_used(),
            "census misses bins"
        );
        if counts.y == 0 {
            continue;
        }
        with_y += 1;
        assert_eq!(counts.z, 0, "Z-bin next to a Y-bin");
        assert_eq!(
            run.transcript.bins_used(),
            counts.n1 + counts.y + counts.y2,
            "bins != n1 + y + y2"
        );

        // Direct scan: specials alone (Y/Y2 bins) against larges without a
        // special (X/X2 bins).
        let n = run.transcript.announcement.n();
        let specials = special_item_ids(n, &run.transcript.actuals);
        let mut lonely_specials = Vec::new();
        let mut unfilled_larges = Vec::new();
        for bin in run.transcript.final_state.bins() {
            let ids = bin.items();
            let has_large = ids.iter().any(|&id| run.transcript.actuals[id] > half);
            let has_special = ids.iter().any(|&id| specials[id]);
            if has_special && !has_large {
                lonely_specials
                    .extend(ids.iter().filter(|&&id| specials[id]).copied());
            }
            if has_large && !has_special {
                unfilled_larges.extend(
                    ids.iter()
                        .filter(|&&id| run.transcript.actuals[id] > half).copied(),
                );
            }
        }
        for &s in &lonely_specials {
            for &g in &unfilled_larges {
                assert!(
                    &run.transcript.actuals[s] + &run.transcript.actuals[g] > Rational::one(),
                    "special {s} fits large {g}"
                );
            }
        }

        let y_prime = counts.y_prime();
        if y_prime >= counts.xs {
            assert!(
                2 * run.opt.bins >= 2 * counts.n1 + y_prime - counts.xs,
                "opt {} below n1 + (y' - xs)/2",
                run.opt.bins
            );
        }
    }
    assert!(with_y > 0, "no runs with a lonely special sampled");
    println!(
        "criterion 7 PASS: structural lemmas over {with_y} DBF runs with y > 0 \
         (of {})",
        fixture.runs.len()
    );
}

/// The coarse-estimate construction forces every baseline to ratio
/// >= 1.5 - 10/n at n = 120, with honest sizes and verified certificates.
#[test]
fn criterion_08_yao_forcing() {
    let n = 120usize;
    let delta = rat(42, 43);
    let bound = rat(3, 2) - rat(10, 1) / Rational::from(n);
    for alg in ["nextfit", "firstfit", "bestfit", "harmonic4"] {
        let (row, transcript) =
            run_duel(alg, "yao4143", n, &delta, &rat(2, 1), &rat(1, 1)).expect("duel runs");
        assert!(row.opt_exact, "{alg}: certificate not exact");
        assert_ratio_at_least(row.alg_bins, row.opt_bins, &bound, alg);
        for (id, actual) in transcript.actuals.iter().enumerate() {
            assert!(
                validate_actual(
                    &transcript.announcement.announced()[id],
                    transcript.announcement.delta(),
                    actual
                ),
                "{alg}: item {id} off band"
            );
        }
    }
    println!(
        "criterion 8 PASS: yao4143 forces all 4 baselines past 1.5 - 10/{n} at delta 42/43"
    );
}

/// Exhaustive, pruning-free enumeration of all packings by restricted
/// growth: item i may open bin max_used + 1 or join any feasible earlier
/// bin. Independent of the branch-and-bound path.
fn enumerate_min_bins(sizes: &[Rational]) -> usize {
    fn go(sizes: &[Rational], item: usize, loads: &mut Vec<Rational>, best: &mut usize) {
        if item == sizes.len() {
            *best = (*best).min(loads.len());
            return;
        }
        for b in 0..=loads.len() {
            if b == loads.len() {
                loads.push(sizes[item].clone());
                go(sizes, item + 1, loads, best);
                loads.pop();
            } else if &loads[b] + &sizes[item] <= Rational::one() {
                let saved = loads[b].clone();
                loads[b] = &saved + &sizes[item];
                go(sizes, item + 1, loads, best);
                loads[b] = saved;
            }
        }
    }
    let mut best = sizes.len();
    go(sizes, 0, &mut Vec::new(), &mut best);
    best.max(usize::from(!sizes.is_empty()))
}

/// The two oracles agree with each other and with brute force.
#[test]
fn criterion_09_oracle_equivalence() {
    for t in 0..500usize {
        let n = 1 + t % 12;
        let seed = SEED.wrapping_add((200_000 + t) as u64);
        let instance = gen_instance(Profile::TwoBin, n, &rat(1, 35), seed, false).expect("gen");
        let actuals = instance.actuals().expect("actuals");
        let pairing = opt_pairing(actuals).expect("pairing");
        let exact = opt_exact(actuals).expect("exact");
        assert_eq!(pairing.bins, exact.bins, "oracle mismatch on {actuals:?}");
    }
    for t in 0..200usize {
        let n = 1 + t % 8;
        let seed = SEED.wrapping_add((300_000 + t) as u64);
        let instance = gen_instance(Profile::Uniform, n, &rat(1, 10), seed, false).expect("gen");
        let actuals = instance.actuals().expect("actuals");
        let exact = opt_exact(actuals).expect("exact");
        assert_eq!(
            exact.bins,
            enumerate_min_bins(actuals),
            "branch-and-bound disagrees with enumeration on {actuals:?}"
        );
    }
    println!(
        "criterion 9 PASS: pairing = exact on 500 two-per-bin instances, \
         exact = exhaustive enumeration on 200 instances"
    );
}

/// Identical config and seed produce byte-identical CSV, serial or parallel.
#[test]
fn criterion_10_determinism() {
    let config = |jobs: usize| ExperimentConfig {
        algorithms: ALGORITHM_NAMES.iter().map(|s| s.to_string()).collect(),
        source: Source::Generator {
            profile: Profile::Mixed,
            n: 14,
            delta: rat(1, 20),
            trials: 25,
        },
        seed: SEED,
        opt_mode: OptMode::Exact,
        c: rat(2, 1),
        k: rat(2, 1),
        jobs,
        adversarial_rounding: false,
    };
    let a = emit(&run_experiment(&config(1)).expect("grid"), ReportFormat::Csv);
    let b = emit(&run_experiment(&config(1)).expect("grid"), ReportFormat::Csv);
    let c = emit(&run_experiment(&config(4)).expect("grid"), ReportFormat::Csv);
    assert_eq!(a, b, "two serial runs differ");
    assert_eq!(a, c, "parallel run differs from serial");
    assert!(a.len() > 100);
    println!("criterion 10 PASS: byte-identical CSV across reruns and job counts");
}
