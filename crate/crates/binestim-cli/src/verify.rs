//! Invariant suites behind `binestim verify`. Each suite reruns the
//! library's structural guarantees over seeded random workloads and reports
//! one line per check.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use binestim::adversary::{verify_stacked_minimality, ADVERSARY_NAMES};
use binestim::algorithms::{
    algorithm_by_name, analyze_ph_run, classify_dbf_bins, special_item_ids, PlannedHarmonic,
    ALGORITHM_NAMES,
};
use binestim::core::{run_game, validate_actual, Transcript};
use binestim::harness::{gen_instance, run_duel, Profile};
use binestim::oracle::{
    self, competitive_point, max_bin_weight_check, opt_exact, opt_pairing, total_weight,
};
use binestim::rational::rat;
use binestim::{Error, Rational};

pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, pass: bool, detail: String) -> Self {
        Check {
            name: name.to_string(),
            pass,
            detail,
        }
    }
}

pub fn run_suite(suite: &str, seed: u64) -> Result<Vec<Check>, Error> {
    match suite {
        "weights" => Ok(weights_suite(seed)),
        "dbf-lemmas" => dbf_suite(seed),
        "oracle-equiv" => oracle_suite(seed),
        "ph-lemmas" => ph_suite(seed),
        "fourthirds" => fourthirds_suite(),
        "replay" => replay_suite(seed),
        "all" => {
            let mut all = weights_suite(seed);
            all.extend(dbf_suite(seed)?);
            all.extend(oracle_suite(seed)?);
            all.extend(ph_suite(seed)?);
            all.extend(fourthirds_suite()?);
            all.extend(replay_suite(seed)?);
            Ok(all)
        }
        other => Err(Error::BadParameter(format!("unknown suite {other:?}"))),
    }
}

/// Random size in (0,1].
fn random_size(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.next_u32() as i64 + 1, 1i64 << 32)
}

fn weights_suite(seed: u64) -> Vec<Check> {
    let exact_ok = oracle::weight(&rat(3, 5)) == Rational::one()
        && oracle::weight(&rat(2, 5)) == rat(1, 2)
        && oracle::weight(&rat(3, 10)) == rat(1, 3)
        && oracle::weight(&rat(1, 5)) == Rational::zero();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let trials = 100_000;
    let mut violations = 0usize;
    let mut max_seen = Rational::zero();
    for _ in 0..trials {
        let mut bin: Vec<Rational> = Vec::new();
        let mut load = Rational::zero();
        for _ in 0..8 {
            let s = random_size(&mut rng);
            if &load + &s <= Rational::one() {
                load = &load + &s;
                bin.push(s);
            } else {
                break;
            }
        }
        if !max_bin_weight_check(&bin) {
            violations += 1;
        }
        let w = total_weight(&bin);
        if w > max_seen {
            max_seen = w;
        }
    }
    vec![
        Check::new(
            "weights.values",
            exact_ok,
            "w(3/5)=1 w(2/5)=1/2 w(3/10)=1/3 w(1/5)=0".into(),
        ),
        Check::new(
            "weights.bin-bound",
            violations == 0,
            format!("{trials} sampled feasible bins, max weight {max_seen}, {violations} above 3/2"),
        ),
    ]
}

fn dbf_suite(seed: u64) -> Result<Vec<Check>, Error> {
    let deltas = [rat(1, 35), rat(1, 10), rat(1, 4)];
    let trials = 150;
    let mut guarantee_fail = 0usize;
    let mut no_zs_fail = 0usize;
    let mut unfitting_fail = 0usize;
    let mut opt_lb_fail = 0usize;
    let mut census_fail = 0usize;
    let mut y_positive_runs = 0usize;

    for t in 0..trials {
        let n = 3 + (t * 7) % 58;
        let delta = &deltas[t % deltas.len()];
        let instance = gen_instance(Profile::TwoBin, n, delta, seed.wrapping_add(t as u64), false)?;
        let actuals = instance.actuals()?.to_vec();
        let mut alg = algorithm_by_name("dbf").expect("registered");
        let transcript = run_game(alg.as_mut(), &instance.announcement, &actuals)?;
        let counts = classify_dbf_bins(&transcript)?;
        let opt = opt_pairing(&actuals)?;

        if counts.total_bins() != transcript.bins_used() {
            census_fail += 1;
        }
        if !competitive_point(transcript.bins_used(), &opt, &rat(4, 3), &Rational::one()) {
            guarantee_fail += 1;
        }
        if counts.y > 0 {
            y_positive_runs += 1;
            if counts.z != 0
                || transcript.bins_used() != counts.n1 + counts.y + counts.y2
            {
                no_zs_fail += 1;
            }
            if !unfitting_holds(&transcript) {
                unfitting_fail += 1;
            }
            let y_prime = counts.y_prime();
            if y_prime >= counts.xs {
                // OPT >= n1 + (y' - xs)/2, compared as 2*OPT >= 2*n1 + y' - xs.
                if 2 * opt.bins < 2 * counts.n1 + y_prime - counts.xs {
                    opt_lb_fail += 1;
                }
            }
        }
    }

    Ok(vec![
        Check::new(
            "dbf.census",
            census_fail == 0,
            format!("{trials} runs, {census_fail} with bins outside the taxonomy"),
        ),
        Check::new(
            "dbf.guarantee",
            guarantee_fail == 0,
            format!("bins <= 4/3 opt + 1 on {trials} two-per-bin runs, {guarantee_fail} failures"),
        ),
        Check::new(
            "dbf.no-zs",
            no_zs_fail == 0,
            format!("{y_positive_runs} runs with y>0, {no_zs_fail} broke bins = n1+y+y2, z=0"),
        ),
        Check::new(
            "dbf.unfitting-special-items",
            unfitting_fail == 0,
            format!("{y_positive_runs} runs with y>0, {unfitting_fail} had a fitting special/large pair"),
        ),
        Check::new(
            "dbf.opt-lb",
            opt_lb_fail == 0,
            format!("opt >= n1 + (y'-xs)/2 cross-checked, {opt_lb_fail} failures"),
        ),
    ])
}

/// With y > 0: no special item in a Y- or Y2-bin fits next to any large item
/// in an X- or X2-bin.
fn unfitting_holds(transcript: &Transcript) -> bool {
    let n = transcript.announcement.n();
    let specials = special_item_ids(n, &transcript.actuals);
    let half = rat(1, 2);
    let mut lonely_specials: Vec<&Rational> = Vec::new();
    let mut unfilled_larges: Vec<&Rational> = Vec::new();
    for bin in transcript.final_state.bins() {
        let ids = bin.items();
        let has_large = ids.iter().any(|&id| transcript.actuals[id] > half);
        let has_special = ids.iter().any(|&id| specials[id]);
        if has_special && !has_large {
            lonely_specials.extend(
                ids.iter()
                    .filter(|&&id| specials[id])
                    .map(|&id| &transcript.actuals[id]),
            );
        }
        if has_large && !has_special {
            unfilled_larges.extend(
                ids.iter()
                    .filter(|&&id| transcript.actuals[id] > half)
                    .map(|&id| &transcript.actuals[id]),
            );
        }
    }
    lonely_specials
        .iter()
        .all(|s| unfilled_larges.iter().all(|g| *s + *g > Rational::one()))
}

fn oracle_suite(seed: u64) -> Result<Vec<Check>, Error> {
    let trials = 300;
    let mut mismatches = 0usize;
    for t in 0..trials {
        let n = 1 + t % 12;
        let instance = gen_instance(
            Profile::TwoBin,
            n,
            &rat(1, 35),
            seed.wrapping_add(1000 + t as u64),
            false,
        )?;
        let actuals = instance.actuals()?;
        let pairing = opt_pairing(actuals)?;
        let exact = opt_exact(actuals)?;
        if pairing.bins != exact.bins {
            mismatches += 1;
        }
    }
    Ok(vec![Check::new(
        "oracle.pairing-equals-exact",
        mismatches == 0,
        format!("{trials} two-per-bin instances with n <= 12, {mismatches} mismatches"),
    )])
}

fn ph_suite(seed: u64) -> Result<Vec<Check>, Error> {
    let delta = rat(1, 35);
    let profiles = [Profile::Uniform, Profile::Halves, Profile::Mixed];
    let per_profile = 60;
    let mut guarantee_fail = 0usize;
    let mut fill_designated_fail = 0usize;
    let mut fill_total_fail = 0usize;
    let mut weight_fail = 0usize;
    let mut companioned_runs = 0usize;
    let mut weight_case_runs = 0usize;
    let two_thirds = rat(2, 3);

    for (p, profile) in profiles.iter().enumerate() {
        for t in 0..per_profile {
            let n = 2 + (t * 5) % 13;
            let s = seed.wrapping_add((p * per_profile + t) as u64);
            let instance = gen_instance(*profile, n, &delta, s, false)?;
            let actuals = instance.actuals()?.to_vec();
            let mut alg = PlannedHarmonic::new();
            let transcript = run_game(&mut alg, &instance.announcement, &actuals)?;
            let opt = opt_exact(&actuals)?;
            if !competitive_point(
                transcript.bins_used(),
                &opt,
                &rat(3, 2),
                &Rational::from_int(4),
            ) {
                guarantee_fail += 1;
            }
            let analysis = analyze_ph_run(&transcript)?;
            if analysis.all_large_companioned {
                companioned_runs += 1;
                let ds = &analysis.designated_bins;
                for &bin in ds.iter().take(ds.len().saturating_sub(1)) {
                    if transcript.final_state.bins()[bin].load() < &two_thirds {
                        fill_designated_fail += 1;
                    }
                }
                if analysis.low_fill_bins > 4 {
                    fill_total_fail += 1;
                }
            } else if analysis.fallback_small_bins == 0 && analysis.designated_with_medium == 0 {
                weight_case_runs += 1;
                let w = total_weight(&actuals);
                if Rational::from(transcript.bins_used()) > w + Rational::from_int(2) {
                    weight_fail += 1;
                }
            }
        }
    }

    let total = profiles.len() * per_profile;
    Ok(vec![
        Check::new(
            "ph.guarantee",
            guarantee_fail == 0,
            format!("bins <= 3/2 opt + 4 on {total} runs, {guarantee_fail} failures"),
        ),
        Check::new(
            "ph.fill-designated",
            fill_designated_fail == 0,
            format!(
                "{companioned_runs} fully-companioned runs, {fill_designated_fail} designated bins under 2/3"
            ),
        ),
        Check::new(
            "ph.fill-total",
            fill_total_fail == 0,
            format!(
                "{companioned_runs} fully-companioned runs, {fill_total_fail} with more than 4 bins under 2/3"
            ),
        ),
        Check::new(
            "ph.weight-bound",
            weight_fail == 0,
            format!("{weight_case_runs} weight-case runs, {weight_fail} broke bins <= W + 2"),
        ),
    ])
}

fn fourthirds_suite() -> Result<Vec<Check>, Error> {
    let delta = rat(1, 100);
    let threshold = rat(77, 60); // 4/3 - 1/20
    let mut honesty_fail = 0usize;
    let mut ordering_fail = 0usize;
    let mut cert_fail = 0usize;
    let mut ratio_fail = 0usize;
    let mut duels = 0usize;

    for alg in ALGORITHM_NAMES {
        for n in [3usize, 6, 9, 12, 30] {
            duels += 1;
            let (row, transcript) = run_duel(alg, "fourthirds", n, &delta, &rat(2, 1), &rat(1, 1))?;
            for (id, actual) in transcript.actuals.iter().enumerate() {
                if !validate_actual(
                    &transcript.announcement.announced()[id],
                    transcript.announcement.delta(),
                    actual,
                ) {
                    honesty_fail += 1;
                }
            }
            if verify_stacked_minimality(&transcript).is_err() {
                ordering_fail += 1;
            }
            let pairing = opt_pairing(&transcript.actuals)?;
            if row.opt_bins != n || pairing.bins != n {
                cert_fail += 1;
            }
            if Rational::from(row.alg_bins) < &threshold * &Rational::from(row.opt_bins) {
                ratio_fail += 1;
            }
        }
    }

    let mut yao_fail = 0usize;
    for alg in ["nextfit", "firstfit", "bestfit", "harmonic4"] {
        let (row, transcript) = run_duel(alg, "yao4143", 24, &rat(42, 43), &rat(2, 1), &rat(1, 1))?;
        let bound = rat(3, 2) - rat(10, 24);
        if Rational::from(row.alg_bins) < &bound * &Rational::from(row.opt_bins) {
            yao_fail += 1;
        }
        for (id, actual) in transcript.actuals.iter().enumerate() {
            if !validate_actual(
                &transcript.announcement.announced()[id],
                transcript.announcement.delta(),
                actual,
            ) {
                yao_fail += 1;
            }
        }
    }

    Ok(vec![
        Check::new(
            "fourthirds.band-honesty",
            honesty_fail == 0,
            format!("{duels} duels, {honesty_fail} off-band sizes"),
        ),
        Check::new(
            "fourthirds.stacked-minimality",
            ordering_fail == 0,
            format!("{duels} duels, {ordering_fail} ordering violations"),
        ),
        Check::new(
            "fourthirds.certificate",
            cert_fail == 0,
            format!("{duels} duels, certificate = n = pairing opt, {cert_fail} failures"),
        ),
        Check::new(
            "fourthirds.forced-ratio",
            ratio_fail == 0,
            format!("{duels} duels with ratio >= 77/60, {ratio_fail} failures"),
        ),
        Check::new(
            "yao.forced-ratio",
            yao_fail == 0,
            format!("4 baseline duels at n=24, {yao_fail} failures"),
        ),
    ])
}

fn replay_suite(seed: u64) -> Result<Vec<Check>, Error> {
    let mut replay_fail = 0usize;
    let mut rerun_fail = 0usize;
    let mut json_fail = 0usize;
    let mut games = 0usize;
    let profiles = [Profile::Uniform, Profile::Halves, Profile::Mixed, Profile::TwoBin];

    for (i, profile) in profiles.iter().enumerate() {
        for (j, alg_name) in ALGORITHM_NAMES.iter().enumerate() {
            for t in 0..3u64 {
                games += 1;
                let s = seed.wrapping_add((i * 100 + j * 10) as u64 + t);
                let instance = gen_instance(*profile, 12, &rat(1, 20), s, false)?;
                let actuals = instance.actuals()?.to_vec();
                let mut alg = algorithm_by_name(alg_name).expect("registered");
                let t1 = run_game(alg.as_mut(), &instance.announcement, &actuals)?;
                if t1.replay()? != t1.final_state {
                    replay_fail += 1;
                }
                let mut alg2 = algorithm_by_name(alg_name).expect("registered");
                let t2 = run_game(alg2.as_mut(), &instance.announcement, &actuals)?;
                if t1 != t2 {
                    rerun_fail += 1;
                }
                if Transcript::from_json(&t1.to_json())? != t1 {
                    json_fail += 1;
                }
            }
        }
    }

    // Adaptive games replay offline onto the recorded instance.
    let mut adaptive_fail = 0usize;
    for adversary in ADVERSARY_NAMES {
        let (n, delta) = match *adversary {
            "fourthirds" => (6usize, rat(1, 100)),
            _ => (12usize, rat(42, 43)),
        };
        for alg_name in ALGORITHM_NAMES {
            let (_, live) = run_duel(alg_name, adversary, n, &delta, &rat(2, 1), &rat(1, 1))?;
            let mut alg = algorithm_by_name(alg_name).expect("registered");
            let offline = run_game(alg.as_mut(), &live.announcement, &live.actuals)?;
            if offline.placements != live.placements || offline.final_state != live.final_state {
                adaptive_fail += 1;
            }
        }
    }

    Ok(vec![
        Check::new(
            "replay.final-state",
            replay_fail == 0,
            format!("{games} games, {replay_fail} replay mismatches"),
        ),
        Check::new(
            "replay.determinism",
            rerun_fail == 0,
            format!("{games} games rerun, {rerun_fail} transcript differences"),
        ),
        Check::new(
            "replay.transcript-json",
            json_fail == 0,
            format!("{games} transcripts, {json_fail} JSON roundtrip failures"),
        ),
        Check::new(
            "replay.adaptive-offline",
            adaptive_fail == 0,
            format!("adaptive duels replayed offline, {adaptive_fail} mismatches"),
        ),
    ])
}
