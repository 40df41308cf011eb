//! Experiment grids: algorithms crossed with instance sources, optimum
//! computation per configured mode, and CSV/JSON report emission.

mod gen;

pub use gen::{gen_instance, Profile};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::adversary::adversary_by_name;
use crate::algorithms::{algorithm_by_name, classify_dbf_bins, BinTypeCounts};
use crate::core::{run_adaptive_game, run_game, Instance, Transcript};
use crate::oracle::{competitive_point, opt_exact, opt_pairing, size_lower_bound, OptResult};
use crate::{Error, Rational, Result};

/// How the optimum of each cell is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptMode {
    Exact,
    Pairing,
    SizeLowerBound,
    Certificate,
}

impl fmt::Display for OptMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            OptMode::Exact => "exact",
            OptMode::Pairing => "pairing",
            OptMode::SizeLowerBound => "size-lower-bound",
            OptMode::Certificate => "certificate",
        };
        f.write_str(name)
    }
}

impl FromStr for OptMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(OptMode::Exact),
            "pairing" => Ok(OptMode::Pairing),
            "size-lower-bound" | "lb" => Ok(OptMode::SizeLowerBound),
            "certificate" => Ok(OptMode::Certificate),
            other => Err(Error::BadParameter(format!("unknown opt mode {other:?}"))),
        }
    }
}

/// Where the grid's instances come from.
#[derive(Debug, Clone)]
pub enum Source {
    /// Pre-built instances with stable ids.
    Fixed(Vec<(String, Instance)>),
    /// `trials` generated instances; trial `t` uses seed `seed + t`.
    Generator {
        profile: Profile,
        n: usize,
        delta: Rational,
        trials: usize,
    },
    /// One adaptive game per algorithm against a named adversary.
    Adversary {
        name: String,
        n: usize,
        delta: Rational,
    },
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub algorithms: Vec<String>,
    pub source: Source,
    pub seed: u64,
    pub opt_mode: OptMode,
    /// Guarantee check: `alg_bins <= c * opt_bins + k`.
    pub c: Rational,
    pub k: Rational,
    pub jobs: usize,
    pub adversarial_rounding: bool,
}

/// One grid cell's outcome. The `ratio` column is a six-decimal display
/// value; every comparison behind `guarantee_ok` happens on exact numbers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub instance_id: String,
    pub algorithm: String,
    pub n: usize,
    pub delta: Rational,
    pub alg_bins: usize,
    pub opt_bins: usize,
    pub opt_mode: String,
    pub ratio: String,
    pub guarantee_ok: bool,
    /// False when `opt_bins` is only a lower bound; a failed guarantee then
    /// means "unknown", never a proven violation.
    pub opt_exact: bool,
    /// Bins per load decile, loads of exactly 1 counted in the last bucket.
    pub fill_histogram: Vec<usize>,
    pub bin_types: Option<BinTypeCounts>,
    pub counters: BTreeMap<String, i64>,
    pub error: Option<String>,
}

impl ReportRow {
    fn failed(instance_id: String, algorithm: String, n: usize, delta: Rational, err: &Error) -> Self {
        ReportRow {
            instance_id,
            algorithm,
            n,
            delta,
            alg_bins: 0,
            opt_bins: 0,
            opt_mode: String::new(),
            ratio: "0.000000".into(),
            guarantee_ok: false,
            opt_exact: false,
            fill_histogram: vec![0; 10],
            bin_types: None,
            counters: BTreeMap::new(),
            error: Some(err.to_string()),
        }
    }

    /// A proven guarantee violation: the check failed against an exact
    /// optimum. Failures against lower bounds stay unproven.
    pub fn proven_violation(&self) -> bool {
        !self.guarantee_ok && self.opt_exact && self.error.is_none()
    }
}

fn format_ratio(alg_bins: usize, opt_bins: usize) -> String {
    if opt_bins == 0 {
        return if alg_bins == 0 { "1.000000" } else { "inf" }.to_string();
    }
    format!("{:.6}", alg_bins as f64 / opt_bins as f64)
}

fn fill_histogram(transcript: &Transcript) -> Vec<usize> {
    let mut buckets = vec![0usize; 10];
    for bin in transcript.final_state.bins() {
        let decile = (bin.load() * &Rational::from_int(10)).floor_usize().min(9);
        buckets[decile] += 1;
    }
    buckets
}

struct Cell {
    instance_id: String,
    algorithm: String,
    task: Task,
}

enum Task {
    Fixed(Instance),
    Adversarial {
        name: String,
        n: usize,
        delta: Rational,
    },
}

/// Optimum of a fixed instance under the configured mode.
pub fn compute_opt(mode: OptMode, actuals: &[Rational]) -> Result<OptResult> {
    match mode {
        OptMode::Exact => opt_exact(actuals),
        OptMode::Pairing => opt_pairing(actuals),
        OptMode::SizeLowerBound => Ok(OptResult {
            bins: size_lower_bound(actuals),
            certificate: vec![],
            exact: false,
        }),
        OptMode::Certificate => Err(Error::BadParameter(
            "certificate opt mode needs an adversary source".into(),
        )),
    }
}

fn run_cell(cell: &Cell, config: &ExperimentConfig) -> ReportRow {
    let (transcript, opt) = match &cell.task {
        Task::Fixed(instance) => {
            let n = instance.announcement.n();
            let delta = instance.announcement.delta().clone();
            let attempt = || -> Result<(Transcript, OptResult)> {
                let actuals = instance.actuals()?;
                let mut alg = algorithm_by_name(&cell.algorithm).ok_or_else(|| {
                    Error::BadParameter(format!("unknown algorithm {:?}", cell.algorithm))
                })?;
                let transcript = run_game(alg.as_mut(), &instance.announcement, actuals)?;
                let opt = compute_opt(config.opt_mode, actuals)?;
                Ok((transcript, opt))
            };
            match attempt() {
                Ok(pair) => pair,
                Err(e) => {
                    return ReportRow::failed(
                        cell.instance_id.clone(),
                        cell.algorithm.clone(),
                        n,
                        delta,
                        &e,
                    )
                }
            }
        }
        Task::Adversarial { name, n, delta } => {
            let attempt = || -> Result<(Transcript, OptResult)> {
                let mut adv = adversary_by_name(name, *n, delta)?;
                let mut alg = algorithm_by_name(&cell.algorithm).ok_or_else(|| {
                    Error::BadParameter(format!("unknown algorithm {:?}", cell.algorithm))
                })?;
                let transcript = run_adaptive_game(alg.as_mut(), adv.as_mut())?;
                let opt = match config.opt_mode {
                    OptMode::Certificate => adv.certificate(&transcript)?,
                    mode => compute_opt(mode, &transcript.actuals)?,
                };
                Ok((transcript, opt))
            };
            match attempt() {
                Ok(pair) => pair,
                Err(e) => {
                    return ReportRow::failed(
                        cell.instance_id.clone(),
                        cell.algorithm.clone(),
                        2 * n,
                        delta.clone(),
                        &e,
                    )
                }
            }
        }
    };

    let alg_bins = transcript.bins_used();
    let bin_types = (cell.algorithm == "dbf")
        .then(|| classify_dbf_bins(&transcript).ok())
        .flatten();
    ReportRow {
        instance_id: cell.instance_id.clone(),
        algorithm: cell.algorithm.clone(),
        n: transcript.announcement.n(),
        delta: transcript.announcement.delta().clone(),
        alg_bins,
        opt_bins: opt.bins,
        opt_mode: config.opt_mode.to_string(),
        ratio: format_ratio(alg_bins, opt.bins),
        guarantee_ok: competitive_point(alg_bins, &opt, &config.c, &config.k),
        opt_exact: opt.exact,
        fill_histogram: fill_histogram(&transcript),
        bin_types,
        counters: transcript.counters.clone(),
        error: None,
    }
}

/// Runs the full grid. Rows come back sorted by (instance id, algorithm);
/// identical configs and seeds produce identical rows.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ReportRow>> {
    let mut cells = Vec::new();
    match &config.source {
        Source::Fixed(instances) => {
            for (id, instance) in instances {
                for alg in &config.algorithms {
                    cells.push(Cell {
                        instance_id: id.clone(),
                        algorithm: alg.clone(),
                        task: Task::Fixed(instance.clone()),
                    });
                }
            }
        }
        Source::Generator {
            profile,
            n,
            delta,
            trials,
        } => {
            for trial in 0..*trials {
                let seed = config.seed.wrapping_add(trial as u64);
                let instance =
                    gen_instance(*profile, *n, delta, seed, config.adversarial_rounding)?;
                let id = format!("{profile}:{n}:{delta}:{seed}");
                for alg in &config.algorithms {
                    cells.push(Cell {
                        instance_id: id.clone(),
                        algorithm: alg.clone(),
                        task: Task::Fixed(instance.clone()),
                    });
                }
            }
        }
        Source::Adversary { name, n, delta } => {
            for alg in &config.algorithms {
                cells.push(Cell {
                    instance_id: format!("{name}:{n}:{delta}"),
                    algorithm: alg.clone(),
                    task: Task::Adversarial {
                        name: name.clone(),
                        n: *n,
                        delta: delta.clone(),
                    },
                });
            }
        }
    }

    let jobs = config.jobs.max(1).min(cells.len().max(1));
    let mut rows = if jobs <= 1 {
        cells.iter().map(|cell| run_cell(cell, config)).collect()
    } else {
        let collected = Mutex::new(Vec::with_capacity(cells.len()));
        std::thread::scope(|scope| {
            for worker in 0..jobs {
                let cells = &cells;
                let collected = &collected;
                scope.spawn(move || {
                    let mut local = Vec::new();
                    for cell in cells.iter().skip(worker).step_by(jobs) {
                        local.push(run_cell(cell, config));
                    }
                    collected.lock().unwrap().extend(local);
                });
            }
        });
        collected.into_inner().unwrap()
    };
    rows.sort_by(|a, b| {
        (&a.instance_id, &a.algorithm).cmp(&(&b.instance_id, &b.algorithm))
    });
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::BadParameter(format!("unknown format {other:?}"))),
        }
    }
}

pub const CSV_HEADER: &str =
    "instance_id,algorithm,n,delta,alg_bins,opt_bins,opt_mode,ratio,guarantee_ok";

/// Renders rows as CSV (fixed column set) or JSON (full rows).
pub fn emit(rows: &[ReportRow], format: ReportFormat) -> String {
    match format {
        ReportFormat::Csv => {
            let mut out = String::from(CSV_HEADER);
            out.push('\n');
            for row in rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{}\n",
                    row.instance_id,
                    row.algorithm,
                    row.n,
                    row.delta,
                    row.alg_bins,
                    row.opt_bins,
                    row.opt_mode,
                    row.ratio,
                    row.guarantee_ok
                ));
            }
            out
        }
        ReportFormat::Json => serde_json::to_string_pretty(rows).expect("rows serialize"),
    }
}

pub fn parse_report_json(text: &str) -> Result<Vec<ReportRow>> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("report: {e}")))
}

/// Runs one adaptive duel and reports against the adversary's verified
/// certificate.
pub fn run_duel(
    algorithm: &str,
    adversary: &str,
    n: usize,
    delta: &Rational,
    c: &Rational,
    k: &Rational,
) -> Result<(ReportRow, Transcript)> {
    let mut adv = adversary_by_name(adversary, n, delta)?;
    let mut alg = algorithm_by_name(algorithm)
        .ok_or_else(|| Error::BadParameter(format!("unknown algorithm {algorithm:?}")))?;
    let transcript = run_adaptive_game(alg.as_mut(), adv.as_mut())?;
    let opt = adv.certificate(&transcript)?;
    let alg_bins = transcript.bins_used();
    let bin_types = (algorithm == "dbf")
        .then(|| classify_dbf_bins(&transcript).ok())
        .flatten();
    let row = ReportRow {
        instance_id: format!("{adversary}:{n}:{delta}"),
        algorithm: algorithm.to_string(),
        n: transcript.announcement.n(),
        delta: delta.clone(),
        alg_bins,
        opt_bins: opt.bins,
        opt_mode: OptMode::Certificate.to_string(),
        ratio: format_ratio(alg_bins, opt.bins),
        guarantee_ok: competitive_point(alg_bins, &opt, c, k),
        opt_exact: opt.exact,
        fill_histogram: fill_histogram(&transcript),
        bin_types,
        counters: transcript.counters.clone(),
        error: None,
    };
    Ok((row, transcript))
}
