//! Command line front end: instance generation, experiment grids, adversary
//! duels, exact optima and the invariant verification suites.
//!
//! Exit codes: 0 success, 1 guarantee or verification failure, 2 usage or
//! parameter error.

mod verify;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use binestim::core::{parse_instance, render_instance, Instance};
use binestim::harness::{
    emit, gen_instance, run_duel, run_experiment, ExperimentConfig, OptMode, Profile,
    ReportFormat, Source,
};
use binestim::oracle::{opt_exact, opt_pairing};
use binestim::{Error, Rational};

#[derive(Parser)]
#[command(name = "binestim", version, about = "Online bin packing with estimated item sizes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance file from a seeded profile.
    Gen(GenArgs),
    /// Run algorithms over instances and report one CSV/JSON row per cell.
    Run(RunArgs),
    /// Play an adaptive game against an adversary and report the forced
    /// ratio against its verified certificate.
    Duel(DuelArgs),
    /// Compute the exact optimum of an instance file.
    Opt(OptArgs),
    /// Run an invariant suite; fails with exit code 1 on any violation.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct GenArgs {
    /// uniform | halves | mixed | twobin
    #[arg(long)]
    profile: Profile,
    #[arg(long)]
    n: usize,
    /// Accuracy as a fraction p/q (decimals are rejected).
    #[arg(long)]
    delta: Rational,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Snap actual sizes to the band endpoints instead of sampling.
    #[arg(long)]
    adversarial_rounding: bool,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    /// Comma-separated algorithm names
    /// (nextfit, firstfit, bestfit, harmonic4, ph, dbf).
    #[arg(long, value_delimiter = ',')]
    alg: Vec<String>,
    /// Instance file to run on.
    #[arg(long, conflicts_with = "gen")]
    r#in: Option<PathBuf>,
    /// Inline generator spec profile:n:delta:seed.
    #[arg(long)]
    gen: Option<String>,
    /// Instances to draw from the generator spec.
    #[arg(long, default_value_t = 1)]
    trials: usize,
    /// exact | pairing | size-lower-bound
    #[arg(long, default_value = "exact")]
    opt_mode: OptMode,
    /// Guarantee to check: alg_bins <= c * opt_bins + K.
    #[arg(long)]
    c: Rational,
    #[arg(long = "K", alias = "k", default_value = "0")]
    k: Rational,
    #[arg(long, default_value = "csv")]
    format: ReportFormat,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    adversarial_rounding: bool,
}

#[derive(Args)]
struct DuelArgs {
    /// Comma-separated algorithm names.
    #[arg(long, value_delimiter = ',')]
    alg: Vec<String>,
    /// fourthirds | yao4143
    #[arg(long)]
    adversary: String,
    /// Construction parameter n (items announced: 2n or 3n).
    #[arg(long)]
    n: usize,
    #[arg(long)]
    delta: Rational,
    /// Guarantee to evaluate in the report row.
    #[arg(long, default_value = "2")]
    c: Rational,
    #[arg(long = "K", alias = "k", default_value = "1")]
    k: Rational,
    #[arg(long, default_value = "csv")]
    format: ReportFormat,
    /// Write the last game's transcript JSON here.
    #[arg(long)]
    transcript_out: Option<PathBuf>,
}

#[derive(Args)]
struct OptArgs {
    #[arg(long)]
    r#in: PathBuf,
    /// exact | pairing
    #[arg(long, default_value = "exact")]
    mode: String,
}

#[derive(Args)]
struct VerifyArgs {
    /// weights | dbf-lemmas | oracle-equiv | ph-lemmas | fourthirds |
    /// replay | all
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 421)]
    seed: u64,
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::BadParameter(_)
        | Error::Parse(_)
        | Error::InstanceTooLarge { .. }
        | Error::PreconditionViolated(_)
        | Error::Io(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn dispatch(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Run(args) => cmd_run(args),
        Command::Duel(args) => cmd_duel(args),
        Command::Opt(args) => cmd_opt(args),
        Command::Verify(args) => cmd_verify(args),
    }
}

fn cmd_gen(args: GenArgs) -> Result<u8, Error> {
    let instance = gen_instance(
        args.profile,
        args.n,
        &args.delta,
        args.seed,
        args.adversarial_rounding,
    )?;
    let text = render_instance(&instance);
    match args.out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(0)
}

/// Parses an inline generator spec `profile:n:delta:seed`.
fn parse_gen_spec(spec: &str) -> Result<(Profile, usize, Rational, u64), Error> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 4 {
        return Err(Error::BadParameter(format!(
            "generator spec must be profile:n:delta:seed, got {spec:?}"
        )));
    }
    let profile = Profile::from_str(parts[0])?;
    let n = parts[1]
        .parse::<usize>()
        .map_err(|e| Error::BadParameter(format!("bad n in generator spec: {e}")))?;
    let delta: Rational = parts[2].parse()?;
    let seed = parts[3]
        .parse::<u64>()
        .map_err(|e| Error::BadParameter(format!("bad seed in generator spec: {e}")))?;
    Ok((profile, n, delta, seed))
}

fn cmd_run(args: RunArgs) -> Result<u8, Error> {
    if args.alg.is_empty() {
        return Err(Error::BadParameter("no algorithms given".into()));
    }
    let (source, seed) = match (&args.r#in, &args.gen) {
        (Some(path), None) => {
            let text = fs::read_to_string(path)?;
            let instance = parse_instance(&text)?;
            let id = path
                .file_name()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "instance".into());
            (Source::Fixed(vec![(id, instance)]), 0)
        }
        (None, Some(spec)) => {
            let (profile, n, delta, seed) = parse_gen_spec(spec)?;
            (
                Source::Generator {
                    profile,
                    n,
                    delta,
                    trials: args.trials,
                },
                seed,
            )
        }
        _ => {
            return Err(Error::BadParameter(
                "exactly one of --in and --gen is required".into(),
            ))
        }
    };
    let config = ExperimentConfig {
        algorithms: args.alg,
        source,
        seed,
        opt_mode: args.opt_mode,
        c: args.c,
        k: args.k,
        jobs: args.jobs,
        adversarial_rounding: args.adversarial_rounding,
    };
    let rows = run_experiment(&config)?;
    print!("{}", emit(&rows, args.format));
    if let Some(msg) = rows.iter().find_map(|r| r.error.as_ref()) {
        eprintln!("error: {msg}");
        return Ok(2);
    }
    Ok(if rows.iter().any(|r| r.proven_violation()) {
        1
    } else {
        0
    })
}

fn cmd_duel(args: DuelArgs) -> Result<u8, Error> {
    if args.alg.is_empty() {
        return Err(Error::BadParameter("no algorithms given".into()));
    }
    let mut rows = Vec::new();
    let mut last_transcript = None;
    for alg in &args.alg {
        let (row, transcript) = run_duel(alg, &args.adversary, args.n, &args.delta, &args.c, &args.k)?;
        rows.push(row);
        last_transcript = Some(transcript);
    }
    print!("{}", emit(&rows, args.format));
    if let (Some(path), Some(t)) = (&args.transcript_out, &last_transcript) {
        fs::write(path, t.to_json())?;
    }
    Ok(if rows.iter().any(|r| r.proven_violation()) {
        1
    } else {
        0
    })
}

fn cmd_opt(args: OptArgs) -> Result<u8, Error> {
    let text = fs::read_to_string(&args.r#in)?;
    let instance: Instance = parse_instance(&text)?;
    let actuals = instance.actuals()?;
    let result = match args.mode.as_str() {
        "exact" => opt_exact(actuals)?,
        "pairing" => opt_pairing(actuals)?,
        other => {
            return Err(Error::BadParameter(format!(
                "opt mode must be exact or pairing, got {other:?}"
            )))
        }
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&result).expect("opt result serializes")
    );
    Ok(0)
}

fn cmd_verify(args: VerifyArgs) -> Result<u8, Error> {
    let checks = verify::run_suite(&args.suite, args.seed)?;
    let mut failed = false;
    for check in &checks {
        let status = if check.pass { "PASS" } else { "FAIL" };
        println!("{status} {}: {}", check.name, check.detail);
        failed |= !check.pass;
    }
    println!(
        "{} checks, {} failed",
        checks.len(),
        checks.iter().filter(|c| !c.pass).count()
    );
    Ok(if failed { 1 } else { 0 })
}
