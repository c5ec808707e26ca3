//! Batch command-line front end. Every command is deterministic in its
//! flags and seed: identical invocations produce byte-identical output.
//!
//! Exit codes: 0 success, 2 usage or domain error, 3 verification
//! failure, 4 I/O error.

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use hcf::analysis;
use hcf::gaussian::{parse_fraction, GaussianInt, GaussianRational};
use hcf::hurwitz::{self, DigitSequence};
use hcf::ifs;
use hcf::patterns::{self, LatticePattern};
use hcf::seedset::{self, InsertionSchedule};

const FORMAT: u32 = 1;

#[derive(Parser)]
#[command(name = "hcf", version, about = "Hurwitz continued-fraction toolkit")]
struct Cli {
    /// Worker threads for analysis commands (default: HCF_THREADS or all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand an exact Gaussian rational into Hurwitz digits.
    Expand {
        /// Real part as an exact fraction "p/q" (or an integer).
        #[arg(long, allow_hyphen_values = true)]
        re: String,
        /// Imaginary part as an exact fraction "p/q" (or an integer).
        #[arg(long, allow_hyphen_values = true)]
        im: String,
        #[arg(long, default_value_t = hurwitz::DEFAULT_MAX_DIGITS)]
        max_digits: usize,
    },
    /// Evaluate a digit word back to its exact rational value.
    Eval {
        #[command(flatten)]
        word: WordInput,
        /// Also list every convergent p_n/q_n.
        #[arg(long)]
        convergents: bool,
    },
    /// Log-domain diameter bounds of the cylinder of a word.
    Cylinder {
        #[command(flatten)]
        word: WordInput,
    },
    /// Seed-set sampling.
    #[command(subcommand)]
    Seed(SeedCommand),
    /// Construct and verify an insertion schedule.
    Schedule {
        #[arg(long)]
        epsilon: f64,
        /// Number of levels n_1 < ... < n_K.
        #[arg(long)]
        horizon: usize,
        #[arg(long)]
        verify_to: Option<u64>,
    },
    /// Splice the schedule's squares W_k into a seed word.
    Insert {
        /// Path to a schedule JSON file.
        #[arg(long)]
        schedule: PathBuf,
        #[command(flatten)]
        word: WordInput,
    },
    /// Invert an insertion: strip the squares W_k back out.
    Eliminate {
        #[arg(long)]
        schedule: PathBuf,
        #[command(flatten)]
        word: WordInput,
    },
    /// Homothetic-pattern search.
    #[command(subcommand)]
    Pattern(PatternCommand),
    /// Run the property and lemma verifiers.
    Verify {
        /// One of: all, ifs, lemmas, mass, holder.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        rng_seed: u64,
        /// Epsilon for the mass and holder suites.
        #[arg(long, default_value_t = 0.2)]
        epsilon: f64,
        #[arg(long, default_value_t = 5)]
        depth: usize,
    },
    /// Box-count dimension scan over a point generator.
    Dim {
        /// Point generator: "calibration" (four-corner IFS) or "seed".
        #[arg(long, default_value = "seed")]
        generator: String,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        /// Sample count for the seed generator.
        #[arg(long, default_value_t = 20000)]
        count: usize,
        #[arg(long, default_value_t = 7)]
        rng_seed: u64,
        #[arg(long)]
        r_min: f64,
        #[arg(long)]
        r_max: f64,
        #[arg(long, default_value_t = 8)]
        steps: usize,
        /// Write the (r, count) table as CSV to this path.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum SeedCommand {
    /// Sample random seed words, one JSON line each.
    Sample {
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 7)]
        rng_seed: u64,
    },
}

#[derive(Subcommand)]
enum PatternCommand {
    /// All copies v + nA of pattern A inside a finite point set S.
    Find {
        /// Pattern JSON file: {"points": [[a,b], ...]}.
        #[arg(long)]
        pattern: PathBuf,
        /// Set JSON file: [[a,b], ...].
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        max_scale: u64,
    },
    /// Scan a sampled digit stream for copies, one JSON line per hit.
    Scan {
        #[arg(long)]
        pattern: PathBuf,
        /// Optional schedule: scan inserted words instead of plain seeds.
        #[arg(long)]
        schedule: Option<PathBuf>,
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 7)]
        rng_seed: u64,
        #[arg(long)]
        max_scale: u64,
    },
}

/// A digit word given inline as JSON ("[[2,2],[0,3]]") or as a file
/// holding either that array or a full DigitSequence object.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct WordInput {
    #[arg(long)]
    word: Option<String>,
    #[arg(long)]
    input: Option<PathBuf>,
}

enum CliError {
    Domain(String),
    Verification(String),
    Io(String),
}

impl From<hcf::Error> for CliError {
    fn from(e: hcf::Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

type CliResult = Result<(), CliError>;

fn parse_word_json(text: &str) -> Result<DigitSequence, CliError> {
    let bad = |e: String| CliError::Domain(format!("cannot parse digit word: {e}"));
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    let (digits_value, exhausted) = match value {
        serde_json::Value::Array(_) => (value, false),
        serde_json::Value::Object(mut obj) => {
            match obj.remove("format") {
                None => {}
                Some(tag) if tag == serde_json::json!(FORMAT) => {}
                Some(other) => return Err(bad(format!("unsupported format tag {other}"))),
            }
            let exhausted = match obj.remove("exhausted") {
                None => false,
                Some(serde_json::Value::Bool(b)) => b,
                Some(other) => return Err(bad(format!("bad 'exhausted' value {other}"))),
            };
            let digits = obj
                .remove("digits")
                .ok_or_else(|| bad("missing 'digits' field".into()))?;
            if let Some(extra) = obj.keys().next() {
                return Err(bad(format!("unknown field '{extra}'")));
            }
            (digits, exhausted)
        }
        other => return Err(bad(format!("expected array or object, found {other}"))),
    };
    let pairs: Vec<GaussianInt> =
        serde_json::from_value(digits_value).map_err(|e| bad(e.to_string()))?;
    Ok(DigitSequence::new(pairs, exhausted)?)
}

impl WordInput {
    fn load(&self) -> Result<DigitSequence, CliError> {
        let text = match (&self.word, &self.input) {
            (Some(w), None) => w.clone(),
            (None, Some(path)) => std::fs::read_to_string(path)?,
            _ => unreachable!("clap group enforces exactly one source"),
        };
        parse_word_json(&text)
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))
}

/// Schedule files carry the versioning "format" field on top of the
/// strict schema; check it and strip it before deserializing.
fn read_schedule(path: &PathBuf) -> Result<InsertionSchedule, CliError> {
    let mut value: serde_json::Value = read_json(path)?;
    if let Some(obj) = value.as_object_mut() {
        match obj.remove("format") {
            None => {}
            Some(tag) if tag == serde_json::json!(FORMAT) => {}
            Some(other) => {
                return Err(CliError::Domain(format!(
                    "{}: unsupported format tag {other}",
                    path.display()
                )));
            }
        }
    }
    serde_json::from_value(value)
        .map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))
}

fn emit<T: Serialize>(value: &T) -> CliResult {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer(&mut out, value).map_err(|e| CliError::Io(e.to_string()))?;
    out.write_all(b"\n")?;
    Ok(())
}

fn word_pairs(seq: &DigitSequence) -> Vec<GaussianInt> {
    seq.digits().to_vec()
}

fn run(cli: Cli) -> CliResult {
    let threads = cli
        .threads
        .or_else(|| std::env::var("HCF_THREADS").ok().and_then(|v| v.parse().ok()));
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Domain(e.to_string()))?;
    }

    match cli.command {
        Command::Expand { re, im, max_digits } => {
            let z = GaussianRational::from_coords(
                parse_fraction(&re).map_err(CliError::Domain)?,
                parse_fraction(&im).map_err(CliError::Domain)?,
            );
            let seq = hurwitz::expand(&z, max_digits)?;
            emit(&json!({
                "format": FORMAT,
                "digits": word_pairs(&seq),
                "exhausted": seq.exhausted,
            }))
        }
        Command::Eval { word, convergents } => {
            let seq = word.load()?;
            let chain = hurwitz::convergents(&seq)?;
            let value = chain.last().unwrap().value()?;
            let mut body = json!({ "format": FORMAT, "value": value });
            if convergents {
                let list: Vec<_> = chain
                    .iter()
                    .map(|c| json!({ "index": c.index, "p": c.p, "q": c.q }))
                    .collect();
                body["convergents"] = json!(list);
            }
            emit(&body)
        }
        Command::Cylinder { word } => {
            let seq = word.load()?;
            let info = ifs::cylinder(&seq)?;
            emit(&json!({
                "format": FORMAT,
                "log_diam_lo": info.log_diam_lo,
                "log_diam_hi": info.log_diam_hi,
            }))
        }
        Command::Seed(SeedCommand::Sample { depth, count, rng_seed }) => {
            if depth == 0 {
                return Err(CliError::Domain("depth must be >= 1".into()));
            }
            // streaming: one JSON line per word, constant memory
            for i in 0..count as u64 {
                let w = seedset::sample_seed_word(
                    depth,
                    rng_seed ^ i.wrapping_mul(0x9e3779b97f4a7c15),
                );
                emit(&json!({ "format": FORMAT, "digits": word_pairs(&w) }))?;
            }
            Ok(())
        }
        Command::Schedule { epsilon, horizon, verify_to } => {
            let s = seedset::make_schedule(epsilon, horizon, verify_to)?;
            emit(&json!({
                "format": FORMAT,
                "epsilon": s.epsilon,
                "t": s.t,
                "levels": s.levels,
                "verified_to": s.verified_to,
            }))
        }
        Command::Insert { schedule, word } => {
            let s = read_schedule(&schedule)?;
            s.verify()?;
            let x = seedset::insert(&word.load()?, &s)?;
            emit(&json!({ "format": FORMAT, "digits": word_pairs(&x) }))
        }
        Command::Eliminate { schedule, word } => {
            let s = read_schedule(&schedule)?;
            s.verify()?;
            let y = seedset::eliminate(&word.load()?, &s)?;
            emit(&json!({ "format": FORMAT, "digits": word_pairs(&y) }))
        }
        Command::Pattern(PatternCommand::Find { pattern, set, max_scale }) => {
            let a: LatticePattern = read_json(&pattern)?;
            let s: Vec<GaussianInt> = read_json(&set)?;
            for copy in patterns::find_copies(&a, &s, max_scale)? {
                emit(&json!({
                    "format": FORMAT,
                    "v": copy.v,
                    "n": copy.n,
                    "verified": true,
                    "scale_independent": copy.scale_independent,
                }))?;
            }
            Ok(())
        }
        Command::Pattern(PatternCommand::Scan {
            pattern,
            schedule,
            depth,
            count,
            rng_seed,
            max_scale,
        }) => {
            let a: LatticePattern = read_json(&pattern)?;
            let schedule = schedule.map(|p| read_schedule(&p)).transpose()?;
            if let Some(s) = &schedule {
                s.verify()?;
            }
            for i in 0..count as u64 {
                let y = seedset::sample_seed_word(
                    depth,
                    rng_seed ^ i.wrapping_mul(0x9e3779b97f4a7c15),
                );
                let stream = match &schedule {
                    Some(s) => seedset::insert(&y, s)?,
                    None => y,
                };
                for (position, copy) in patterns::scan_digit_stream(&a, &stream, max_scale) {
                    emit(&json!({
                        "format": FORMAT,
                        "stream": i,
                        "position": position,
                        "v": copy.v,
                        "n": copy.n,
                    }))?;
                }
            }
            Ok(())
        }
        Command::Verify { suite, trials, rng_seed, epsilon, depth } => {
            let (body, pass) = match suite.as_str() {
                "ifs" => {
                    let report = ifs::verify_ifs_properties(trials, rng_seed);
                    let pass = report.all_pass();
                    (json!({ "format": FORMAT, "suite": "ifs", "report": report }), pass)
                }
                "lemmas" => {
                    let report = analysis::verify_lemmas(trials, rng_seed);
                    (json!({ "format": FORMAT, "suite": "lemmas", "report": report }),
                     report.all_pass())
                }
                "all" => {
                    let ifs_report = ifs::verify_ifs_properties(trials, rng_seed);
                    let lemmas = analysis::verify_lemmas(trials, rng_seed);
                    let pass = ifs_report.all_pass() && lemmas.all_pass();
                    (json!({
                        "format": FORMAT,
                        "suite": "all",
                        "ifs": ifs_report,
                        "lemmas": lemmas,
                    }), pass)
                }
                "mass" => {
                    let radii: Vec<f64> = (0..6).map(|i| 0.1 * 0.5f64.powi(i)).collect();
                    let report = analysis::mass_distribution_check(
                        epsilon, depth, trials, &radii, rng_seed,
                    )?;
                    let pass = report.pass;
                    (json!({ "format": FORMAT, "suite": "mass", "report": report }), pass)
                }
                "holder" => {
                    let schedule = seedset::make_schedule(epsilon, 3, None)?;
                    let fit = analysis::holder_diagnostic(epsilon, &schedule, trials, rng_seed)?;
                    let pass = fit.witness_log_c.is_finite() && fit.stability_fraction >= 0.99;
                    (json!({ "format": FORMAT, "suite": "holder", "report": fit }), pass)
                }
                other => {
                    return Err(CliError::Domain(format!("unknown suite '{other}'")));
                }
            };
            emit(&body)?;
            if pass {
                eprintln!("verify: suite '{suite}' passed");
                Ok(())
            } else {
                Err(CliError::Verification(format!("suite '{suite}' reported failures")))
            }
        }
        Command::Dim { generator, depth, count, rng_seed, r_min, r_max, steps, csv } => {
            let points = match generator.as_str() {
                "calibration" => analysis::calibration_ifs_points(depth),
                "seed" => analysis::seed_set_points(depth, count, rng_seed),
                other => return Err(CliError::Domain(format!("unknown generator '{other}'"))),
            };
            let scan = analysis::dimension_scan(&points, r_min, r_max, steps)?;
            if let Some(path) = csv {
                let mut table = String::from("r,count\n");
                for (r, c) in scan.scales.iter().zip(&scan.counts) {
                    table.push_str(&format!("{r},{c}\n"));
                }
                std::fs::write(&path, table)?;
            }
            eprintln!(
                "dim: {} points, slope {:.4} (R^2 {:.4})",
                points.len(),
                scan.slope,
                scan.r_squared
            );
            emit(&json!({
                "format": FORMAT,
                "method": scan.method,
                "generator": generator,
                "slope": scan.slope,
                "intercept": scan.intercept,
                "r_squared": scan.r_squared,
                "scales": scan.scales,
                "counts": scan.counts,
            }))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Verification(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(4)
        }
    }
}
