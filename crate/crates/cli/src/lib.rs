//! Subcommands of the `orderflow` binary. Everything here is reachable from
//! tests without spawning a process: each command renders its primary output
//! into a string, and `main` only decides where it goes.

pub mod suite;

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use orderflow_core::codes::is_alternating_code;
use orderflow_core::ergodic::{derive_rng, random_order_with};
use orderflow_core::order::{is_circular_realizable_bounded, DEFAULT_REALIZABILITY_BOUND};
use orderflow_core::ramsey::ramsey_bound;
use orderflow_core::{
    apply_code, is_alternating, minimality_witness, pattern_counts, proximality_witness, reverse, sign_code, BlockCode,
    Error, LinearOrder, Window,
};

use crate::suite::{run_suite, SuiteParams};

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad arguments or unreadable input; exit code 2.
    #[error("{0}")]
    Usage(String),
    /// An invariant or verification failed; exit code 1.
    #[error("{0}")]
    Failure(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) | CliError::Io(_) | CliError::Csv(_) => 1,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "orderflow", version, about = "Finite-window experiments on linear and circular order dynamics")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Master seed; every random choice derives from it.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads for Monte-Carlo chunks (0 = all cores). Output does not
    /// depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "subcommand", rename_all = "lowercase")]
pub enum Command {
    /// Run the invariant suite.
    Verify {
        /// Largest window used by the exhaustive checks.
        #[arg(long, default_value_t = 5)]
        max_window: usize,
        /// Randomized cases per sampled check.
        #[arg(long, default_value_t = 200)]
        cases: usize,
        /// Extra KConfig files to validate.
        #[arg(long = "fixture")]
        fixtures: Vec<PathBuf>,
    },
    /// Orbit-average frequencies of every pattern on a window.
    Frequencies {
        #[arg(long)]
        window: usize,
        #[arg(long)]
        ground: usize,
        #[arg(long)]
        trials: u64,
        /// Starting order on the ground.
        #[arg(long, value_enum, default_value_t = SourceKind::Random)]
        source: SourceKind,
    },
    /// Produce and re-verify a minimality or proximality witness.
    Witness {
        #[arg(long, value_enum)]
        kind: WitnessChoice,
        #[arg(long)]
        ground: usize,
        #[arg(long)]
        window: usize,
        /// Proximality only: use the reverse of the first order as the second.
        #[arg(long)]
        reverse_pair: bool,
    },
    /// Apply a block code to an order file.
    Factor {
        /// `sign-K` for K in 2..=6, or `circular`.
        #[arg(long)]
        code: String,
        #[arg(long)]
        order_file: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceKind {
    Natural,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessChoice {
    Minimality,
    Proximality,
}

/// Everything that determines a run's output.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub command: Command,
    pub seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Self {
        Self { command: cli.command.clone(), seed: cli.common.seed, format: cli.common.format, out: cli.common.out.clone() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("run config serializes")
    }
}

/// Primary output plus diagnostics for stderr.
#[derive(Debug, Default)]
pub struct Outcome {
    pub output: String,
    pub notes: Vec<String>,
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cli.common.workers).build().map_err(usage)?;
    pool.install(|| dispatch(cli))
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    let c = &cli.common;
    match &cli.command {
        Command::Verify { max_window, cases, fixtures } => cmd_verify(
            &SuiteParams { max_window: *max_window, seed: c.seed, random_cases: *cases, fixtures: fixtures.clone() },
            c.format,
        ),
        Command::Frequencies { window, ground, trials, source } => {
            cmd_frequencies(*window, *ground, *trials, *source, c.seed, c.format)
        }
        Command::Witness { kind, ground, window, reverse_pair } => {
            cmd_witness(*kind, *ground, *window, *reverse_pair, c.seed, c.format)
        }
        Command::Factor { code, order_file } => cmd_factor(code, order_file),
    }
}

pub fn cmd_verify(params: &SuiteParams, format: Format) -> Result<Outcome, CliError> {
    if params.max_window < 2 {
        return Err(CliError::Usage("--max-window must be at least 2".to_string()));
    }
    let results = run_suite(params);
    let output = match format {
        Format::Json => serde_json::to_string_pretty(&results).expect("results serialize") + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &results {
                w.serialize(r)?;
            }
            String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv is utf-8")
        }
        Format::Text => results.iter().map(|r| r.line() + "\n").collect(),
    };
    match results.iter().find(|r| !r.passed) {
        Some(first) => Err(CliError::Failure(format!("{output}invariant failed: {}", first.line()))),
        None => Ok(Outcome { output, notes: vec![format!("{} invariants passed", results.len())] }),
    }
}

pub fn cmd_frequencies(
    window: usize,
    ground: usize,
    trials: u64,
    source: SourceKind,
    seed: u64,
    format: Format,
) -> Result<Outcome, CliError> {
    if trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".to_string()));
    }
    if window == 0 {
        return Err(CliError::Usage("--window must be at least 1".to_string()));
    }
    if ground < window {
        return Err(CliError::Usage(format!("--ground {ground} is smaller than --window {window}")));
    }
    let ground_window = Window::range(0, ground);
    let source_order = match source {
        SourceKind::Natural => LinearOrder::natural(ground_window),
        SourceKind::Random => random_order_with(&ground_window, &mut derive_rng(seed, "freq-source", 0)),
    };
    let counts = pattern_counts(&source_order, &Window::range(0, window), trials, seed).map_err(usage)?;
    if counts.hits.iter().sum::<u64>() != trials {
        return Err(CliError::Failure("pattern frequencies do not sum to 1".to_string()));
    }
    let stats = counts.stats();
    let output = match format {
        Format::Json => serde_json::to_string_pretty(&stats).expect("stats serialize") + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["pattern", "window", "exact_num", "exact_den", "empirical", "trials", "seed"])?;
            for s in &stats {
                let r = s.to_record();
                let window: Vec<String> = r.window.iter().map(i64::to_string).collect();
                w.write_record([
                    r.pattern,
                    window.join(","),
                    r.exact_num.to_string(),
                    r.exact_den.to_string(),
                    r.empirical.to_string(),
                    r.trials.to_string(),
                    r.seed.to_string(),
                ])?;
            }
            String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv is utf-8")
        }
        Format::Text => {
            let mut s = String::new();
            for stat in &stats {
                let _ = writeln!(
                    s,
                    "{:<16} exact={:<8} empirical={:.6} trials={} seed={}",
                    stat.pattern.to_string(),
                    stat.exact.to_string(),
                    stat.empirical(),
                    stat.trials,
                    stat.seed
                );
            }
            s
        }
    };
    let outside = stats.iter().filter(|s| !s.within_three_sigma()).count();
    let notes = vec![
        format!("frequencies sum to 1 over {trials} trials"),
        format!("{} of {} patterns within 3 sigma of 1/{}!", stats.len() - outside, stats.len(), window),
    ];
    Ok(Outcome { output, notes })
}

pub fn cmd_witness(
    kind: WitnessChoice,
    ground: usize,
    window: usize,
    reverse_pair: bool,
    seed: u64,
    format: Format,
) -> Result<Outcome, CliError> {
    let needed = match kind {
        WitnessChoice::Minimality => window,
        WitnessChoice::Proximality => ramsey_bound(window),
    };
    if ground < needed {
        return Err(CliError::Usage(format!(
            "ground too small: {} witness on a window of {window} needs a ground of at least {needed}, got {ground}",
            match kind {
                WitnessChoice::Minimality => "minimality",
                WitnessChoice::Proximality => "proximality",
            }
        )));
    }
    let ground_window = Window::range(0, ground);
    let w = Window::range(0, window);
    let (witness, first, second, verified) = match kind {
        WitnessChoice::Minimality => {
            let source = random_order_with(&ground_window, &mut derive_rng(seed, "wit-source", 0));
            let target = random_order_with(&w, &mut derive_rng(seed, "wit-target", 0));
            let wit = minimality_witness(&source, &target).map_err(usage)?;
            let ok = wit.verify_minimality(&source, &target).map_err(|e| CliError::Failure(e.to_string()))?;
            (wit, source, target, ok)
        }
        WitnessChoice::Proximality => {
            let o1 = random_order_with(&ground_window, &mut derive_rng(seed, "wit-o1", 0));
            let o2 = if reverse_pair {
                reverse(&o1)
            } else {
                random_order_with(&ground_window, &mut derive_rng(seed, "wit-o2", 0))
            };
            let wit = proximality_witness(&o1, &o2, &w).map_err(usage)?;
            let ok = wit.verify_proximality(&o1, &o2).map_err(|e| CliError::Failure(e.to_string()))?;
            (wit, o1, o2, ok)
        }
    };
    let verdict = if verified { "PASS" } else { "FAIL" };
    let output = match format {
        Format::Json => {
            #[derive(Serialize)]
            struct WitnessRecord<'a> {
                kind: &'a str,
                window: &'a [i64],
                alpha: String,
                verification: &'a str,
                first: String,
                second: String,
            }
            let record = WitnessRecord {
                kind: witness.kind.as_str(),
                window: witness.checked_window.elements(),
                alpha: witness.alpha.to_string(),
                verification: verdict,
                first: first.to_string(),
                second: second.to_string(),
            };
            serde_json::to_string_pretty(&record).expect("witness serializes") + "\n"
        }
        Format::Csv | Format::Text => {
            let (l1, l2) = match kind {
                WitnessChoice::Minimality => ("source", "target"),
                WitnessChoice::Proximality => ("o1", "o2"),
            };
            format!("{witness}# {l1}: {first}\n# {l2}: {second}\n# verification: {verdict}\n")
        }
    };
    if !verified {
        return Err(CliError::Failure(format!("{output}witness failed re-verification")));
    }
    Ok(Outcome { output, notes: vec![format!("{} witness verified", witness.kind)] })
}

pub fn parse_code(name: &str) -> Result<BlockCode, CliError> {
    if name == "circular" {
        return sign_code(3).map_err(usage);
    }
    let k = name
        .strip_prefix("sign-")
        .and_then(|k| k.parse::<usize>().ok())
        .ok_or_else(|| CliError::Usage(format!("unknown code {name:?}; expected sign-K or circular")))?;
    sign_code(k).map_err(usage)
}

pub fn cmd_factor(code_name: &str, order_file: &PathBuf) -> Result<Outcome, CliError> {
    let code = parse_code(code_name)?;
    let text = std::fs::read_to_string(order_file)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", order_file.display())))?;
    let order: LinearOrder =
        text.parse().map_err(|e: Error| CliError::Usage(format!("{}: {e}", order_file.display())))?;
    let image = apply_code(&code, &order).map_err(usage)?;
    let mut notes = vec![
        format!("alternating: {}", is_alternating(&image)),
        format!("alternating code: {}", is_alternating_code(&code)),
    ];
    if code.k() == 3 {
        let realizable = if order.len() <= DEFAULT_REALIZABILITY_BOUND {
            is_circular_realizable_bounded(&image, DEFAULT_REALIZABILITY_BOUND).map_err(usage)?.to_string()
        } else {
            format!("skipped (window above {DEFAULT_REALIZABILITY_BOUND})")
        };
        notes.push(format!("circular-realizable: {realizable}"));
    }
    Ok(Outcome { output: image.to_string(), notes })
}
