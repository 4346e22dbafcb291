//! Command-line surface: `verify`, `markov` and `report`.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::duality::FunctionalSpec;
use crate::error::{Error, Result};
use crate::giry::{self, Kernel};
use crate::harness::{self, FunctionalKind, Report, SuiteConfig};
use crate::measure::{Measure, WeightMap};
use crate::sigma::FinSpace;
use crate::verdict::Outcome;

pub const SEED_ENV: &str = "GIRYLAB_SEED";

#[derive(Parser, Debug)]
#[command(name = "girylab", version, about = "Exact finite-scale Giry monad verification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run a property suite (or `all`) and print a JSON report.
    Verify(VerifyArgs),
    /// Evolve an initial distribution under an endo-kernel, one JSON line per step.
    Markov {
        #[arg(long)]
        kernel: PathBuf,
        #[arg(long)]
        init: PathBuf,
        #[arg(long)]
        steps: usize,
        /// Also print step 0 and tag each line with its step index.
        #[arg(long)]
        trace: bool,
    },
    /// Summarize saved reports.
    Report {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(clap::Args, Debug)]
pub struct VerifyArgs {
    /// monad-laws, duality, change-of-variables, naturality, monoid-reduction, convex-bound, counterexample or all.
    pub suite: String,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<u64>,
    /// key=value file with keys seed, trials, max_carrier, max_arity, max_hull_dim.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub max_carrier: Option<usize>,
    #[arg(long)]
    pub max_arity: Option<usize>,
    #[arg(long)]
    pub max_hull_dim: Option<usize>,
    /// Also write the report as JUnit XML.
    #[arg(long)]
    pub junit: Option<PathBuf>,
    /// Print per-property wall time to stderr.
    #[arg(long)]
    pub timings: bool,
    /// With `naturality`: check one functional on this space instead of the suite.
    #[arg(long, requires = "functional")]
    pub space: Option<PathBuf>,
    #[arg(long, requires = "space")]
    pub functional: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Junit,
}

/// Parses a key=value config file; `#` starts a comment.
pub fn parse_config(text: &str, cfg: &mut SuiteConfig) -> Result<()> {
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("config line {}: expected key=value", lineno + 1)))?;
        let (key, value) = (key.trim(), value.trim().trim_matches('"'));
        let bad = |_| Error::Parse(format!("config line {}: `{value}` is not a valid {key}", lineno + 1));
        match key {
            "seed" => cfg.seed = value.parse().map_err(bad)?,
            "trials" => cfg.trials = value.parse().map_err(bad)?,
            "max_carrier" => cfg.max_carrier = value.parse().map_err(bad)?,
            "max_arity" => cfg.max_arity = value.parse().map_err(bad)?,
            "max_hull_dim" => cfg.max_hull_dim = value.parse().map_err(bad)?,
            other => return Err(Error::Parse(format!("config line {}: unknown key `{other}`", lineno + 1))),
        }
    }
    Ok(())
}

/// Defaults, then `GIRYLAB_SEED`, then the config file, then flags.
pub fn resolve_config(args: &VerifyArgs, env_seed: Option<&str>) -> Result<SuiteConfig> {
    let mut cfg = SuiteConfig::default();
    if let Some(s) = env_seed {
        cfg.seed = s.trim().parse().map_err(|_| Error::Parse(format!("{SEED_ENV}=`{s}` is not a 64-bit seed")))?;
    }
    if let Some(path) = &args.config {
        parse_config(&read(path)?, &mut cfg)?;
    }
    if let Some(v) = args.seed {
        cfg.seed = v;
    }
    if let Some(v) = args.trials {
        cfg.trials = v;
    }
    if let Some(v) = args.max_carrier {
        cfg.max_carrier = v;
    }
    if let Some(v) = args.max_arity {
        cfg.max_arity = v;
    }
    if let Some(v) = args.max_hull_dim {
        cfg.max_hull_dim = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn ingest<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_str(&read(path)?).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn io(e: std::io::Error) -> Error {
    Error::Invalid(format!("write failed: {e}"))
}

/// Exit codes: 0 all pass, 1 some property failed, 2 usage or ingestion error.
pub fn run<I, S>(argv: I, env_seed: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match dispatch(cli.command, env_seed, out, err) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn dispatch(cmd: Command, env_seed: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> Result<bool> {
    match cmd {
        Command::Verify(args) => verify(&args, env_seed, out, err),
        Command::Markov { kernel, init, steps, trace } => markov(&kernel, &init, steps, trace, out),
        Command::Report { paths, format } => report(&paths, format, out),
    }
}

fn verify(args: &VerifyArgs, env_seed: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> Result<bool> {
    let cfg = resolve_config(args, env_seed)?;
    if let (Some(space), Some(functional)) = (&args.space, &args.functional) {
        if args.suite != "naturality" {
            return Err(Error::Invalid("--space/--functional only apply to `verify naturality`".into()));
        }
        let space: FinSpace = ingest(space)?;
        let space = Arc::new(space);
        let spec: FunctionalSpec = ingest(functional)?;
        let phi = spec.build(space.clone())?;
        let kind = match &spec {
            FunctionalSpec::Max => Some(FunctionalKind::Max),
            FunctionalSpec::ClampedSum => Some(FunctionalKind::ClampedSum),
            FunctionalSpec::Square { point } => Some(FunctionalKind::Square { atom: space.atom_of(space.point(point)?) }),
            _ => None,
        };
        let verdicts = harness::naturality_stream(&phi, kind, cfg.trials, cfg.seed, cfg.max_arity);
        for v in &verdicts {
            writeln!(out, "{}", serde_json::to_string(v).expect("serializable")).map_err(io)?;
        }
        return Ok(verdicts.iter().all(|v| v.passed()));
    }
    let report = harness::run_suite(&args.suite, &cfg)?;
    writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("serializable")).map_err(io)?;
    if let Some(path) = &args.junit {
        std::fs::write(path, harness::to_junit(&report)).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    }
    if args.timings {
        for p in &report.properties {
            let _ = writeln!(err, "{:>10.3} ms  {}", p.duration.as_secs_f64() * 1e3, p.name);
        }
    }
    Ok(report.passed)
}

fn markov(kernel: &Path, init: &Path, steps: usize, trace: bool, out: &mut dyn Write) -> Result<bool> {
    let k: Kernel = ingest(kernel)?;
    let pi0: Measure = ingest(init)?;
    let dists = giry::n_step_trace(&k, &pi0, steps)?;
    let skip = if trace { 0 } else { 1 };
    for (step, m) in dists.iter().enumerate().skip(skip) {
        let line = if trace {
            json!({"step": step, "weights": WeightMap(m.weights())})
        } else {
            json!(WeightMap(m.weights()))
        };
        writeln!(out, "{line}").map_err(io)?;
    }
    Ok(true)
}

fn report(paths: &[PathBuf], format: Format, out: &mut dyn Write) -> Result<bool> {
    let reports: Vec<Report> = paths.iter().map(|p| ingest(p)).collect::<Result<_>>()?;
    let passed = reports.iter().all(|r| r.passed);
    match format {
        Format::Json => {
            let summary: Vec<_> = reports
                .iter()
                .map(|r| {
                    json!({
                        "suite": r.suite,
                        "seed": r.config.seed,
                        "passed": r.passed,
                        "properties": r.properties.len(),
                        "failures": r.failures().map(|p| json!({"name": p.name, "anchor": p.anchor, "witness": p.witness})).collect::<Vec<_>>(),
                    })
                })
                .collect();
            writeln!(out, "{}", serde_json::to_string_pretty(&summary).expect("serializable")).map_err(io)?;
        }
        Format::Junit => {
            for r in &reports {
                write!(out, "{}", harness::to_junit(r)).map_err(io)?;
            }
        }
        Format::Text => {
            for r in &reports {
                writeln!(out, "{} (seed {}): {}", r.suite, r.config.seed, if r.passed { "PASS" } else { "FAIL" }).map_err(io)?;
                for p in &r.properties {
                    let mark = if p.result == Outcome::Pass { "PASS" } else { "FAIL" };
                    writeln!(out, "  {mark} {:<55} {:>6} trials  [{}]", p.name, p.trials, p.anchor).map_err(io)?;
                }
            }
        }
    }
    Ok(passed)
}

pub fn main() -> std::process::ExitCode {
    let env_seed = std::env::var(SEED_ENV).ok();
    let code = run(std::env::args_os(), env_seed.as_deref(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::ExitCode::from(code as u8)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(extra: &[&str]) -> VerifyArgs {
        let mut argv = vec!["girylab", "verify"];
        argv.extend_from_slice(extra);
        match Cli::try_parse_from(argv).unwrap().command {
            Command::Verify(a) => a,
            _ => unreachable!(),
        }
    }

    #[test]
    fn config_file_keys() {
        let mut cfg = SuiteConfig::default();
        parse_config("# comment\nseed = 9\ntrials=12\nmax_arity = 3\n", &mut cfg).unwrap();
        assert_eq!((cfg.seed, cfg.trials, cfg.max_arity), (9, 12, 3));
        assert!(parse_config("colour = red", &mut cfg).is_err());
        assert!(parse_config("seed = -1", &mut cfg).is_err());
    }

    #[test]
    fn flags_beat_env() {
        let cfg = resolve_config(&args(&["--seed", "5", "all"]), Some("3")).unwrap();
        assert_eq!(cfg.seed, 5);
        let cfg = resolve_config(&args(&["all"]), Some("3")).unwrap();
        assert_eq!(cfg.seed, 3);
        assert!(resolve_config(&args(&["all"]), Some("x")).is_err());
    }

    #[test]
    fn unknown_flag_is_usage_error() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["girylab", "verify", "--frobnicate", "all"], None, &mut out, &mut err), 2);
        assert!(!err.is_empty());
    }

    #[test]
    fn unknown_suite_is_usage_error() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["girylab", "verify", "monads"], None, &mut out, &mut err), 2);
        assert!(String::from_utf8(err).unwrap().contains("unknown suite"));
    }

    #[test]
    fn zero_trials_rejected_before_work() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["girylab", "verify", "--trials", "0", "all"], None, &mut out, &mut err), 2);
        assert!(out.is_empty());
    }
}
