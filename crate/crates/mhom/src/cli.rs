//! Argument parsing and dispatch. `run` returns the exit code and the text
//! for stdout and stderr, so the binary is a thin wrapper.
use crate::compare::{self, CompareConfig};
use crate::error::{Error, Result};
use crate::golden::{resolve_cover, resolve_space};
use crate::homology::{self, Theory};
use crate::report::Report;
use crate::suites::{self, VerifyConfig};
use clap::{Parser, ValueEnum};
use std::ffi::OsString;
use std::path::PathBuf;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Homology groups of a space or pair in one theory
    Homology,
    /// Generator matrices, fill and cancel witnesses, exact sequences
    Compare,
    /// Run a verification suite
    Verify,
}

#[derive(Debug, Parser)]
#[command(name = "mhom", version, about = "Compare singular, Lipschitz and current homology of finite metric complexes")]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    /// Suite name for `verify` (default: all)
    pub suite: Option<String>,
    /// Built-in space name or path to a space file
    #[arg(long)]
    pub space: Option<String>,
    /// Subcomplex name for relative homology
    #[arg(long)]
    pub pair: Option<String>,
    #[arg(long, value_enum, default_value_t = Theory::Singular)]
    pub theory: Theory,
    /// Degree compared by `compare` (default 1)
    #[arg(long)]
    pub degree: Option<usize>,
    /// Built-in cover name or path to a cover file
    #[arg(long)]
    pub cover: Option<String>,
    /// Subdivision depth for cover certificates
    #[arg(long, env = "MHOM_DEPTH", default_value_t = 3)]
    pub depth: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of random cases per suite
    #[arg(long)]
    pub budget: Option<usize>,
    /// Write the JSON report here
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    match execute(&args) {
        Ok(report) => {
            if let Some(path) = &args.out {
                if let Err(e) = std::fs::write(path, report.to_json()) {
                    let msg = format!("cannot write {}: {e}\n", path.display());
                    return Outcome { code: 2, stdout: report.summary(), stderr: msg };
                }
            }
            Outcome { code: report.exit_code(), stdout: report.summary(), stderr: String::new() }
        }
        Err(e) => Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("mhom: {e}\n") },
    }
}

fn required_space(args: &Args) -> Result<crate::format::Space> {
    let name = args.space.as_deref().ok_or_else(|| Error::Usage("--space is required".into()))?;
    resolve_space(name)
}

pub fn execute(args: &Args) -> Result<Report> {
    if args.command != Command::Verify && args.suite.is_some() {
        return Err(Error::Usage(format!("unexpected argument `{}`", args.suite.as_deref().unwrap_or_default())));
    }
    match args.command {
        Command::Homology => homology::run(&required_space(args)?, args.pair.as_deref(), args.theory),
        Command::Compare => {
            let space = required_space(args)?;
            let cover = match resolve_cover(args.cover.as_deref(), &space) {
                Ok(c) => Some(c),
                // a missing default cover only matters when a ladder is needed
                Err(Error::Usage(_)) => None,
                Err(e) => return Err(e),
            };
            let cfg = CompareConfig { degree: args.degree, depth: args.depth, seed: args.seed, samples: args.budget.unwrap_or(12) };
            compare::run(&space, args.pair.as_deref(), cover.as_ref(), &cfg)
        }
        Command::Verify => {
            let space = args.space.as_deref().map(resolve_space).transpose()?;
            let cover = match &args.cover {
                Some(name) => {
                    let on = match &space {
                        Some(s) => s.clone(),
                        None => resolve_space("s1")?,
                    };
                    Some((name.clone(), resolve_cover(Some(name), &on)?))
                }
                None => None,
            };
            let cfg = VerifyConfig { seed: args.seed, budget: args.budget, depth: args.depth, space, cover };
            suites::run(args.suite.as_deref().unwrap_or("all"), &cfg)
        }
    }
}
