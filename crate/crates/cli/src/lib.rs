//! Command-line front end: `build`, `verify` and `potential`.
//!
//! Exit codes: 0 success, 2 validation error, 3 certificate or check
//! failure, 4 I/O error.

pub mod build;
pub mod config;
pub mod error;
pub mod potential;
pub mod report;
pub mod verify;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use utaylor_core::universal::BuildMode;

pub use build::{cmd_build, BuildOutcome};
pub use config::{Params, RunConfig};
pub use error::{CliError, CliResult, EXIT_CERTIFICATE, EXIT_IO, EXIT_OK, EXIT_VALIDATION};
pub use potential::{cmd_potential, PotentialCmd};
pub use report::Check;
pub use verify::{cmd_verify, Suite};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Strict,
    Empirical,
}

#[derive(Debug, Parser)]
#[command(name = "utaylor", version, about = "Build and probe universal Taylor series")]
struct Cli {
    /// Run configuration file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    precision: Option<u32>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Schedule file or `builtin:NAME` (disc-default, disc-deep, strip-default).
    #[arg(long, global = true)]
    schedule: Option<String>,
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long, global = true)]
    walks: Option<u64>,
    #[arg(long, global = true)]
    grid: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a series from a schedule.
    Build {
        #[arg(long)]
        kmax: Option<usize>,
    },
    /// Run a verification suite against a stored series.
    Verify {
        artifact: PathBuf,
        #[arg(long, value_enum)]
        suite: Suite,
        /// Approach-region depth for the plessner suite.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Potential-theory kernels.
    Potential {
        #[command(subcommand)]
        sub: PotentialCmd,
    },
}

fn resolve(cli: &Cli) -> CliResult<RunConfig> {
    let mut c = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(v) = cli.precision {
        c.precision_bits = v;
    }
    if let Some(v) = cli.seed {
        c.seed = v;
    }
    if let Some(v) = &cli.out {
        c.out = v.clone();
    }
    if let Some(v) = &cli.schedule {
        c.schedule = Some(v.clone());
    }
    if let Some(m) = cli.mode {
        c.mode = match m {
            ModeArg::Strict => BuildMode::Strict,
            ModeArg::Empirical => BuildMode::Empirical,
        };
    }
    if let Some(v) = cli.walks {
        c.params.walks = v;
    }
    if let Some(v) = cli.grid {
        c.params.grid = v;
    }
    match &cli.command {
        Command::Build { kmax: Some(k) } => c.params.k_max = Some(*k),
        Command::Verify { depth: Some(d), .. } => c.params.depth = *d,
        _ => {}
    }
    Ok(c)
}

fn failed_checks(checks: &[Check]) -> CliResult<()> {
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::ChecksFailed(format!("failed checks: {}", failed.join("; "))))
    }
}

fn print_checks(checks: &[Check]) {
    for c in checks {
        println!("{} {}: {:e} (bound {:e})", if c.passed { "PASS" } else { "FAIL" }, c.name, c.value, c.bound);
    }
}

fn execute(cli: &Cli) -> CliResult<()> {
    let cfg = resolve(cli)?;
    match &cli.command {
        Command::Build { .. } => {
            let o = cmd_build(&cfg)?;
            println!("built {} steps, {} relaxations", o.series.depth(), o.relaxations);
            for f in &o.files {
                println!("wrote {}", f.display());
            }
            Ok(())
        }
        Command::Verify { artifact, suite, .. } => {
            let o = cmd_verify(&cfg, artifact, *suite)?;
            print_checks(&o.checks);
            failed_checks(&o.checks)
        }
        Command::Potential { sub } => {
            let o = cmd_potential(&cfg, sub)?;
            print_checks(&o.checks);
            for f in &o.files {
                println!("wrote {}", f.display());
            }
            failed_checks(&o.checks)
        }
    }
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
