//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage or configuration error,
//! 3 I/O failure. Diagnostics go to stderr; stdout gets one line of JSON.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::config::Config;
use crate::error::Error;
use crate::experiments::{self, ExperimentOutcome};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Uncovered-point frequencies against the closed-form coverage probability
    CoveringCheck,
    /// First and second moments of intersection local times
    LocaltimeMoments,
    /// Joint moments of overlapping intersections, three ways
    JointMoments,
    /// Sample paths of the limit process
    SimulateZ,
    /// Self-similarity KS test of the limit process
    Selfsim,
    /// Flow local-time means along an n-grid
    FlowConvergence,
    /// KS distance between partial sums and the limit law along an n-grid
    CltCompare,
    /// Derived constants and the effective configuration
    Info,
}

impl Command {
    /// Config table addressed by bare override keys.
    pub fn section(&self) -> Option<&'static str> {
        match self {
            Command::CoveringCheck => Some("covering_check"),
            Command::LocaltimeMoments => Some("localtime_moments"),
            Command::JointMoments => Some("joint_moments"),
            Command::SimulateZ => Some("simulate_z"),
            Command::Selfsim => Some("selfsim"),
            Command::FlowConvergence => Some("flow_convergence"),
            Command::CltCompare => Some("clt_compare"),
            Command::Info => None,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "regen-stable", version, about = "Stable-regenerative multiple-stable processes: simulation and checks")]
struct Args {
    #[command(subcommand)]
    command: Command,
    /// TOML configuration merged over the embedded defaults
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed, overriding `master_seed`
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override a config value; bare keys address the subcommand's table
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    set: Vec<String>,
    /// Output directory, overriding `output_dir`
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (0 = all cores)
    #[arg(long, global = true, env = "REGEN_STABLE_THREADS")]
    threads: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct CliInvocation {
    pub command: Command,
    pub config_path: Option<PathBuf>,
    pub overrides: Vec<String>,
    pub seed: Option<u64>,
    pub out_dir: PathBuf,
    pub threads: usize,
    pub config: Config,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError { code: EXIT_USAGE, message: message.into() }
    }
}

/// Parses arguments and loads, merges and validates the configuration.
pub fn parse_and_validate<I, T>(argv: I) -> Result<CliInvocation, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = Args::try_parse_from(argv).map_err(|e| {
        let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        CliError { code, message: e.to_string() }
    })?;
    let user = match &args.config {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?,
        None => String::new(),
    };
    let mut config = Config::from_toml_str(&user, &args.set, args.command.section())
        .map_err(|e| CliError::usage(format!("invalid configuration: {e}")))?;
    if let Some(seed) = args.seed {
        config.master_seed = seed;
    }
    let out_dir = args.out.clone().unwrap_or_else(|| PathBuf::from(&config.output_dir));
    Ok(CliInvocation {
        command: args.command,
        config_path: args.config,
        overrides: args.set,
        seed: args.seed,
        out_dir,
        threads: args.threads.unwrap_or(0),
        config,
    })
}

fn dispatch(inv: &CliInvocation) -> crate::Result<ExperimentOutcome> {
    let c = &inv.config;
    let seed = c.master_seed;
    match inv.command {
        Command::CoveringCheck => experiments::run_covering_check(&c.covering_check, seed),
        Command::LocaltimeMoments => experiments::run_localtime_moments(&c.localtime_moments, seed),
        Command::JointMoments => experiments::run_joint_moments(&c.joint_moments, seed),
        Command::SimulateZ => experiments::run_simulate_z(&c.simulate_z, seed),
        Command::Selfsim => experiments::run_z_selfsim(&c.selfsim, seed),
        Command::FlowConvergence => experiments::run_flow_convergence(&c.flow_convergence, seed),
        Command::CltCompare => experiments::run_clt_compare(&c.clt_compare, seed),
        Command::Info => unreachable!("info is handled before dispatch"),
    }
}

/// Executes a validated invocation and returns the process exit code.
pub fn run(inv: &CliInvocation) -> i32 {
    if inv.command == Command::Info {
        return match experiments::info_table(&inv.config) {
            Ok(mut table) => {
                table["config"] = serde_json::to_value(&inv.config).unwrap_or_default();
                println!("{}", json!({ "command": "info", "info": table }));
                EXIT_OK
            }
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_USAGE
            }
        };
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(inv.threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return EXIT_USAGE;
        }
    };
    let outcome = match pool.install(|| dispatch(inv)) {
        Ok(o) => o,
        Err(e @ Error::InvalidInput(_)) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_FAILED;
        }
    };
    let (csv, js) = match outcome.write(&inv.out_dir) {
        Ok(paths) => paths,
        Err(e) => {
            eprintln!("error: cannot write outputs to {}: {e}", inv.out_dir.display());
            return EXIT_IO;
        }
    };
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    let failing = outcome.failing();
    for name in &failing {
        eprintln!("failed: {name}");
    }
    println!(
        "{}",
        json!({
            "command": outcome.kind.tag(),
            "passed": outcome.passed(),
            "failing": failing,
            "outputs": [csv, js],
            "summary": outcome.summary,
        })
    );
    if outcome.passed() {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

/// Parse, run, and map everything to an exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match parse_and_validate(argv) {
        Ok(inv) => run(&inv),
        Err(e) if e.code == EXIT_OK => {
            print!("{}", e.message);
            EXIT_OK
        }
        Err(e) => {
            eprintln!("{}", e.message.trim_end());
            e.code
        }
    }
}
