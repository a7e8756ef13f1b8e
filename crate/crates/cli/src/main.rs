//! Command-line front end for the spinning-sideband quantum-computing
//! simulator: spectrum emission, state preparation, the four-item
//! search, and the validation suites. Exit codes: 0 success, 1
//! scientific failure (unconverged, unidentified, failed check), 2
//! usage error (bad flags or config).

mod commands;
mod config;
mod output;

use clap::{Parser, Subcommand, ValueEnum};
use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use commands::{PrepareMethod, SpectrumMode};
use masfloq_core::validate::Suite;

/// A failed invocation: either the user gave us something unusable
/// (exit 2) or the physics did not meet its requirement (exit 1).
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Scientific(String),
}

impl Failure {
    pub fn usage(msg: impl Into<String>) -> Self {
        Failure::Usage(msg.into())
    }

    pub fn scientific(msg: impl Into<String>) -> Self {
        Failure::Scientific(msg.into())
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Scientific(m) => write!(f, "{m}"),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "masfloq", version, about)]
struct Cli {
    /// Experiment configuration (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; one directory per invocation.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for stochastic checks; overrides the config value.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker-thread count; defaults to the number of cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Crystal,
    Powder,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Pass,
    Gradient,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SuiteArg {
    Fast,
    Full,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Emit the FID and spectrum of one dressed level.
    Spectrum {
        /// Spin label of the level (0 or 1).
        #[arg(long)]
        p: u8,
        /// Sideband mode label of the level.
        #[arg(long)]
        m: i64,
        #[arg(long, value_enum, default_value = "crystal")]
        mode: ModeArg,
    },
    /// Emit a preparation recipe for one dressed level and its achieved fidelity.
    Prepare {
        #[arg(long)]
        p: u8,
        #[arg(long)]
        m: i64,
        #[arg(long, value_enum)]
        method: MethodArg,
    },
    /// Run the four-item search and its spectral readout.
    Grover {
        /// Index of the marked working state (0..=3), or "all".
        #[arg(long, default_value = "all")]
        marked: String,
        /// Realize the gates as compiled two-level pulse blocks.
        #[arg(long)]
        compiled: bool,
    },
    /// Run the cross-module invariant suite.
    Validate {
        #[arg(long, value_enum, default_value = "fast")]
        suite: SuiteArg,
    },
}

fn require<'a, T>(opt: &'a Option<T>, flag: &str) -> Result<&'a T, Failure> {
    opt.as_ref()
        .ok_or_else(|| Failure::usage(format!("--{flag} is required for this command")))
}

fn run(cli: &Cli) -> Result<(), Failure> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::usage("--threads must be at least 1"));
        }
        // ignore the error if a pool already exists (tests)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match &cli.command {
        Command::Spectrum { p, m, mode } => {
            let cfg = config::load_config(require(&cli.config, "config")?)?.resolve()?;
            let out = require(&cli.out, "out")?;
            let mode = match mode {
                ModeArg::Crystal => SpectrumMode::Crystal,
                ModeArg::Powder => SpectrumMode::Powder,
            };
            commands::cmd_spectrum(&cfg, *p, *m, mode, out)
        }
        Command::Prepare { p, m, method } => {
            let mut cfg = config::load_config(require(&cli.config, "config")?)?.resolve()?;
            if let Some(seed) = cli.seed {
                cfg.seed = seed;
            }
            let out = require(&cli.out, "out")?;
            let method = match method {
                MethodArg::Pass => PrepareMethod::Pass,
                MethodArg::Gradient => PrepareMethod::Gradient,
            };
            commands::cmd_prepare(&cfg, *p, *m, method, out)
        }
        Command::Grover { marked, compiled } => {
            let cfg = config::load_config(require(&cli.config, "config")?)?.resolve()?;
            let out = require(&cli.out, "out")?;
            commands::cmd_grover(&cfg, marked, *compiled, out)
        }
        Command::Validate { suite } => {
            let seed = match (&cli.seed, &cli.config) {
                (Some(s), _) => *s,
                (None, Some(path)) => config::load_config(path)?.resolve()?.seed,
                (None, None) => 1,
            };
            let suite = match suite {
                SuiteArg::Fast => Suite::Fast,
                SuiteArg::Full => Suite::Full,
            };
            commands::cmd_validate(suite, seed, cli.out.as_deref()).map(|_| ())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Scientific(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
