//! `lfunlab`: batch driver for zero scans, identity checks, mean-value
//! quantities and repulsion scans.
//!
//! Exit codes: 0 success, 1 usage or parameter error, 2 zero-count
//! certification failure, 3 I/O error, 4 missing zero set, 5 coefficient
//! cache exceeded, 6 zero set does not cover a required region, 7 a check
//! fell outside its tolerance.

mod commands;
mod config;
mod error;
mod grid;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::commands::{EulerHadamardArgs, IdentityCmd, MeanValueCmd, Session};
use crate::config::{parse_constant, ConfigFile, Overrides, RunConfig, CACHE_DIR_ENV};
use crate::error::{exit, CliError};
use crate::grid::Grid;

#[derive(Parser)]
#[command(name = "lfunlab", version, about = "L-function numerical lab")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// JSON configuration file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Instance name: chi<q>, chi<q>:<index> or delta.
    #[arg(long, global = true)]
    instance: Option<String>,
    /// Number of tau(n) values cached for the delta instance.
    #[arg(long, global = true)]
    delta_cache: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output prefix (reports) or path (zero sets).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Constant override NAME=VALUE; repeatable.
    #[arg(long = "set", global = true, value_parser = parse_constant)]
    constants: Vec<(String, f64)>,
}

#[derive(Subcommand)]
enum Command {
    /// Locate and certify the zeros with 0 <= t <= tmax.
    Zeros {
        #[arg(long)]
        tmax: f64,
    },
    /// Check an identity or bound.
    #[command(subcommand)]
    Identity(IdentityArgs),
    /// Mean-value quantities of the coefficients.
    #[command(subcommand)]
    Meanvalue(MeanValueArgs),
    /// Scan the twist, xi and disc counts over a (y0, lambda) grid.
    Repulsion {
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        #[arg(long, default_value = "6,8,10")]
        y0: Grid,
        #[arg(long, default_value = "0.02,0.05")]
        lambda: Grid,
        #[arg(long)]
        zeroset: Option<PathBuf>,
    },
    /// Concatenate JSON run reports.
    ReportMerge {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
}

#[derive(Subcommand)]
enum IdentityArgs {
    Plancherel {
        #[arg(long, default_value = "0")]
        phi: Grid,
        #[arg(long, default_value = "0.05")]
        lambda: Grid,
        #[arg(long = "T", default_value = "1")]
        t_param: Grid,
    },
    EulerHadamard {
        #[arg(long, default_value = "1.05")]
        sigma: Grid,
        #[arg(long, default_value = "5")]
        t: Grid,
        #[arg(long = "X-log", default_value_t = 20.0)]
        log_x: f64,
        /// Defaults to the eh_k constant.
        #[arg(long)]
        k: Option<f64>,
        /// Disc radii K for the truncated form; omitted means full form only.
        #[arg(long = "K")]
        big_k: Option<Grid>,
        #[arg(long, default_value_t = 40.0)]
        tail_height: f64,
        #[arg(long)]
        zeroset: Option<PathBuf>,
    },
    PowerSaving {
        #[arg(long = "x-grid", default_value = "1e3:1e6:log10")]
        x: Grid,
    },
    Convexity {
        #[arg(long, default_value = "0.5,0.75,1")]
        sigma: Grid,
        #[arg(long, default_value = "0,10,20")]
        t: Grid,
    },
}

#[derive(Subcommand)]
enum MeanValueArgs {
    Halasz {
        #[arg(long = "x-grid", default_value = "1e3:1e6:log10")]
        x: Grid,
    },
    Lipschitz {
        #[arg(long = "x-grid", default_value = "1e3:1e6:log10")]
        x: Grid,
        #[arg(long, default_value = "1,2,5")]
        omega: Grid,
    },
    Twist {
        #[arg(long, default_value = "10")]
        y0: Grid,
    },
    Mertens {
        #[arg(long, default_value = "6,8,10")]
        y0: Grid,
    },
    Cosine {
        #[arg(long, default_value = "1")]
        tau: Grid,
        #[arg(long = "x-grid", default_value = "1e4")]
        x: Grid,
    },
    WeakRamanujan {
        #[arg(long, default_value_t = 1e4)]
        x_max: f64,
    },
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let g = cli.global;
    let file = match &g.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let flags = Overrides {
        instance: g.instance,
        delta_cache: g.delta_cache,
        threads: g.threads,
        out: g.out,
        constants: g.constants,
    };
    let cfg = RunConfig::resolve(file, flags, std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from))?;
    if let Some(n) = cfg.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let mut session = Session::new(cfg);
    match &cli.command {
        Command::Zeros { tmax } => commands::zeros(&mut session, *tmax),
        Command::Identity(args) => {
            let cmd = match args {
                IdentityArgs::Plancherel { phi, lambda, t_param } => IdentityCmd::Plancherel { phi, lambda, t_param },
                IdentityArgs::EulerHadamard { sigma, t, log_x, k, big_k, tail_height, zeroset } => {
                    IdentityCmd::EulerHadamard(EulerHadamardArgs {
                        sigma,
                        t,
                        log_x: *log_x,
                        k: *k,
                        big_k: big_k.as_ref(),
                        tail_height: *tail_height,
                        zeroset: zeroset.as_deref(),
                    })
                }
                IdentityArgs::PowerSaving { x } => IdentityCmd::PowerSaving { x },
                IdentityArgs::Convexity { sigma, t } => IdentityCmd::Convexity { sigma, t },
            };
            commands::identity(&mut session, cmd)
        }
        Command::Meanvalue(args) => {
            let cmd = match args {
                MeanValueArgs::Halasz { x } => MeanValueCmd::Halasz { x },
                MeanValueArgs::Lipschitz { x, omega } => MeanValueCmd::Lipschitz { x, omega },
                MeanValueArgs::Twist { y0 } => MeanValueCmd::Twist { y0 },
                MeanValueArgs::Mertens { y0 } => MeanValueCmd::Mertens { y0 },
                MeanValueArgs::Cosine { tau, x } => MeanValueCmd::Cosine { tau, x },
                MeanValueArgs::WeakRamanujan { x_max } => MeanValueCmd::WeakRamanujan { x_max: *x_max },
            };
            commands::meanvalue(&mut session, cmd)
        }
        Command::Repulsion { delta, y0, lambda, zeroset } => {
            commands::repulsion(&mut session, *delta, y0, lambda, zeroset.as_deref())
        }
        Command::ReportMerge { inputs } => commands::report_merge(&mut session, inputs),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE } else { exit::OK });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("lfunlab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
