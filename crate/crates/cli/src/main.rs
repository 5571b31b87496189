//! `affinewalk`: experiment driver for mixing analysis of affine random walks.

mod commands;
mod config;
mod failure;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use config::{ExperimentConfig, MatrixSpec, NRange};
use failure::{exit_code, Failure};

/// Environment variable that fixes the worker thread count.
const THREADS_ENV: &str = "AFFINEWALK_THREADS";

#[derive(Parser)]
#[command(name = "affinewalk", version, about = "Mixing analysis of X_{n+1} = T X_n + B_n on (Z/pZ)^d")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON config file; flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file (default: stdout)
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Dense state budget
    #[arg(long)]
    state_cap: Option<u64>,
    /// Character budget
    #[arg(long)]
    character_cap: Option<u64>,
    /// Orbit length limit (default ceil(10 log2 p))
    #[arg(long)]
    ell_max: Option<u64>,
}

#[derive(Args)]
struct Walk {
    /// Matrix as `2,1;1,1` or `[[2,1],[1,1]]`
    #[arg(long, allow_hyphen_values = true)]
    matrix: Option<MatrixSpec>,
    /// Modulus
    #[arg(long)]
    p: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Characteristic polynomial, eigenvalues and spectral class of T
    Classify {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        walk: Walk,
        /// Moduli to report admissibility for
        #[arg(long, value_delimiter = ',')]
        ps: Option<Vec<u64>>,
        /// Unit-circle tolerance for eigenvalue moduli
        #[arg(long)]
        tol: Option<f64>,
    },
    /// CSV of upper, lower and exact distances for a range of n
    Bounds {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        walk: Walk,
        /// Steps: `a`, `a..b` or `a..=b`
        #[arg(long)]
        n: Option<NRange>,
    },
    /// Least n with distance at most epsilon
    Mixtime {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        walk: Walk,
        #[arg(long)]
        epsilon: Option<f64>,
        /// `ub` (character bound) or `exact` (dense evolution)
        #[arg(long)]
        method: Option<String>,
        /// Largest n to try
        #[arg(long)]
        n_cap: Option<u64>,
    },
    /// Orbit of a character under the transpose of T
    Orbit {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        walk: Walk,
        /// Character, e.g. `1,0`
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        c: Option<Vec<i64>>,
        /// Large-coordinate threshold as a fraction of p
        #[arg(long)]
        c1: Option<f64>,
        /// Survey every nontrivial character instead of one
        #[arg(long)]
        all: bool,
    },
    /// Projection onto an eigenvalue-1 direction and its increment law
    Project {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        walk: Walk,
        /// Block length (default: root-of-unity order of T)
        #[arg(long)]
        m: Option<u32>,
    },
    /// Monte Carlo trajectories from the origin
    Simulate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        walk: Walk,
        #[arg(long)]
        n: Option<NRange>,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Also write every final state to this CSV file
        #[arg(long)]
        dump_states: Option<PathBuf>,
    },
    /// Mixing times over a grid of matrices and moduli
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Repeat for several matrices
        #[arg(long, allow_hyphen_values = true)]
        matrix: Vec<MatrixSpec>,
        /// Row labels, one per matrix
        #[arg(long)]
        tag: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        ps: Option<Vec<u64>>,
        #[arg(long)]
        epsilon: Option<f64>,
        /// `ub`, `exact` or `projected`
        #[arg(long)]
        method: Option<String>,
        #[arg(long)]
        n_cap: Option<u64>,
        /// Write the full report with fits as JSON here
        #[arg(long)]
        summary: Option<PathBuf>,
    },
}

fn base_config(common: &Common) -> Result<ExperimentConfig> {
    let file = match &common.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    Ok(file.overlay(ExperimentConfig {
        state_cap: common.state_cap,
        character_cap: common.character_cap,
        ell_max: common.ell_max,
        ..Default::default()
    }))
}

fn with_walk(common: &Common, walk: Walk, extra: ExperimentConfig) -> Result<ExperimentConfig> {
    Ok(base_config(common)?.overlay(ExperimentConfig { matrix: walk.matrix, p: walk.p, ..extra }))
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let threads: usize = raw
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Failure::Config(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    configure_threads()?;
    match cli.command {
        Command::Classify { common, walk, ps, tol } => {
            let cfg = with_walk(&common, walk, ExperimentConfig { ps, tol, ..Default::default() })?;
            commands::classify_cmd(cfg, common.output.as_deref())
        }
        Command::Bounds { common, walk, n } => {
            let cfg = with_walk(&common, walk, ExperimentConfig { n, ..Default::default() })?;
            commands::bounds_cmd(cfg, common.output.as_deref())
        }
        Command::Mixtime { common, walk, epsilon, method, n_cap } => {
            let cfg = with_walk(&common, walk, ExperimentConfig { epsilon, method, n_cap, ..Default::default() })?;
            commands::mixtime_cmd(cfg, common.output.as_deref())
        }
        Command::Orbit { common, walk, c, c1, all } => {
            let cfg = with_walk(&common, walk, ExperimentConfig { c, c1, ..Default::default() })?;
            commands::orbit_cmd(cfg, all, common.output.as_deref())
        }
        Command::Project { common, walk, m } => {
            let cfg = with_walk(&common, walk, ExperimentConfig { m, ..Default::default() })?;
            commands::project_cmd(cfg, common.output.as_deref())
        }
        Command::Simulate { common, walk, n, samples, seed, dump_states } => {
            let cfg = with_walk(&common, walk, ExperimentConfig { n, samples, seed, ..Default::default() })?;
            commands::simulate_cmd(cfg, dump_states.as_deref(), common.output.as_deref())
        }
        Command::Sweep { common, matrix, tag, ps, epsilon, method, n_cap, summary } => {
            let flags = ExperimentConfig {
                matrices: (!matrix.is_empty()).then_some(matrix),
                tags: (!tag.is_empty()).then_some(tag),
                ps,
                epsilon,
                method,
                n_cap,
                ..Default::default()
            };
            let cfg = base_config(&common)?.overlay(flags);
            commands::sweep_cmd(cfg, summary.as_deref(), common.output.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
