use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Instant, SystemTime};

use clap::{Args, Parser, Subcommand};

mod commands;
mod config;
mod manifest;

use config::{Params, Resolved};
use manifest::Output;

pub const SECTIONS: &[&str] = &["intensity", "cluster_scan", "clt", "variance", "density_check", "covering_demo"];

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(zerolab::Error),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Numerical(e) => write!(f, "numerical failure: {e}"),
            CliError::Io(m) => write!(f, "I/O error: {m}"),
        }
    }
}

impl From<zerolab::Error> for CliError {
    fn from(e: zerolab::Error) -> Self {
        match e {
            zerolab::Error::Io(e) => CliError::Io(e.to_string()),
            e if e.is_numerical() => CliError::Numerical(e),
            e => CliError::Usage(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(name = "zerolab", version, about = "Experiments on the zeros of Gaussian entire functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// TOML configuration file; sections default when absent.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Override the base seed.
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,
    /// Output directory (default: $ZEROLAB_OUTPUT_ROOT/<command>-<hash>).
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Worker threads (default: available cores).
    #[arg(long, value_name = "N", value_parser = clap::value_parser!(u32).range(1..))]
    workers: Option<u32>,
    /// Override the replica or sample count of the subcommand.
    #[arg(long, value_name = "N")]
    replicas: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// k-point intensities and truncated correlations over radial sweeps.
    Intensity(Common),
    /// Clustering gaps of separated groups as the separation grows.
    ClusterScan(Common),
    /// Normality diagnostics of zero counts over several scales.
    Clt(Common),
    /// Spectral variance, its lower bound, superhomogeneity and the mollifier.
    Variance(Common),
    /// Gaussian polynomial zero moduli against the closed-form density.
    DensityCheck(Common),
    /// Covering of random point sets by separated disks.
    CoveringDemo(Common),
}

fn run<T: Params>(common: &Common, compute: fn(&Resolved<T>) -> Result<Vec<Output>, CliError>) -> Result<(), CliError> {
    let started = (SystemTime::now(), Instant::now());
    let cfg = config::load::<T>(common.config.as_deref(), common.seed, common.replicas)?;
    if let Some(n) = common.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot size worker pool: {e}")))?;
    }
    let outputs = compute(&cfg)?;
    let dir = manifest::output_dir(common.out.as_deref(), &cfg.command, &cfg.hash());
    let written = manifest::write_run(&dir, &cfg, outputs, started)?;
    for p in written {
        println!("{}", p.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Intensity(c) => run(c, commands::intensity),
        Command::ClusterScan(c) => run(c, commands::cluster_scan),
        Command::Clt(c) => run(c, commands::clt),
        Command::Variance(c) => run(c, commands::variance),
        Command::DensityCheck(c) => run(c, commands::density_check),
        Command::CoveringDemo(c) => run(c, commands::covering_demo),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("zerolab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
