use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use nlslab_experiments::{run, Config, Experiment, Outcome, Status};

#[derive(Parser)]
#[command(version, about = "Batch experiments for truncated cubic Schrodinger dynamics")]
struct Cli {
    #[command(subcommand)]
    experiment: Cmd,
    /// Flat key = value configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (default: out/<experiment>)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Random seed, overriding any `seed` key in the config
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for parallel samples
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write NLSF1 snapshots of the fields an experiment exposes
    #[arg(long, global = true)]
    dump_fields: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Kernel sup norm of the band-limited linear propagator
    Dispersive,
    /// Midpoint-rule error against the Hessian bound
    Midpoint,
    /// Gauge scaling identity and integrator orders
    Gauge,
    /// Truncated flow against frozen-coupling NLS
    Freqloc,
    /// Torus flow against the big-box flow through the pigeonhole cutoffs
    Torusplane,
    /// Weak-pairing observable over a ball of data
    Nonsqueeze,
    /// Symplectic form preservation of the midpoint flow
    Symplectic,
    /// Sobolev ratios and band masses along the flow
    Persistence,
}

impl From<Cmd> for Experiment {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Dispersive => Experiment::Dispersive,
            Cmd::Midpoint => Experiment::Midpoint,
            Cmd::Gauge => Experiment::Gauge,
            Cmd::Freqloc => Experiment::Freqloc,
            Cmd::Torusplane => Experiment::Torusplane,
            Cmd::Nonsqueeze => Experiment::Nonsqueeze,
            Cmd::Symplectic => Experiment::Symplectic,
            Cmd::Persistence => Experiment::Persistence,
        }
    }
}

fn main() -> anyhow::Result<ExitCode> {
    let cli = Cli::parse();
    let exp = Experiment::from(cli.experiment);
    if let Some(k) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let mut cfg = match &cli.config {
        Some(p) => Config::load(p).with_context(|| format!("reading {}", p.display()))?,
        None => Config::empty(),
    };
    if let Some(s) = cli.seed {
        cfg.set("seed", s);
    }
    let out = cli.out.unwrap_or_else(|| PathBuf::from("out").join(exp.name()));
    let outcome = match run(exp, &cfg) {
        Ok(o) => o,
        Err(e) => Outcome::failed(exp.name(), &e.to_string()),
    };
    outcome.write(&out, cli.dump_fields)?;
    println!("{}: {} ({})", exp.name(), outcome.status.as_str(), out.display());
    Ok(if outcome.status == Status::Ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}
