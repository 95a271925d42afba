//! Batch experiments for the truncated cubic Schrodinger laboratory.
//!
//! Each experiment reads a flat [`Config`], returns a structured result and
//! renders it as an [`Outcome`] (report, CSV table, optional field dumps).

pub mod config;
pub mod datum;
pub mod exp;
pub mod report;

pub use config::Config;
pub use report::{Outcome, Status, Table};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExpError {
    #[error("config: {0}")]
    Config(String),
    #[error("precondition: {0}")]
    Precondition(String),
    #[error(transparent)]
    Core(#[from] nlslab_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, ExpError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Experiment {
    Dispersive,
    Midpoint,
    Gauge,
    Freqloc,
    Torusplane,
    Nonsqueeze,
    Symplectic,
    Persistence,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::Dispersive,
        Experiment::Midpoint,
        Experiment::Gauge,
        Experiment::Freqloc,
        Experiment::Torusplane,
        Experiment::Nonsqueeze,
        Experiment::Symplectic,
        Experiment::Persistence,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Dispersive => "dispersive",
            Experiment::Midpoint => "midpoint",
            Experiment::Gauge => "gauge",
            Experiment::Freqloc => "freqloc",
            Experiment::Torusplane => "torusplane",
            Experiment::Nonsqueeze => "nonsqueeze",
            Experiment::Symplectic => "symplectic",
            Experiment::Persistence => "persistence",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|e| e.name() == s)
    }
}

/// Reads the experiment's parameters from `cfg`, runs it and renders the outcome.
///
/// The key `seed` is shared by all experiments. Unknown keys are rejected
/// before any computation starts.
pub fn run(exp: Experiment, cfg: &Config) -> Result<Outcome> {
    let seed: u64 = cfg.get("seed", 0)?;
    macro_rules! go {
        ($m:ident) => {{
            let p = exp::$m::Params::from_config(cfg, seed)?;
            cfg.finish()?;
            Ok(exp::$m::run(&p)?.outcome())
        }};
    }
    match exp {
        Experiment::Dispersive => go!(dispersive),
        Experiment::Midpoint => go!(midpoint),
        Experiment::Gauge => go!(gauge),
        Experiment::Freqloc => go!(freqloc),
        Experiment::Torusplane => go!(torusplane),
        Experiment::Nonsqueeze => go!(nonsqueeze),
        Experiment::Symplectic => go!(symplectic),
        Experiment::Persistence => go!(persistence),
    }
}
