//! Seeded Monte Carlo experiments.
//!
//! Sample `i` of an experiment draws its inputs from substream `i` of a
//! stream derived from the configured seed, and all reductions run over the
//! collected per-sample values in index order. Results are therefore
//! bit-identical for any worker count.

mod config;
mod experiments;
mod result;

pub use config::{
    AbschnittConfig, DivergenceConfig, DivergenceTarget, Experiment, ExperimentConfig,
    FatouConfig, LogIntConfig, MzConfig, PathSource, RandomSeries, RandomSpectrum, Target,
    WeakTypeConfig,
};
pub use result::{Check, ColumnSummary, Estimate, ExperimentResult, Record, Relation};

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::SeedStream;
use crate::series::TorusPoint;

/// `m` i.i.d. uniform angles.
pub fn sample_torus<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Result<TorusPoint> {
    if m == 0 {
        return Err(Error::domain("cannot sample a torus of dimension 0"));
    }
    Ok(TorusPoint::sample(m, rng))
}

/// Runs the experiment on a pool of `workers` threads.
pub fn run(config: &ExperimentConfig, workers: usize) -> Result<ExperimentResult> {
    if config.samples == 0 {
        return Err(Error::config("samples must be at least 1"));
    }
    if workers == 0 {
        return Err(Error::config("workers must be at least 1"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Resource(e.to_string()))?;
    pool.install(|| dispatch(config))
}

fn dispatch(config: &ExperimentConfig) -> Result<ExperimentResult> {
    let root = SeedStream::new(config.seed);
    match &config.experiment {
        Experiment::Fatou(c) => experiments::fatou(config, c, &root.channel(101)),
        Experiment::WeakType(c) => experiments::weak_type(config, c, &root.channel(102)),
        Experiment::LogInt(c) => experiments::log_int(config, c, &root.channel(103)),
        Experiment::Mz(c) => experiments::mz(config, c, &root.channel(104)),
        Experiment::Divergence(c) => experiments::divergence(config, c, &root.channel(105)),
        Experiment::Abschnitt(c) => experiments::abschnitt(config, c, &root.channel(106)),
    }
}
