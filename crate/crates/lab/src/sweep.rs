//! Run-level parallel lifespan sweeps.

use blowup_core::damping::DampingProfile;
use blowup_core::exponents::SystemParams;
use blowup_core::simulator::{lifespan_sweep, DataSpec, GridConfig, LifespanRecord, RunConfig};
use rayon::prelude::*;

use crate::LabError;

/// Environment variable capping the number of sweep threads.
pub const THREADS_ENV: &str = "BLOWUP_LAB_THREADS";

/// Thread cap from [`THREADS_ENV`]; `None` when unset, empty or not a
/// positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV).ok().and_then(|s| s.trim().parse().ok()).filter(|&k: &usize| k > 0)
}

/// One independent run per amplitude. Records come back in the order of
/// `eps`, whatever the scheduling.
pub fn parallel_sweep(
    params: &SystemParams,
    b1: &DampingProfile,
    b2: &DampingProfile,
    data: &DataSpec,
    grid: &GridConfig,
    run: &RunConfig,
    eps: &[f64],
) -> Result<Vec<LifespanRecord>, LabError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_cap().unwrap_or(0))
        .build()
        .map_err(|e| LabError::Config(format!("thread pool: {e}")))?;
    let runs: Vec<_> = pool.install(|| {
        eps.par_iter().map(|&e| lifespan_sweep(params, b1, b2, data, grid, run, &[e])).collect()
    });
    let mut out = Vec::with_capacity(eps.len());
    for r in runs {
        out.extend(r?);
    }
    Ok(out)
}
