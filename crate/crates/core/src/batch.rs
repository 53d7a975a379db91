//! Many independent training runs at once.
//!
//! With the `parallel` feature (default) runs are spread over a rayon pool;
//! without it every entry point falls back to a plain sequential loop. Each
//! run owns its generator, table and records; only the immutable grid is
//! shared.

use crate::analysis::{detect_stabilization, StabilizationReport};
use crate::error::Result;
use crate::presets::Experiment;
use crate::trainer::{extract_greedy_path, train_agent, GreedyPath, Training};

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub seed: u64,
    pub training: Training,
    pub stabilization: StabilizationReport,
    pub path: GreedyPath,
}

/// Trains, detects stabilization and extracts the greedy path (step cap =
/// `max_steps`).
pub fn run_experiment(exp: &Experiment, seed: u64) -> Result<RunOutcome> {
    let training = train_agent(&exp.spec, &exp.agent, &exp.train_config(seed)?)?;
    let stabilization = detect_stabilization(&training.records, exp.window, exp.tolerance)?;
    let path = extract_greedy_path(&exp.spec, &training.table, exp.max_steps)?;
    Ok(RunOutcome { seed, training, stabilization, path })
}

/// `seeds[i] = base + i`.
pub fn derive_seeds(base: u64, count: usize) -> Vec<u64> {
    (0..count as u64).map(|i| base.wrapping_add(i)).collect()
}

pub fn run_seeds_sequential(exp: &Experiment, seeds: &[u64]) -> Vec<Result<RunOutcome>> {
    seeds.iter().map(|&s| run_experiment(exp, s)).collect()
}

#[cfg(feature = "parallel")]
pub fn run_seeds_parallel(exp: &Experiment, seeds: &[u64]) -> Vec<Result<RunOutcome>> {
    use rayon::prelude::*;
    seeds.par_iter().map(|&s| run_experiment(exp, s)).collect()
}

/// Results come back in `seeds` order regardless of scheduling.
pub fn run_seeds(exp: &Experiment, seeds: &[u64]) -> Vec<Result<RunOutcome>> {
    par_map(seeds, |&s| run_experiment(exp, s))
}

/// Order-preserving map, parallel when the feature is on.
pub fn par_map<I, T, F>(inputs: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        inputs.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        inputs.iter().map(f).collect()
    }
}

/// Runs `f` with at most `jobs` worker threads (`None`: rayon's default).
/// Sequential builds ignore `jobs`.
pub fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    #[cfg(feature = "parallel")]
    {
        if let Some(n) = jobs {
            if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
                return pool.install(f);
            }
        }
        f()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = jobs;
        f()
    }
}
