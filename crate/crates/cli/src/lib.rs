//! Library side of the `qgrid` binary: configuration resolution, run and
//! sweep execution, and the CSV/JSON writers.

use std::fmt;
use std::path::Path;
use std::time::Instant;

use anyhow::Context;

use qgrid_core::{detect_stabilization, extract_greedy_path, train_agent_with, RunOutcome};

pub mod config;
pub mod output;
pub mod sweep;

pub use config::{Overrides, RunConfig};
pub use output::RunSummary;
pub use sweep::{run_sweep, SweepConfig, SweepSummary};

/// Invalid user input; the binary maps it to exit code 2.
#[derive(Debug, Clone, PartialEq)]
pub struct UsageError(pub String);

impl UsageError {
    pub fn new(msg: impl Into<String>) -> Self {
        UsageError(msg.into())
    }
}

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

impl From<qgrid_core::Error> for UsageError {
    fn from(e: qgrid_core::Error) -> Self {
        UsageError(e.to_string())
    }
}

/// Trains one agent and writes `episodes.csv`, `path.csv`, `summary.json`
/// (and `qtable.txt` when `dump_q`) into `out`.
pub fn run_single(cfg: &RunConfig, out: &Path, dump_q: bool, verbose: bool) -> anyhow::Result<RunSummary> {
    let (summary, _) = run_single_with_outcome(cfg, out, dump_q, verbose)?;
    Ok(summary)
}

pub fn run_single_with_outcome(
    cfg: &RunConfig,
    out: &Path,
    dump_q: bool,
    verbose: bool,
) -> anyhow::Result<(RunSummary, RunOutcome)> {
    let exp = cfg.experiment()?;
    let started = Instant::now();
    let label = cfg.default_dir_name();
    let training = train_agent_with(&exp.spec, &exp.agent, &exp.train_config(cfg.seed)?, |r| {
        if verbose {
            println!(
                "[{label}] Episode {}: Total Reward = {}, Total Steps = {}",
                r.episode, r.total_reward, r.steps
            );
        }
    })?;
    let stabilization = detect_stabilization(&training.records, exp.window, exp.tolerance)?;
    let path = extract_greedy_path(&exp.spec, &training.table, exp.max_steps)?;
    let seconds = started.elapsed().as_secs_f64();
    let outcome = RunOutcome { seed: cfg.seed, training, stabilization, path };
    let summary = RunSummary::new(cfg, &outcome, exp.spec.manhattan_distance(), dump_q, seconds);
    output::write_run(out, &summary, &outcome, exp.spec.dim())
        .with_context(|| format!("writing results to {}", out.display()))?;
    Ok((summary, outcome))
}

/// Reads the config echo of an earlier `summary.json`.
pub fn load_summary_config(path: &Path) -> anyhow::Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError::new(format!("cannot read {}: {e}", path.display())))?;
    let summary: RunSummary = serde_json::from_str(&text)
        .map_err(|e| UsageError::new(format!("{} is not a run summary: {e}", path.display())))?;
    summary.config.experiment()?;
    Ok(summary.config)
}
