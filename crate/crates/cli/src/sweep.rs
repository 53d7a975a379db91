//! Cross product of presets and seeds, executed on the batch pool.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use qgrid_core::analysis::median;
use qgrid_core::batch::{derive_seeds, par_map, with_jobs};
use qgrid_core::Preset;

use crate::config::RunConfig;
use crate::{run_single, UsageError};

/// Either an explicit `seeds` list or `base_seed` + `num_seeds`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub presets: Vec<String>,
    #[serde(default)]
    pub seeds: Option<Vec<u64>>,
    #[serde(default)]
    pub base_seed: Option<u64>,
    #[serde(default)]
    pub num_seeds: Option<usize>,
    #[serde(default)]
    pub dump_q: bool,
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self, UsageError> {
        serde_json::from_str(text).map_err(|e| UsageError::new(format!("invalid sweep config: {e}")))
    }

    pub fn resolve(&self) -> Result<(Vec<Preset>, Vec<u64>), UsageError> {
        if self.presets.is_empty() {
            return Err(UsageError::new("sweep needs at least one preset"));
        }
        let presets = self
            .presets
            .iter()
            .map(|p| p.parse::<Preset>())
            .collect::<Result<Vec<_>, _>>()?;
        let seeds = match (&self.seeds, self.num_seeds) {
            (Some(_), Some(_)) => return Err(UsageError::new("give either seeds or num_seeds, not both")),
            (Some(list), None) => list.clone(),
            (None, Some(n)) => derive_seeds(self.base_seed.unwrap_or(0), n),
            (None, None) => return Err(UsageError::new("sweep needs seeds or num_seeds")),
        };
        if seeds.is_empty() {
            return Err(UsageError::new("sweep seed list is empty"));
        }
        Ok((presets, seeds))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PresetSummary {
    pub name: String,
    pub seeds: Vec<u64>,
    pub run_dirs: Vec<String>,
    pub stabilization_episodes: Vec<Option<usize>>,
    pub median_stabilization: Option<f64>,
    pub final_plateau_steps: Vec<Option<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunFailure {
    pub preset: String,
    pub seed: u64,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub presets: Vec<PresetSummary>,
    /// Median stabilization of the last preset over that of the first.
    pub scaling_ratio: Option<f64>,
    pub failures: Vec<RunFailure>,
}

pub const SWEEP_SUMMARY_FILE: &str = "sweep_summary.json";

pub fn run_dir(root: &Path, preset: Preset, seed: u64) -> PathBuf {
    root.join(preset.name()).join(format!("seed-{seed}"))
}

/// Runs every (preset, seed) pair, writes each run directory and
/// `sweep_summary.json`. Individual failures are collected, not fatal.
pub fn run_sweep(cfg: &SweepConfig, root: &Path, jobs: Option<usize>, verbose: bool) -> anyhow::Result<SweepSummary> {
    let (presets, seeds) = cfg.resolve()?;
    let jobs_list: Vec<(Preset, u64)> =
        presets.iter().flat_map(|&p| seeds.iter().map(move |&s| (p, s))).collect();

    let results = with_jobs(jobs, || {
        par_map(&jobs_list, |&(preset, seed)| {
            let run_cfg = RunConfig::from_preset(preset, seed);
            run_single(&run_cfg, &run_dir(root, preset, seed), cfg.dump_q, verbose)
        })
    });

    let mut failures = Vec::new();
    let mut per_preset = Vec::new();
    for (pi, &preset) in presets.iter().enumerate() {
        let mut episodes = Vec::new();
        let mut plateaus = Vec::new();
        let mut dirs = Vec::new();
        for (si, &seed) in seeds.iter().enumerate() {
            dirs.push(run_dir(root, preset, seed).display().to_string());
            match &results[pi * seeds.len() + si] {
                Ok(summary) => {
                    episodes.push(summary.stabilization.episode);
                    plateaus.push(Some(summary.stabilization.final_plateau_steps));
                }
                Err(e) => {
                    episodes.push(None);
                    plateaus.push(None);
                    failures.push(RunFailure { preset: preset.name().into(), seed, error: format!("{e:#}") });
                }
            }
        }
        let found: Vec<f64> = episodes.iter().flatten().map(|&e| e as f64).collect();
        per_preset.push(PresetSummary {
            name: preset.name().into(),
            seeds: seeds.clone(),
            run_dirs: dirs,
            stabilization_episodes: episodes,
            median_stabilization: median(&found),
            final_plateau_steps: plateaus,
        });
    }

    let scaling_ratio = match (per_preset.first(), per_preset.last()) {
        (Some(a), Some(b)) if per_preset.len() > 1 => match (a.median_stabilization, b.median_stabilization) {
            (Some(x), Some(y)) => Some(y / x),
            _ => None,
        },
        _ => None,
    };
    let summary = SweepSummary { presets: per_preset, scaling_ratio, failures };
    std::fs::create_dir_all(root)?;
    std::fs::write(root.join(SWEEP_SUMMARY_FILE), serde_json::to_string_pretty(&summary)? + "\n")?;
    Ok(summary)
}
