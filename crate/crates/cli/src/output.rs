//! CSV and JSON artifacts of a run.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};

use qgrid_core::{EpisodeRecord, GreedyPath, QTable, RunOutcome, StabilizationReport};

use crate::config::RunConfig;

pub const EPISODES_FILE: &str = "episodes.csv";
pub const PATH_FILE: &str = "path.csv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const QTABLE_FILE: &str = "qtable.txt";

/// `episode,total_reward,steps,cumulative_reward`, floats in shortest
/// round-trip form.
pub fn episodes_csv(records: &[EpisodeRecord]) -> String {
    let mut out = String::from("episode,total_reward,steps,cumulative_reward\n");
    let mut cumulative = 0.0;
    for r in records {
        cumulative += r.total_reward;
        writeln!(out, "{},{},{},{}", r.episode, r.total_reward, r.steps, cumulative).unwrap();
    }
    out
}

/// `step,c0,c1,...` with one row per visited position.
pub fn path_csv(path: &GreedyPath, dim: usize) -> String {
    let mut out = String::from("step");
    for axis in 0..dim {
        write!(out, ",c{axis}").unwrap();
    }
    out.push('\n');
    for (step, p) in path.positions.iter().enumerate() {
        write!(out, "{step}").unwrap();
        for c in p.coords() {
            write!(out, ",{c}").unwrap();
        }
        out.push('\n');
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilizationJson {
    pub episode: Option<usize>,
    pub window: usize,
    pub tolerance: f64,
    pub final_plateau_steps: f64,
}

impl From<&StabilizationReport> for StabilizationJson {
    fn from(r: &StabilizationReport) -> Self {
        StabilizationJson {
            episode: r.stabilization_episode,
            window: r.window,
            tolerance: r.tolerance,
            final_plateau_steps: r.final_plateau_steps,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathJson {
    pub steps: usize,
    pub reached_goal: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub config: RunConfig,
    pub episodes_csv: String,
    pub path_csv: String,
    pub qtable: Option<String>,
    pub stabilization: StabilizationJson,
    pub greedy_path: PathJson,
    pub manhattan_distance: u64,
    pub episodes_reaching_goal: usize,
    pub q_states: usize,
    pub wall_clock_seconds: f64,
}

impl RunSummary {
    pub fn new(config: &RunConfig, outcome: &RunOutcome, manhattan: u64, dumped_q: bool, seconds: f64) -> Self {
        RunSummary {
            config: config.clone(),
            episodes_csv: EPISODES_FILE.into(),
            path_csv: PATH_FILE.into(),
            qtable: dumped_q.then(|| QTABLE_FILE.into()),
            stabilization: (&outcome.stabilization).into(),
            greedy_path: PathJson { steps: outcome.path.steps(), reached_goal: outcome.path.reached_goal },
            manhattan_distance: manhattan,
            episodes_reaching_goal: outcome.training.records.iter().filter(|r| r.reached_goal).count(),
            q_states: outcome.training.table.state_count(),
            wall_clock_seconds: seconds,
        }
    }
}

pub fn write_run(dir: &Path, summary: &RunSummary, outcome: &RunOutcome, dim: usize) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(EPISODES_FILE), episodes_csv(&outcome.training.records))?;
    fs::write(dir.join(PATH_FILE), path_csv(&outcome.path, dim))?;
    if summary.qtable.is_some() {
        write_qtable(&dir.join(QTABLE_FILE), &outcome.training.table)?;
    }
    let json = serde_json::to_string_pretty(summary).map_err(io::Error::other)?;
    fs::write(dir.join(SUMMARY_FILE), json + "\n")
}

pub fn write_qtable(path: &Path, table: &QTable) -> io::Result<()> {
    let file = fs::File::create(path)?;
    let mut w = io::BufWriter::new(file);
    table.write_dump(&mut w)?;
    io::Write::flush(&mut w)
}
