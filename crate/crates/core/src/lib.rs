//! Tabular Q-learning on bounded N-dimensional gridworlds.
//!
//! A [`gridworld::GridSpec`] describes the environment, a
//! [`agent::QLearningAgent`] learns on it through
//! [`trainer::train_agent`], and [`analysis`] turns the per-episode records
//! into a stabilization episode. [`analysis::value_iteration`] computes the
//! exact optimal values the learned table should converge to.

pub mod agent;
pub mod analysis;
pub mod batch;
pub mod error;
pub mod gridworld;
pub mod presets;
pub mod rng;
pub mod trainer;

pub use agent::{greedy_action, AgentConfig, QLearningAgent, QTable, TdUpdate};
pub use analysis::{
    detect_stabilization, manhattan_distance, median, scaling_ratio, tail_median_steps, value_iteration,
    ExactQ, StabilizationReport,
};
pub use batch::{run_experiment, run_seeds, RunOutcome};
pub use error::{Error, Result};
pub use gridworld::{ActionOrder, ActionTable, GridSpec, Move, Position};
pub use presets::{Experiment, Preset};
pub use rng::RandomSource;
pub use trainer::{extract_greedy_path, train_agent, train_agent_with, EpisodeRecord, GreedyPath, TrainConfig, Training};
