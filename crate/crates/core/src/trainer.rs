//! Episode loop and greedy rollouts.

use crate::agent::{greedy_action, AgentConfig, QLearningAgent, QTable};
use crate::error::{Error, Result};
use crate::gridworld::{GridSpec, Position};
use crate::rng::RandomSource;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrainConfig {
    pub num_episodes: usize,
    pub max_steps: usize,
    pub seed: u64,
}

impl TrainConfig {
    pub fn new(num_episodes: usize, max_steps: usize, seed: u64) -> Result<Self> {
        let cfg = TrainConfig { num_episodes, max_steps, seed };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_episodes == 0 {
            return Err(Error::invalid("num_episodes must be at least 1"));
        }
        if self.max_steps == 0 {
            return Err(Error::invalid("max_steps must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpisodeRecord {
    /// 1-based.
    pub episode: usize,
    pub total_reward: f64,
    pub steps: usize,
    pub reached_goal: bool,
}

#[derive(Clone, Debug)]
pub struct Training {
    pub table: QTable,
    pub records: Vec<EpisodeRecord>,
}

/// Trains a fresh agent on `spec`. The Q-table persists across episodes.
pub fn train_agent(spec: &GridSpec, agent_config: &AgentConfig, train_config: &TrainConfig) -> Result<Training> {
    train_agent_with(spec, agent_config, train_config, |_| {})
}

/// Like [`train_agent`], calling `on_episode` after every finished episode.
pub fn train_agent_with<F>(
    spec: &GridSpec,
    agent_config: &AgentConfig,
    train_config: &TrainConfig,
    mut on_episode: F,
) -> Result<Training>
where
    F: FnMut(&EpisodeRecord),
{
    train_config.validate()?;
    if agent_config.num_actions != spec.num_actions() {
        return Err(Error::invalid(format!(
            "agent has {} actions but the grid defines {}",
            agent_config.num_actions,
            spec.num_actions()
        )));
    }
    let mut agent = QLearningAgent::new(*agent_config)?;
    let mut rng = RandomSource::new(train_config.seed);
    let goal = spec.goal();
    let mut records = Vec::with_capacity(train_config.num_episodes);

    for episode in 1..=train_config.num_episodes {
        let mut state = spec.start().clone();
        let mut total_reward = 0.0;
        let mut steps = 0;
        loop {
            let action = agent.choose_action(&state, &mut rng);
            let next_state = spec.step(&state, action);
            let reward = spec.get_reward(&next_state);
            agent.update_q_value(&state, action, reward, &next_state);
            total_reward += reward;
            steps += 1;
            state = next_state;
            if state == *goal || steps == train_config.max_steps {
                break;
            }
        }
        let reached_goal = state == *goal;
        let record = EpisodeRecord { episode, total_reward, steps, reached_goal };
        on_episode(&record);
        records.push(record);
    }

    Ok(Training { table: agent.into_table(), records })
}

#[derive(Clone, Debug, PartialEq)]
pub struct GreedyPath {
    /// Starts at the grid's start position.
    pub positions: Vec<Position>,
    pub reached_goal: bool,
}

impl GreedyPath {
    pub fn steps(&self) -> usize {
        self.positions.len().saturating_sub(1)
    }
}

/// Follows the greedy policy from start for at most `step_cap` moves,
/// stopping early at the goal.
pub fn extract_greedy_path(spec: &GridSpec, table: &QTable, step_cap: usize) -> Result<GreedyPath> {
    if step_cap == 0 {
        return Err(Error::invalid("step_cap must be at least 1"));
    }
    if table.num_actions() != spec.num_actions() {
        return Err(Error::invalid(format!(
            "table has {} actions but the grid defines {}",
            table.num_actions(),
            spec.num_actions()
        )));
    }
    let mut state = spec.start().clone();
    let mut positions = vec![state.clone()];
    let mut reached_goal = false;
    for _ in 0..step_cap {
        let action = greedy_action(table, &state);
        state = spec.step(&state, action);
        positions.push(state.clone());
        if state == *spec.goal() {
            reached_goal = true;
            break;
        }
    }
    Ok(GreedyPath { positions, reached_goal })
}
