//! Learning-progress metrics and an exact value-iteration oracle.

use crate::error::{Error, Result};
use crate::gridworld::{GridSpec, Position};
use crate::trainer::{EpisodeRecord, GreedyPath};

/// Default cap on densely enumerated state-action pairs.
pub const DEFAULT_PAIR_CAP: u128 = 1_000_000;

/// Median of `values`; the mean of the two middle elements for even lengths.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[mid] } else { (v[mid - 1] + v[mid]) / 2.0 })
}

/// Median step count of the last `n` episodes.
pub fn tail_median_steps(records: &[EpisodeRecord], n: usize) -> Option<f64> {
    if n == 0 || n > records.len() {
        return None;
    }
    let steps: Vec<f64> = records[records.len() - n..].iter().map(|r| r.steps as f64).collect();
    median(&steps)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StabilizationReport {
    /// 1-based start of the first window after which every window stays
    /// within tolerance of the final plateau.
    pub stabilization_episode: Option<usize>,
    pub window: usize,
    pub tolerance: f64,
    /// Median steps of the final window.
    pub final_plateau_steps: f64,
}

/// Finds the earliest episode `e` such that every sliding window of
/// `window` episodes starting at or after `e` has a median step count of at
/// most `(1 + tolerance)` times the final window's median.
pub fn detect_stabilization(
    records: &[EpisodeRecord],
    window: usize,
    tolerance: f64,
) -> Result<StabilizationReport> {
    if window == 0 {
        return Err(Error::invalid("window must be at least 1"));
    }
    if window > records.len() {
        return Err(Error::invalid(format!(
            "window {window} exceeds the {} recorded episodes",
            records.len()
        )));
    }
    if !tolerance.is_finite() || tolerance <= 0.0 {
        return Err(Error::invalid(format!("tolerance {tolerance} must be positive")));
    }
    let steps: Vec<f64> = records.iter().map(|r| r.steps as f64).collect();
    let last_start = steps.len() - window;
    let plateau = median(&steps[last_start..]).expect("window is non-empty");
    let limit = (1.0 + tolerance) * plateau;

    let mut stable_from = 0;
    for start in (0..last_start).rev() {
        let m = median(&steps[start..start + window]).expect("window is non-empty");
        if m > limit {
            stable_from = start + 1;
            break;
        }
    }
    Ok(StabilizationReport {
        stabilization_episode: Some(stable_from + 1),
        window,
        tolerance,
        final_plateau_steps: plateau,
    })
}

/// `episode(b) / episode(a)`.
pub fn scaling_ratio(a: &StabilizationReport, b: &StabilizationReport) -> Result<f64> {
    match (a.stabilization_episode, b.stabilization_episode) {
        (Some(ea), Some(eb)) => Ok(eb as f64 / ea as f64),
        _ => Err(Error::invalid("both reports need a stabilization episode")),
    }
}

/// Median stabilization episode over several runs.
pub fn median_stabilization(reports: &[StabilizationReport]) -> Result<f64> {
    let eps: Option<Vec<f64>> = reports
        .iter()
        .map(|r| r.stabilization_episode.map(|e| e as f64))
        .collect();
    let eps = eps.ok_or_else(|| Error::invalid("a report lacks a stabilization episode"))?;
    median(&eps).ok_or_else(|| Error::invalid("no reports"))
}

pub fn manhattan_distance(spec: &GridSpec) -> u64 {
    spec.manhattan_distance()
}

/// Exact optimal action values of a gridworld, goal treated as absorbing
/// with zero continuation value.
#[derive(Clone, Debug)]
pub struct ExactQ {
    spec: GridSpec,
    values: Vec<f64>,
    pub iterations_used: usize,
    pub residual: f64,
    /// Max absolute change of every sweep, in order.
    pub residual_history: Vec<f64>,
}

impl ExactQ {
    pub fn q(&self, state: &Position, action: usize) -> f64 {
        let a = self.spec.num_actions();
        self.values[self.spec.linear_index(state) * a + action]
    }

    pub fn row(&self, state: &Position) -> &[f64] {
        let a = self.spec.num_actions();
        let i = self.spec.linear_index(state) * a;
        &self.values[i..i + a]
    }

    pub fn state_value(&self, state: &Position) -> f64 {
        self.row(state).iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Lowest-indexed maximizing action, the same tie-break the agent uses.
    pub fn greedy_action(&self, state: &Position) -> usize {
        let mut best = 0;
        let mut best_value = f64::NEG_INFINITY;
        for (a, &q) in self.row(state).iter().enumerate() {
            if q > best_value {
                best_value = q;
                best = a;
            }
        }
        best
    }

    /// Greedy rollout under the exact values, with the visited
    /// `(state, action)` pairs.
    pub fn greedy_path(&self, step_cap: usize) -> (GreedyPath, Vec<(Position, usize)>) {
        let mut state = self.spec.start().clone();
        let mut positions = vec![state.clone()];
        let mut pairs = Vec::new();
        let mut reached_goal = false;
        for _ in 0..step_cap {
            let a = self.greedy_action(&state);
            pairs.push((state.clone(), a));
            state = self.spec.step(&state, a);
            positions.push(state.clone());
            if state == *self.spec.goal() {
                reached_goal = true;
                break;
            }
        }
        (GreedyPath { positions, reached_goal }, pairs)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

pub fn value_iteration(
    spec: &GridSpec,
    discount: f64,
    threshold: f64,
    max_iterations: usize,
) -> Result<ExactQ> {
    value_iteration_with_cap(spec, discount, threshold, max_iterations, DEFAULT_PAIR_CAP)
}

/// Synchronous Bellman optimality backups
/// `Q(s,a) <- R(s') + discount * max_a' Q(s',a')` until the largest change
/// is at most `threshold`.
pub fn value_iteration_with_cap(
    spec: &GridSpec,
    discount: f64,
    threshold: f64,
    max_iterations: usize,
    pair_cap: u128,
) -> Result<ExactQ> {
    if !(0.0..1.0).contains(&discount) {
        return Err(Error::invalid(format!("discount {discount} not in [0, 1)")));
    }
    if threshold.is_nan() || threshold <= 0.0 {
        return Err(Error::invalid(format!("threshold {threshold} must be positive")));
    }
    if max_iterations == 0 {
        return Err(Error::invalid("max_iterations must be at least 1"));
    }
    let actions = spec.num_actions();
    let pairs = spec.cell_count().saturating_mul(actions as u128);
    if pairs > pair_cap {
        return Err(Error::TooLarge { pairs, cap: pair_cap });
    }
    let cells = spec.cell_count() as usize;
    let goal_index = spec.linear_index(spec.goal());

    // Successor cell and reward never change; compute them once.
    let mut successor = vec![0usize; cells * actions];
    let mut reward = vec![0.0; cells * actions];
    for s in 0..cells {
        let pos = spec.position_at(s);
        for a in 0..actions {
            let next = spec.step(&pos, a);
            successor[s * actions + a] = spec.linear_index(&next);
            reward[s * actions + a] = spec.get_reward(&next);
        }
    }

    let mut values = vec![0.0; cells * actions];
    let mut state_max = vec![0.0; cells];
    let mut history = Vec::new();
    for iteration in 1..=max_iterations {
        let mut residual: f64 = 0.0;
        let mut next_values = values.clone();
        for s in 0..cells {
            if s == goal_index {
                continue;
            }
            for a in 0..actions {
                let i = s * actions + a;
                let backup = reward[i] + discount * state_max[successor[i]];
                residual = residual.max((backup - values[i]).abs());
                next_values[i] = backup;
            }
        }
        values = next_values;
        for s in 0..cells {
            state_max[s] = if s == goal_index {
                0.0
            } else {
                values[s * actions..(s + 1) * actions]
                    .iter()
                    .copied()
                    .fold(f64::NEG_INFINITY, f64::max)
            };
        }
        history.push(residual);
        if residual <= threshold {
            return Ok(ExactQ {
                spec: spec.clone(),
                values,
                iterations_used: iteration,
                residual,
                residual_history: history,
            });
        }
    }
    Err(Error::NotConverged {
        iterations: max_iterations,
        residual: history.last().copied().unwrap_or(f64::INFINITY),
    })
}
