//! Tabular Q-learning agent: sparse Q-table, epsilon-greedy selection and the
//! one-step Q-learning update.

use std::io::{self, Write};

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::gridworld::Position;
use crate::rng::RandomSource;

/// Learning hyper-parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AgentConfig {
    pub num_actions: usize,
    /// Step size, in `(0, 1]`.
    pub learning_rate: f64,
    /// Discount, in `[0, 1)`.
    pub discount_factor: f64,
    /// Exploration probability, in `[0, 1]`.
    pub epsilon: f64,
}

impl AgentConfig {
    pub fn new(num_actions: usize, learning_rate: f64, discount_factor: f64, epsilon: f64) -> Result<Self> {
        let cfg = AgentConfig { num_actions, learning_rate, discount_factor, epsilon };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Constructor defaults of the reference agent: alpha 0.1, gamma 0.9, epsilon 0.1.
    pub fn with_defaults(num_actions: usize) -> Result<Self> {
        Self::new(num_actions, 0.1, 0.9, 0.1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_actions == 0 {
            return Err(Error::invalid("num_actions must be at least 1"));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate <= 1.0) {
            return Err(Error::invalid(format!("learning rate {} not in (0, 1]", self.learning_rate)));
        }
        if !(0.0..1.0).contains(&self.discount_factor) {
            return Err(Error::invalid(format!(
                "discount factor {} not in [0, 1)",
                self.discount_factor
            )));
        }
        if !(0.0..=1.0).contains(&self.epsilon) {
            return Err(Error::invalid(format!("epsilon {} not in [0, 1]", self.epsilon)));
        }
        Ok(())
    }
}

/// Sparse `(state, action) -> value` map. Unwritten pairs read as `0.0`.
///
/// Values are stored one row per visited state; a row is created the first
/// time any action of that state is written.
#[derive(Clone, Debug, PartialEq)]
pub struct QTable {
    num_actions: usize,
    rows: FxHashMap<Position, Box<[f64]>>,
}

impl QTable {
    pub fn new(num_actions: usize) -> Self {
        QTable { num_actions, rows: FxHashMap::default() }
    }

    pub fn num_actions(&self) -> usize {
        self.num_actions
    }

    pub fn get_q_value(&self, state: &Position, action: usize) -> Result<f64> {
        self.check_action(action)?;
        Ok(self.value(state, action))
    }

    pub fn set_q_value(&mut self, state: &Position, action: usize, value: f64) -> Result<()> {
        self.check_action(action)?;
        self.row_mut(state)[action] = value;
        Ok(())
    }

    fn check_action(&self, action: usize) -> Result<()> {
        if action >= self.num_actions {
            return Err(Error::invalid(format!(
                "action {action} out of range 0..{}",
                self.num_actions
            )));
        }
        Ok(())
    }

    #[inline]
    pub(crate) fn value(&self, state: &Position, action: usize) -> f64 {
        self.rows.get(state).map_or(0.0, |row| row[action])
    }

    /// Stored row for `state`, if any action of it was ever written.
    pub fn row(&self, state: &Position) -> Option<&[f64]> {
        self.rows.get(state).map(|r| &r[..])
    }

    #[inline]
    fn row_mut(&mut self, state: &Position) -> &mut [f64] {
        if !self.rows.contains_key(state) {
            self.rows.insert(state.clone(), vec![0.0; self.num_actions].into_boxed_slice());
        }
        self.rows.get_mut(state).expect("row just inserted")
    }

    /// `max_a Q(state, a)`, counting unwritten actions as `0.0`.
    #[inline]
    pub fn max_value(&self, state: &Position) -> f64 {
        match self.rows.get(state) {
            Some(row) => row.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            None => 0.0,
        }
    }

    /// Number of states with a stored row.
    pub fn state_count(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn states(&self) -> impl Iterator<Item = &Position> {
        self.rows.keys()
    }

    /// Every stored `(state, action, value)`, in sorted state order.
    pub fn entries(&self) -> Vec<(&Position, usize, f64)> {
        let mut states: Vec<&Position> = self.rows.keys().collect();
        states.sort_unstable();
        states
            .into_iter()
            .flat_map(|s| self.rows[s].iter().enumerate().map(move |(a, &v)| (s, a, v)))
            .collect()
    }

    /// Text dump: `c0,c1,...,action,value` per line, value with 17 significant digits.
    pub fn write_dump<W: Write>(&self, mut out: W) -> io::Result<()> {
        for (state, action, value) in self.entries() {
            for c in state.coords() {
                write!(out, "{c},")?;
            }
            writeln!(out, "{action},{value:.16e}")?;
        }
        Ok(())
    }

    pub fn dump_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_dump(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("dump is ASCII")
    }
}

/// The three quantities of one Q-update.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TdUpdate {
    pub old: f64,
    pub target: f64,
    pub new: f64,
}

/// Epsilon-greedy Q-learning agent owning its table.
#[derive(Clone, Debug)]
pub struct QLearningAgent {
    config: AgentConfig,
    table: QTable,
}

impl QLearningAgent {
    pub fn new(config: AgentConfig) -> Result<Self> {
        config.validate()?;
        Ok(QLearningAgent { config, table: QTable::new(config.num_actions) })
    }

    /// Resumes from an existing table.
    pub fn with_table(config: AgentConfig, table: QTable) -> Result<Self> {
        config.validate()?;
        if table.num_actions() != config.num_actions {
            return Err(Error::invalid(format!(
                "table has {} actions, config has {}",
                table.num_actions(),
                config.num_actions
            )));
        }
        Ok(QLearningAgent { config, table })
    }

    pub fn config(&self) -> &AgentConfig {
        &self.config
    }

    pub fn table(&self) -> &QTable {
        &self.table
    }

    pub fn into_table(self) -> QTable {
        self.table
    }

    pub fn get_q_value(&self, state: &Position, action: usize) -> Result<f64> {
        self.table.get_q_value(state, action)
    }

    /// One coin flip; on exploration a second draw picks the action uniformly.
    #[inline]
    pub fn choose_action(&self, state: &Position, rng: &mut RandomSource) -> usize {
        if rng.unit_float() < self.config.epsilon {
            rng.int_below_unchecked(self.config.num_actions as u64) as usize
        } else {
            self.greedy_action(state)
        }
    }

    #[inline]
    pub fn greedy_action(&self, state: &Position) -> usize {
        greedy_action(&self.table, state)
    }

    /// `Q(s,a) += alpha * (r + gamma * max_a' Q(s',a') - Q(s,a))`.
    ///
    /// The max ranges over every action of `next_state`, including unwritten
    /// ones. Panics if `action` is out of range.
    #[inline]
    pub fn update_q_value(
        &mut self,
        state: &Position,
        action: usize,
        reward: f64,
        next_state: &Position,
    ) -> TdUpdate {
        let best_next = self.table.max_value(next_state);
        let target = reward + self.config.discount_factor * best_next;
        let row = self.table.row_mut(state);
        let old = row[action];
        let new = old + self.config.learning_rate * (target - old);
        row[action] = new;
        TdUpdate { old, target, new }
    }
}

/// Lowest-indexed action with the strictly largest value; `0` for an
/// unvisited state.
pub fn greedy_action(table: &QTable, state: &Position) -> usize {
    let Some(row) = table.row(state) else {
        return 0;
    };
    let mut best = 0;
    let mut best_value = f64::NEG_INFINITY;
    for (a, &q) in row.iter().enumerate() {
        if q > best_value {
            best_value = q;
            best = a;
        }
    }
    best
}
