//! Published experiment configurations.

use std::fmt;
use std::str::FromStr;

use crate::agent::AgentConfig;
use crate::error::{Error, Result};
use crate::gridworld::GridSpec;
use crate::trainer::TrainConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    /// 50x50, start (0,0), goal (49,49), 500 episodes.
    Paper2d,
    /// 50x50x50, start (0,0,0), goal (49,49,49), 5000 episodes.
    Paper3d,
}

/// Everything needed to reproduce one run, apart from the seed.
#[derive(Clone, Debug)]
pub struct Experiment {
    pub spec: GridSpec,
    pub agent: AgentConfig,
    pub num_episodes: usize,
    pub max_steps: usize,
    pub window: usize,
    pub tolerance: f64,
}

impl Experiment {
    pub fn train_config(&self, seed: u64) -> Result<TrainConfig> {
        TrainConfig::new(self.num_episodes, self.max_steps, seed)
    }
}

impl Preset {
    pub const ALL: [Preset; 2] = [Preset::Paper2d, Preset::Paper3d];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Paper2d => "paper-2d",
            Preset::Paper3d => "paper-3d",
        }
    }

    pub fn experiment(self) -> Experiment {
        let (spec, episodes, window) = match self {
            Preset::Paper2d => (
                GridSpec::make_2d(50, 50, [0, 0].into(), [49, 49].into()),
                500,
                25,
            ),
            Preset::Paper3d => (
                GridSpec::make_3d(50, 50, 50, [0, 0, 0].into(), [49, 49, 49].into()),
                5000,
                100,
            ),
        };
        let spec = spec.expect("preset grid is valid");
        let agent = AgentConfig::new(spec.num_actions(), 0.5, 0.5, 0.2).expect("preset agent is valid");
        Experiment { spec, agent, num_episodes: episodes, max_steps: 20_000, window, tolerance: 0.2 }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown preset {s:?} (expected paper-2d or paper-3d)")))
    }
}
