//! Resolved run configuration. Serialized verbatim into `summary.json` so a
//! run can be replayed from its own summary.

use serde::{Deserialize, Serialize};

use qgrid_core::{AgentConfig, Experiment, GridSpec, Position, Preset};

use crate::UsageError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Label only; every parameter below is explicit.
    pub preset: Option<String>,
    pub dims: Vec<u32>,
    pub start: Vec<i32>,
    pub goal: Vec<i32>,
    pub episodes: usize,
    pub max_steps: usize,
    pub alpha: f64,
    pub gamma: f64,
    pub epsilon: f64,
    pub goal_reward: f64,
    pub step_reward: f64,
    pub seed: u64,
    pub window: usize,
    pub tolerance: f64,
}

/// Optional overrides, typically from command-line flags.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub preset: Option<Preset>,
    pub dims: Option<Vec<u32>>,
    pub start: Option<Vec<i32>>,
    pub goal: Option<Vec<i32>>,
    pub episodes: Option<usize>,
    pub max_steps: Option<usize>,
    pub alpha: Option<f64>,
    pub gamma: Option<f64>,
    pub epsilon: Option<f64>,
    pub goal_reward: Option<f64>,
    pub step_reward: Option<f64>,
    pub seed: Option<u64>,
    pub window: Option<usize>,
    pub tolerance: Option<f64>,
}

impl RunConfig {
    pub fn from_preset(preset: Preset, seed: u64) -> Self {
        let exp = preset.experiment();
        RunConfig {
            preset: Some(preset.name().to_string()),
            dims: exp.spec.extents().to_vec(),
            start: exp.spec.start().coords().to_vec(),
            goal: exp.spec.goal().coords().to_vec(),
            episodes: exp.num_episodes,
            max_steps: exp.max_steps,
            alpha: exp.agent.learning_rate,
            gamma: exp.agent.discount_factor,
            epsilon: exp.agent.epsilon,
            goal_reward: exp.spec.goal_reward(),
            step_reward: exp.spec.step_reward(),
            seed,
            window: exp.window,
            tolerance: exp.tolerance,
        }
    }

    /// Starts from the preset (if any) and applies every override. Without a
    /// preset `dims` is required; start defaults to the origin and goal to
    /// the far corner.
    pub fn resolve(o: Overrides) -> Result<Self, UsageError> {
        let mut cfg = match (o.preset, &o.dims) {
            (Some(p), _) => RunConfig::from_preset(p, 0),
            (None, Some(dims)) => {
                if dims.is_empty() {
                    return Err(UsageError::new("--dims needs at least one axis"));
                }
                let defaults = AgentConfig::with_defaults(2 * dims.len()).map_err(UsageError::from)?;
                RunConfig {
                    preset: None,
                    dims: dims.clone(),
                    start: vec![0; dims.len()],
                    goal: dims.iter().map(|&e| e.saturating_sub(1) as i32).collect(),
                    episodes: 500,
                    max_steps: 20_000,
                    alpha: defaults.learning_rate,
                    gamma: defaults.discount_factor,
                    epsilon: defaults.epsilon,
                    goal_reward: 1.0,
                    step_reward: 0.0,
                    seed: 0,
                    window: 25,
                    tolerance: 0.2,
                }
            }
            (None, None) => return Err(UsageError::new("either --preset or --dims is required")),
        };
        if o.preset.is_some() && (o.dims.is_some() || o.start.is_some() || o.goal.is_some()) {
            cfg.preset = None;
        }
        macro_rules! apply {
            ($($field:ident),*) => { $( if let Some(v) = o.$field { cfg.$field = v; } )* };
        }
        apply!(dims, start, goal, episodes, max_steps, alpha, gamma, epsilon, goal_reward, step_reward, seed, window, tolerance);
        cfg.experiment()?;
        Ok(cfg)
    }

    /// Builds and validates the experiment this config describes.
    pub fn experiment(&self) -> Result<Experiment, UsageError> {
        let spec = GridSpec::from_extents(
            self.dims.clone(),
            Position::from(self.start.clone()),
            Position::from(self.goal.clone()),
        )?
        .with_rewards(self.goal_reward, self.step_reward);
        let agent = AgentConfig::new(spec.num_actions(), self.alpha, self.gamma, self.epsilon)?;
        let exp = Experiment {
            spec,
            agent,
            num_episodes: self.episodes,
            max_steps: self.max_steps,
            window: self.window,
            tolerance: self.tolerance,
        };
        exp.train_config(self.seed)?;
        if self.window == 0 || self.window > self.episodes {
            return Err(UsageError::new(format!(
                "window {} must lie in 1..={} (the episode count)",
                self.window, self.episodes
            )));
        }
        if !self.tolerance.is_finite() || self.tolerance <= 0.0 {
            return Err(UsageError::new(format!("tolerance {} must be positive", self.tolerance)));
        }
        Ok(exp)
    }

    /// Directory name used when no explicit output directory is given.
    pub fn default_dir_name(&self) -> String {
        format!("{}-seed{}", self.preset.as_deref().unwrap_or("custom"), self.seed)
    }
}

pub fn parse_dims(s: &str) -> Result<Vec<u32>, String> {
    s.split(['x', 'X'])
        .map(|part| {
            part.trim()
                .parse::<u32>()
                .map_err(|_| format!("bad extent {part:?} in {s:?} (expected e.g. 50x50)"))
        })
        .collect()
}

pub fn parse_coords(s: &str) -> Result<Vec<i32>, String> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<i32>()
                .map_err(|_| format!("bad coordinate {part:?} in {s:?} (expected e.g. 0,0)"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_and_coords() {
        assert_eq!(parse_dims("50x50x50").unwrap(), vec![50, 50, 50]);
        assert_eq!(parse_dims("7").unwrap(), vec![7]);
        assert!(parse_dims("5x").is_err());
        assert_eq!(parse_coords("0, 4").unwrap(), vec![0, 4]);
        assert!(parse_coords("a,1").is_err());
    }

    #[test]
    fn preset_with_overrides() {
        let cfg = RunConfig::resolve(Overrides {
            preset: Some(Preset::Paper2d),
            seed: Some(7),
            episodes: Some(100),
            ..Default::default()
        })
        .unwrap();
        assert_eq!(cfg.preset.as_deref(), Some("paper-2d"));
        assert_eq!((cfg.seed, cfg.episodes, cfg.max_steps), (7, 100, 20_000));
        assert_eq!(cfg.default_dir_name(), "paper-2d-seed7");
    }

    #[test]
    fn geometry_override_drops_preset_label() {
        let cfg = RunConfig::resolve(Overrides {
            preset: Some(Preset::Paper2d),
            dims: Some(vec![10, 10]),
            goal: Some(vec![9, 9]),
            ..Default::default()
        })
        .unwrap();
        assert_eq!(cfg.preset, None);
    }

    #[test]
    fn custom_defaults() {
        let cfg = RunConfig::resolve(Overrides { dims: Some(vec![5, 5, 5, 5]), ..Default::default() }).unwrap();
        assert_eq!(cfg.goal, vec![4, 4, 4, 4]);
        assert_eq!((cfg.alpha, cfg.gamma, cfg.epsilon), (0.1, 0.9, 0.1));
        assert_eq!(cfg.experiment().unwrap().spec.num_actions(), 8);
    }

    #[test]
    fn invalid_inputs() {
        assert!(RunConfig::resolve(Overrides::default()).is_err());
        let bad_goal = Overrides { dims: Some(vec![5, 5]), goal: Some(vec![5, 4]), ..Default::default() };
        assert!(RunConfig::resolve(bad_goal).is_err());
        let bad_window = Overrides { dims: Some(vec![5, 5]), episodes: Some(10), ..Default::default() };
        assert!(RunConfig::resolve(bad_window).is_err());
        let bad_eps = Overrides { preset: Some(Preset::Paper3d), epsilon: Some(2.0), ..Default::default() };
        assert!(RunConfig::resolve(bad_eps).is_err());
    }
}
