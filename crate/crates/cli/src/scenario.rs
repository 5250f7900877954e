//! Scenario files: flat TOML with the model parameters and search caps.
//!
//! ```toml
//! group_sizes = [3, 5]
//! F = [0.4]
//! delta = 0.5
//! cost = 0.2
//! ```

use std::path::Path;

use netform_core::{CoordinationMatrix, GroupPartition, ModelParams, SearchSpace, Society};
use serde::Deserialize;

use crate::error::CliError;

pub const DEFAULT_MAX_STEPS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    group_sizes: Vec<usize>,
    #[serde(rename = "F", alias = "f", default)]
    f: Vec<f64>,
    delta: f64,
    cost: f64,
    epsilon: Option<f64>,
    seed: Option<u64>,
    space: Option<String>,
    max_full_n: Option<usize>,
    max_free_pairs: Option<usize>,
    max_steps: Option<usize>,
    convergence_window: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceKind {
    Full,
    Inter,
}

impl std::str::FromStr for SpaceKind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "full" => Ok(SpaceKind::Full),
            "inter" => Ok(SpaceKind::Inter),
            other => Err(CliError::Invalid(format!(
                "space must be \"full\" or \"inter\", got {other:?}"
            ))),
        }
    }
}

/// A validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub group_sizes: Vec<usize>,
    /// Upper triangle of the coordination matrix, row-major, diagonal omitted.
    pub f: Vec<f64>,
    pub delta: f64,
    pub cost: f64,
    pub epsilon: f64,
    pub seed: Option<u64>,
    pub space: SpaceKind,
    pub max_full_n: usize,
    pub max_free_pairs: usize,
    pub max_steps: usize,
    pub convergence_window: usize,
}

impl Scenario {
    pub fn two_group(
        s1: usize,
        s2: usize,
        f12: f64,
        delta: f64,
        cost: f64,
    ) -> Result<Self, CliError> {
        let s = Scenario {
            group_sizes: vec![s1, s2],
            f: vec![f12],
            delta,
            cost,
            epsilon: netform_core::model::DEFAULT_EPSILON,
            seed: None,
            space: SpaceKind::Inter,
            max_full_n: 7,
            max_free_pairs: 24,
            max_steps: DEFAULT_MAX_STEPS,
            convergence_window: 0,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text, path)
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self, CliError> {
        let raw: RawScenario = toml::from_str(text).map_err(|e| {
            let line = e
                .span()
                .map_or(1, |span| text[..span.start].matches('\n').count() + 1);
            CliError::Parse {
                path: path.to_path_buf(),
                line,
                message: e.message().to_string(),
            }
        })?;
        let space = match raw.space.as_deref() {
            None => SpaceKind::Inter,
            Some(s) => s.parse()?,
        };
        let s = Scenario {
            group_sizes: raw.group_sizes,
            f: raw.f,
            delta: raw.delta,
            cost: raw.cost,
            epsilon: raw.epsilon.unwrap_or(netform_core::model::DEFAULT_EPSILON),
            seed: raw.seed,
            space,
            max_full_n: raw.max_full_n.unwrap_or(7),
            max_free_pairs: raw.max_free_pairs.unwrap_or(24),
            max_steps: raw.max_steps.unwrap_or(DEFAULT_MAX_STEPS),
            convergence_window: raw.convergence_window.unwrap_or(0),
        };
        s.validate()?;
        Ok(s)
    }

    /// Re-checks every invariant; called after any field is changed.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.max_steps == 0 {
            return Err(CliError::Invalid("max_steps must be at least 1".into()));
        }
        self.society().map(|_| ())
    }

    pub fn n(&self) -> usize {
        self.group_sizes.iter().sum()
    }

    pub fn params(&self) -> Result<ModelParams, CliError> {
        ModelParams::with_epsilon(self.delta, self.cost, self.epsilon).map_err(CliError::invalid)
    }

    pub fn society(&self) -> Result<Society, CliError> {
        let partition = GroupPartition::contiguous(&self.group_sizes).map_err(CliError::invalid)?;
        let f = CoordinationMatrix::from_upper(self.group_sizes.len(), &self.f)
            .map_err(CliError::invalid)?;
        Society::new(partition, f, self.params()?).map_err(CliError::invalid)
    }

    pub fn search_space(&self) -> SearchSpace {
        match self.space {
            SpaceKind::Full => SearchSpace::FullGraph {
                max_nodes: self.max_full_n,
            },
            SpaceKind::Inter => SearchSpace::Interconnection {
                max_free_pairs: self.max_free_pairs,
            },
        }
    }

    /// `(s1, s2, F12)` for two-group scenarios.
    pub fn two_groups(&self) -> Option<(usize, usize, f64)> {
        match (self.group_sizes.as_slice(), self.f.as_slice()) {
            (&[s1, s2], &[f12]) => Some((s1, s2, f12)),
            _ => None,
        }
    }
}
