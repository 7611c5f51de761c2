use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::nsga::EvolutionConfig;
use super::optim::{Optimizer, OptimizerKind};
use crate::error::{bail, Result};
use crate::sim::NoiseModel;
use crate::supernet::InitPolicy;

/// How a sampled subnet is matched to a supernet during training.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum AssignmentMode {
    /// Evaluate all supernets, train the best.
    #[default]
    Greedy,
    /// Exponential-weights bandit, one evaluation per iteration.
    Bandit,
}

/// Which supernet scores a subnet at ranking time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum ScoreMode {
    /// Best loss over all supernets.
    #[default]
    Min,
    /// The supernet the subnet was last assigned to in training; falls back
    /// to `min` for subnets never sampled.
    LastAssigned,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RankingStrategy {
    Uniform,
    Evolutionary {
        population: usize,
        generations: usize,
        #[serde(default)]
        single_objective: bool,
        #[serde(default = "default_crossover")]
        crossover_rate: f64,
        #[serde(default)]
        mutation_rate: Option<f64>,
    },
}

fn default_crossover() -> f64 {
    0.9
}

impl RankingStrategy {
    pub fn evolution(&self) -> Option<EvolutionConfig> {
        match *self {
            RankingStrategy::Uniform => None,
            RankingStrategy::Evolutionary {
                population,
                generations,
                single_objective,
                crossover_rate,
                mutation_rate,
            } => Some(EvolutionConfig {
                population,
                generations,
                crossover_rate,
                mutation_rate,
                single_objective,
            }),
        }
    }
}

impl Default for RankingStrategy {
    fn default() -> Self {
        RankingStrategy::Uniform
    }
}

/// Hyper-parameters of one search run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct QasConfig {
    /// Training iterations `T` (epochs for classification).
    pub iterations: usize,
    /// Number of supernets `W`.
    pub supernets: usize,
    /// Ranking samples `K`.
    pub samples: usize,
    pub optimizer: Optimizer,
    #[serde(default)]
    pub noise: NoiseModel,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub assignment: AssignmentMode,
    #[serde(default)]
    pub init: InitPolicy,
    #[serde(default)]
    pub ranking: RankingStrategy,
    #[serde(default)]
    pub score: ScoreMode,
    #[serde(default)]
    pub retrain_epochs: usize,
    /// Defaults to `optimizer`.
    #[serde(default)]
    pub retrain_optimizer: Option<Optimizer>,
}

impl QasConfig {
    pub fn new(iterations: usize, supernets: usize, samples: usize, optimizer: Optimizer) -> Self {
        QasConfig {
            iterations,
            supernets,
            samples,
            optimizer,
            noise: NoiseModel::noiseless(),
            seed: 0,
            assignment: AssignmentMode::Greedy,
            init: InitPolicy::default(),
            ranking: RankingStrategy::Uniform,
            score: ScoreMode::Min,
            retrain_epochs: 0,
            retrain_optimizer: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 || self.supernets == 0 || self.samples == 0 {
            bail!(Config, "iterations, supernets and samples must all be at least 1");
        }
        self.optimizer.validate()?;
        if let Some(o) = &self.retrain_optimizer {
            o.validate()?;
        }
        self.noise.validate()?;
        if let InitPolicy::Uniform { low, high } = self.init {
            if !(low < high) || !low.is_finite() || !high.is_finite() {
                bail!(Config, "init range [{low}, {high}) is empty");
            }
        }
        if let Some(e) = self.ranking.evolution() {
            if e.population < 2 || e.generations == 0 {
                bail!(Config, "evolutionary ranking needs population >= 2 and generations >= 1");
            }
            if !(0.0..=1.0).contains(&e.crossover_rate)
                || e.mutation_rate.is_some_and(|m| !(0.0..=1.0).contains(&m))
            {
                bail!(Config, "crossover and mutation rates must lie in [0, 1]");
            }
        }
        Ok(())
    }

    pub fn retrain_optimizer(&self) -> Optimizer {
        self.retrain_optimizer.unwrap_or(self.optimizer)
    }
}

impl Default for QasConfig {
    fn default() -> Self {
        QasConfig::new(400, 5, 500, Optimizer::new(OptimizerKind::Adam, 0.05))
    }
}
