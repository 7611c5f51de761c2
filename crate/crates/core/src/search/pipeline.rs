use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::config::{AssignmentMode, QasConfig};
use super::nsga::rank_evolutionary;
use super::rank::{rank_uniform, RankingEntry, Scorer};
use super::regret::regret;
use super::retrain::{retrain, RetrainOutcome};
use super::train::{train, TrainHistory};
use crate::circuit::{self, Architecture, SearchSpace};
use crate::error::Result;
use crate::supernet::SupernetEnsemble;
use crate::tasks::{ClassificationTask, Dataset, Metric, Split, Task, VqeTask};

pub(crate) const RANK_STREAM: u64 = 3;

/// The task objects one search run needs.
#[derive(Clone)]
pub struct TaskSuite {
    pub name: String,
    /// Differentiable objective for supernet training and retraining.
    pub train: Arc<dyn Task>,
    /// Ranking objective.
    pub rank: Arc<dyn Task>,
    /// Model selection during retraining.
    pub validation: Option<Arc<dyn Task>>,
    /// Losses recorded for the final subnet, by name.
    pub reports: Vec<(String, Arc<dyn Task>)>,
}

impl TaskSuite {
    pub fn vqe(task: VqeTask) -> Self {
        let task: Arc<dyn Task> = Arc::new(task);
        TaskSuite {
            name: "vqe".into(),
            train: task.clone(),
            rank: task.clone(),
            validation: None,
            reports: vec![("energy".into(), task)],
        }
    }

    /// Train on MSE over the training split; rank and select by validation error rate.
    pub fn classification(dataset: Arc<Dataset>, encoding_noise: bool) -> Result<Self> {
        let view = |split, metric| -> Result<Arc<dyn Task>> {
            Ok(Arc::new(
                ClassificationTask::new(dataset.clone(), split, metric)?.with_encoding_noise(encoding_noise),
            ))
        };
        let rank = view(Split::Val, Metric::ErrorRate)?;
        Ok(TaskSuite {
            name: "classify".into(),
            train: view(Split::Train, Metric::Mse)?,
            rank: rank.clone(),
            validation: Some(rank.clone()),
            reports: vec![
                ("train_error".into(), view(Split::Train, Metric::ErrorRate)?),
                ("validation_error".into(), rank),
                ("test_error".into(), view(Split::Test, Metric::ErrorRate)?),
            ],
        })
    }
}

/// Everything a search run produces, serialized as JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct RunRecord {
    pub task: String,
    pub config: QasConfig,
    pub space: SearchSpace,
    pub history: TrainHistory,
    pub regret: Option<f64>,
    pub ranking: Vec<RankingEntry>,
    pub retrain: Option<RetrainOutcome>,
    pub final_architecture: Option<String>,
    pub final_params: Option<Vec<f64>>,
    pub metrics: BTreeMap<String, f64>,
    pub wall_clock_seconds: f64,
}

impl RunRecord {
    pub fn aborted(&self) -> bool {
        self.history.abort.is_some()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Ranks subnets of a trained ensemble per `config`.
pub fn rank_ensemble(
    config: &QasConfig,
    ensemble: &SupernetEnsemble,
    history: &TrainHistory,
    task: &dyn Task,
) -> Result<Vec<RankingEntry>> {
    let scorer = Scorer::new(ensemble, task, config.noise).with_mode(config.score, history);
    let mut rng = crate::seeded_rng(config.seed, RANK_STREAM);
    match config.ranking.evolution() {
        Some(evo) => rank_evolutionary(&scorer, &evo, &mut rng),
        None => rank_uniform(&scorer, config.samples, &mut rng),
    }
}

/// Train, rank, retrain. A numeric abort during training stops the pipeline
/// and returns the partial record.
pub fn run_qas(
    config: &QasConfig,
    space: &SearchSpace,
    suite: &TaskSuite,
) -> Result<(RunRecord, SupernetEnsemble)> {
    let start = Instant::now();
    let (ensemble, history) = train(config, space, suite.train.as_ref())?;
    let mut record = RunRecord {
        task: suite.name.clone(),
        config: config.clone(),
        space: space.clone(),
        regret: None,
        ranking: Vec::new(),
        retrain: None,
        final_architecture: None,
        final_params: None,
        metrics: BTreeMap::new(),
        wall_clock_seconds: 0.0,
        history,
    };
    if config.assignment == AssignmentMode::Greedy {
        record.regret = Some(regret(&record.history.records)?);
    }
    if record.aborted() {
        record.wall_clock_seconds = start.elapsed().as_secs_f64();
        return Ok((record, ensemble));
    }

    record.ranking = rank_ensemble(config, &ensemble, &record.history, suite.rank.as_ref())?;
    let best = record.ranking[0].clone();
    record.metrics.insert("best_ranking_objective".into(), best.objective);
    let arch = Architecture::parse(space, &best.architecture)?;
    let init = ensemble.store(best.store).get_params(&arch)?;
    let outcome = retrain(
        space,
        &arch,
        &init,
        suite.train.as_ref(),
        config.retrain_epochs,
        &config.retrain_optimizer(),
        &config.noise,
        suite.validation.as_deref(),
    )?;
    for (name, task) in &suite.reports {
        let v = circuit::evaluate(space, &arch, &outcome.params, task.as_ref(), &config.noise)?;
        record.metrics.insert(name.clone(), v);
    }
    record.final_architecture = Some(best.architecture);
    record.final_params = Some(outcome.params.flat());
    record.retrain = Some(outcome);
    record.wall_clock_seconds = start.elapsed().as_secs_f64();
    Ok((record, ensemble))
}
