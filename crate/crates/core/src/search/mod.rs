//! Supernet training, subnet ranking, retraining and regret accounting.

mod config;
mod nsga;
mod optim;
mod pipeline;
mod rank;
mod regret;
mod retrain;
mod train;

pub use config::{AssignmentMode, QasConfig, RankingStrategy, ScoreMode};
pub use nsga::{crowding_distance, nondominated_sort, nsga2, rank_evolutionary, EvolutionConfig};
pub use optim::{Optimizer, OptimizerKind, OptimizerState, ADAM_BETA1, ADAM_BETA2, ADAM_EPSILON};
pub use pipeline::{rank_ensemble, run_qas, RunRecord, TaskSuite};
pub use rank::{
    histogram, histogram_csv, rank_uniform, ranking_csv, sort_entries, HistogramBin, RankingEntry,
    Scorer,
};
pub use regret::{regret, regret_from_table};
pub use retrain::{retrain, EpochRecord, RetrainOutcome};
pub use train::{descent_step, train, train_ensemble, TrainHistory};
