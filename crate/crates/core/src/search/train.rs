use std::collections::HashMap;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::config::{AssignmentMode, QasConfig};
use super::optim::{Optimizer, OptimizerState};
use crate::circuit::{self, Architecture, LayoutKey, ParamAssignment, SearchSpace};
use crate::error::{bail, QasError, Result};
use crate::sim::NoiseModel;
use crate::supernet::{AssignmentRecord, BanditState, SupernetEnsemble};
use crate::tasks::Task;

pub(crate) const SAMPLE_STREAM: u64 = 1;
pub(crate) const BANDIT_STREAM: u64 = 2;

/// Everything recorded while training an ensemble.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct TrainHistory {
    pub records: Vec<AssignmentRecord>,
    /// Loss of the chosen store before its update, per iteration.
    pub losses: Vec<f64>,
    /// Set when training stopped early on a non-finite value.
    pub abort: Option<String>,
}

impl TrainHistory {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Architecture text → store index of its most recent assignment.
    pub fn last_assigned(&self) -> HashMap<String, usize> {
        self.records.iter().map(|r| (r.architecture.clone(), r.chosen)).collect()
    }
}

/// One optimizer update of `params` for a fixed architecture. `states` holds
/// one entry per layer. Returns the loss before the update.
pub fn descent_step(
    space: &SearchSpace,
    arch: &Architecture,
    params: &mut ParamAssignment,
    task: &dyn Task,
    noise: &NoiseModel,
    optimizer: &Optimizer,
    states: &mut [OptimizerState],
) -> Result<f64> {
    if states.len() != space.n_layers {
        bail!(Argument, "{} optimizer states for {} layers", states.len(), space.n_layers);
    }
    let lg = circuit::gradient_param_shift(space, arch, params, task, noise)?;
    if !lg.loss.is_finite() {
        bail!(Numeric, "non-finite loss {}", lg.loss);
    }
    let metric = if optimizer.kind.needs_metric() {
        Some(circuit::metric_diagonal(space, arch, params, task, noise)?)
    } else {
        None
    };
    let ppl = space.params_per_layer();
    for (l, (row, state)) in params.layers.iter_mut().zip(states.iter_mut()).enumerate() {
        let range = l * ppl..(l + 1) * ppl;
        let m = metric.as_ref().map(|m| &m[range.clone()]);
        optimizer.step(row, &lg.gradient[range], m, state)?;
    }
    Ok(lg.loss)
}

/// Trains a fresh ensemble for `config.iterations` iterations.
pub fn train(
    config: &QasConfig,
    space: &SearchSpace,
    task: &dyn Task,
) -> Result<(SupernetEnsemble, TrainHistory)> {
    config.validate()?;
    let mut ensemble = SupernetEnsemble::new(space, config.supernets, config.init, config.seed)?;
    let history = train_ensemble(config, &mut ensemble, task)?;
    Ok((ensemble, history))
}

/// Sample, assign, step the winning store only. A non-finite loss or
/// gradient stops training and is reported in [`TrainHistory::abort`].
pub fn train_ensemble(
    config: &QasConfig,
    ensemble: &mut SupernetEnsemble,
    task: &dyn Task,
) -> Result<TrainHistory> {
    let space = ensemble.space().clone();
    if task.n_qubits() != space.n_qubits {
        bail!(Argument, "task has {} qubits, space has {}", task.n_qubits(), space.n_qubits);
    }
    let mut sample_rng = crate::seeded_rng(config.seed, SAMPLE_STREAM);
    let mut bandit_rng = crate::seeded_rng(config.seed, BANDIT_STREAM);
    let mut bandit = match config.assignment {
        AssignmentMode::Bandit => {
            Some(BanditState::new(ensemble.len(), config.iterations, task.loss_bounds())?)
        }
        AssignmentMode::Greedy => None,
    };
    let mut states: Vec<HashMap<LayoutKey, OptimizerState>> = vec![HashMap::new(); ensemble.len()];
    let mut history = TrainHistory::default();
    let noise = config.noise;

    for t in 0..config.iterations {
        let arch = space.sample_uniform(&mut sample_rng);
        let assigned = match bandit.as_mut() {
            Some(b) => ensemble.assign_bandit(&arch, task, &noise, b, &mut bandit_rng),
            None => ensemble.assign_greedy(&arch, task, &noise),
        };
        let mut record = match assigned {
            Ok(r) => r,
            Err(QasError::Numeric(msg)) => {
                history.abort = Some(format!("iteration {t}: {msg}"));
                break;
            }
            Err(e) => return Err(e),
        };
        record.iteration = t;
        if let Some(bad) = record.losses.iter().flatten().find(|l| !l.is_finite()) {
            history.abort = Some(format!("iteration {t}: non-finite loss {bad}"));
            history.records.push(record);
            break;
        }
        let w = record.chosen;
        let keys = arch.layout_keys(&space);
        let mut layer_states: Vec<OptimizerState> =
            keys.iter().map(|k| states[w].remove(k).unwrap_or_default()).collect();
        let mut params = ensemble.store(w).get_params(&arch)?;
        match descent_step(&space, &arch, &mut params, task, &noise, &config.optimizer, &mut layer_states)
        {
            Ok(loss) => {
                ensemble.store_mut(w).write_params(&arch, &params)?;
                for (k, s) in keys.into_iter().zip(layer_states) {
                    states[w].insert(k, s);
                }
                history.losses.push(loss);
                history.records.push(record);
            }
            Err(QasError::Numeric(msg)) => {
                history.abort = Some(format!("iteration {t}: {msg}"));
                history.records.push(record);
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(history)
}
