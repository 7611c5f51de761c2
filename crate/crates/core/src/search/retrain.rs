use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::optim::{Optimizer, OptimizerState};
use super::train::descent_step;
use crate::circuit::{self, Architecture, ParamAssignment, SearchSpace};
use crate::error::{bail, Result};
use crate::sim::NoiseModel;
use crate::tasks::Task;

/// Loss of the parameters held after `epoch` updates (0 = warm start).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct EpochRecord {
    pub epoch: usize,
    pub loss: f64,
    pub validation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct RetrainOutcome {
    /// Selected parameters: best validation objective (latest epoch on ties),
    /// or the last epoch when there is no validation task.
    pub params: ParamAssignment,
    pub selected_epoch: usize,
    pub trajectory: Vec<EpochRecord>,
}

impl RetrainOutcome {
    pub fn initial_loss(&self) -> f64 {
        self.trajectory[0].loss
    }

    pub fn final_loss(&self) -> f64 {
        self.trajectory.last().expect("trajectory has epoch 0").loss
    }

    pub fn selected(&self) -> &EpochRecord {
        &self.trajectory[self.selected_epoch]
    }
}

/// Plain descent on one fixed architecture from `init`.
#[allow(clippy::too_many_arguments)]
pub fn retrain(
    space: &SearchSpace,
    arch: &Architecture,
    init: &ParamAssignment,
    task: &dyn Task,
    epochs: usize,
    optimizer: &Optimizer,
    noise: &NoiseModel,
    validation: Option<&dyn Task>,
) -> Result<RetrainOutcome> {
    optimizer.validate()?;
    init.validate_for(space)?;
    let mut params = init.clone();
    let mut states = vec![OptimizerState::default(); space.n_layers];
    let mut trajectory = Vec::with_capacity(epochs + 1);
    let mut best: Option<(f64, usize, ParamAssignment)> = None;

    let validate = |p: &ParamAssignment| -> Result<Option<f64>> {
        validation.map(|v| circuit::evaluate(space, arch, p, v, noise)).transpose()
    };
    let mut consider = |epoch: usize, v: Option<f64>, p: &ParamAssignment| {
        if let Some(v) = v {
            if best.as_ref().map_or(true, |(b, _, _)| v <= *b) {
                best = Some((v, epoch, p.clone()));
            }
        }
    };

    for epoch in 0..epochs {
        let v = validate(&params)?;
        consider(epoch, v, &params);
        let loss = descent_step(space, arch, &mut params, task, noise, optimizer, &mut states)?;
        trajectory.push(EpochRecord { epoch, loss, validation: v });
    }
    let loss = circuit::evaluate(space, arch, &params, task, noise)?;
    if !loss.is_finite() {
        bail!(Numeric, "non-finite loss {loss} after {epochs} epochs");
    }
    let v = validate(&params)?;
    consider(epochs, v, &params);
    trajectory.push(EpochRecord { epoch: epochs, loss, validation: v });

    let (selected_epoch, params) = match best {
        Some((_, e, p)) => (e, p),
        None => (epochs, params),
    };
    Ok(RetrainOutcome { params, selected_epoch, trajectory })
}
