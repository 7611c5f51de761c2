use std::f64::consts::TAU;
use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::rankcorr::{kendall, spearman};
use crate::circuit::{self, Architecture, ParamAssignment};
use crate::error::{bail, Result};
use crate::search::{retrain, Optimizer};
use crate::sim::NoiseModel;
use crate::supernet::SupernetEnsemble;
use crate::tasks::Task;

const SUBNET_STREAM: u64 = 4;
const INIT_STREAM_BASE: u64 = 1 << 32;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct CorrelationOptions {
    pub subnets: usize,
    /// Independent-training budget per subnet.
    pub epochs: usize,
    pub optimizer: Optimizer,
    #[serde(default)]
    pub noise: NoiseModel,
    #[serde(default)]
    pub seed: u64,
}

impl Default for CorrelationOptions {
    fn default() -> Self {
        CorrelationOptions {
            subnets: 500,
            epochs: 100,
            optimizer: Optimizer::adam(0.05),
            noise: NoiseModel::noiseless(),
            seed: 0,
        }
    }
}

/// Scores are losses of the scoring task (lower is better) for both vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct CorrelationReport {
    pub architectures: Vec<String>,
    pub independent: Vec<f64>,
    pub qas: Vec<f64>,
    pub spearman: f64,
    pub kendall: f64,
}

impl CorrelationReport {
    pub fn from_scores(architectures: Vec<String>, independent: Vec<f64>, qas: Vec<f64>) -> Result<Self> {
        if architectures.len() != independent.len() {
            bail!(Argument, "{} architectures for {} scores", architectures.len(), independent.len());
        }
        let spearman = spearman(&independent, &qas)?;
        let kendall = kendall(&independent, &qas)?;
        Ok(CorrelationReport { architectures, independent, qas, spearman, kendall })
    }

    pub fn n(&self) -> usize {
        self.architectures.len()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("subnet,independent_score,qas_score\n");
        for ((a, i), q) in self.architectures.iter().zip(&self.independent).zip(&self.qas) {
            let _ = writeln!(s, "{a},{i},{q}");
        }
        s
    }
}

/// Compares supernet scores with independent training on `n` uniform subnets.
///
/// Each subnet is scored by `eval_min` on the frozen ensemble and, separately,
/// trained from a fresh uniform initialization on `train_task`; both are
/// scored on `score_task`.
pub fn correlation_study(
    ensemble: &SupernetEnsemble,
    train_task: &dyn Task,
    score_task: &dyn Task,
    options: &CorrelationOptions,
) -> Result<CorrelationReport> {
    if options.subnets < 2 {
        bail!(Argument, "need at least two subnets, got {}", options.subnets);
    }
    let space = ensemble.space();
    let mut rng = crate::seeded_rng(options.seed, SUBNET_STREAM);
    let archs: Vec<Architecture> = (0..options.subnets).map(|_| space.sample_uniform(&mut rng)).collect();
    let noise = options.noise;

    let rows = archs
        .par_iter()
        .enumerate()
        .map(|(i, arch)| {
            let (qas, _) = ensemble.eval_min(arch, score_task, &noise)?;
            let mut init_rng = crate::seeded_rng(options.seed, INIT_STREAM_BASE + i as u64);
            let flat: Vec<f64> = (0..space.n_params()).map(|_| init_rng.gen_range(0.0..TAU)).collect();
            let init = ParamAssignment::from_flat(space, &flat)?;
            let out =
                retrain(space, arch, &init, train_task, options.epochs, &options.optimizer, &noise, None)?;
            let independent = circuit::evaluate(space, arch, &out.params, score_task, &noise)?;
            Ok((arch.to_text(space), independent, qas))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut names = Vec::with_capacity(rows.len());
    let mut independent = Vec::with_capacity(rows.len());
    let mut qas = Vec::with_capacity(rows.len());
    for (a, i, q) in rows {
        names.push(a);
        independent.push(i);
        qas.push(q);
    }
    CorrelationReport::from_scores(names, independent, qas)
}
