use std::sync::Arc;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::dataset::{Dataset, Split};
use super::Task;
use crate::error::{bail, Result};
use crate::sim::{self, Gate, GateKind, Hamiltonian, NoiseModel};

/// Data encoding `RY(x1) ⊗ RY(x2) ⊗ RY(x3)`.
pub fn encoding_gates(x: &[f64; 3]) -> Vec<Gate> {
    (0..3).map(|q| Gate::rotation(GateKind::RY, q, x[q])).collect()
}

/// `Π = I₄ ⊗ |0><0|`, the projector onto qubit 2 being `|0>`.
pub fn classifier_projector() -> Hamiltonian {
    Hamiltonian::zero_projector(3, 2).expect("valid projector")
}

/// `ỹ = ⟨Π⟩` after the encoding of `x` followed by `gates`.
pub fn classifier_output(
    gates: &[Gate],
    x: &[f64; 3],
    noise: &NoiseModel,
    encoding_noise: bool,
) -> Result<f64> {
    sim::simulate_expectation(3, &encoding_gates(x), gates, &classifier_projector(), noise, encoding_noise)
}

/// Label rule: 0 below one half, 1 otherwise.
pub fn predict(y_tilde: f64) -> u8 {
    if y_tilde < 0.5 {
        0
    } else {
        1
    }
}

/// `(1/n) Σ (ỹ − y)²`.
pub fn mse_loss(predictions: &[f64], labels: &[u8]) -> Result<f64> {
    if predictions.len() != labels.len() {
        bail!(Argument, "{} predictions for {} labels", predictions.len(), labels.len());
    }
    if predictions.is_empty() {
        bail!(Argument, "empty prediction set");
    }
    let sum: f64 = predictions.iter().zip(labels).map(|(p, &y)| (p - f64::from(y)).powi(2)).sum();
    Ok(sum / predictions.len() as f64)
}

/// Fraction of thresholded outputs matching the labels.
pub fn accuracy(predictions: &[f64], labels: &[u8]) -> Result<f64> {
    if predictions.len() != labels.len() {
        bail!(Argument, "{} predictions for {} labels", predictions.len(), labels.len());
    }
    if predictions.is_empty() {
        bail!(Argument, "empty prediction set");
    }
    let hits = predictions.iter().zip(labels).filter(|(p, &y)| predict(**p) == y).count();
    Ok(hits as f64 / predictions.len() as f64)
}

/// What a classification task reports as its loss.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    /// Mean squared error; differentiable.
    Mse,
    /// `1 − accuracy`; used for ranking by accuracy.
    ErrorRate,
}

/// Binary classification over one split of a dataset.
#[derive(Debug, Clone)]
pub struct ClassificationTask {
    name: String,
    dataset: Arc<Dataset>,
    split: Split,
    metric: Metric,
    encoding_noise: bool,
    observable: Hamiltonian,
    probes: Vec<Vec<Gate>>,
    labels: Vec<u8>,
}

impl ClassificationTask {
    pub fn new(dataset: Arc<Dataset>, split: Split, metric: Metric) -> Result<Self> {
        let indices = dataset.split_indices(split);
        if indices.is_empty() {
            bail!(Argument, "dataset has no `{}` samples", split.as_str());
        }
        let probes = indices.iter().map(|&i| dataset.encoding(i)).collect();
        let labels = indices.iter().map(|&i| dataset.labels[i]).collect();
        Ok(ClassificationTask {
            name: format!("classify-{}", split.as_str()),
            dataset,
            split,
            metric,
            encoding_noise: true,
            observable: classifier_projector(),
            probes,
            labels,
        })
    }

    pub fn with_encoding_noise(mut self, on: bool) -> Self {
        self.encoding_noise = on;
        self
    }

    /// Same dataset, another split or metric.
    pub fn view(&self, split: Split, metric: Metric) -> Result<Self> {
        Ok(ClassificationTask::new(self.dataset.clone(), split, metric)?
            .with_encoding_noise(self.encoding_noise))
    }

    pub fn split(&self) -> Split {
        self.split
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn dataset(&self) -> &Arc<Dataset> {
        &self.dataset
    }

    pub fn accuracy_of(&self, outputs: &[f64]) -> Result<f64> {
        accuracy(outputs, &self.labels)
    }
}

impl Task for ClassificationTask {
    fn name(&self) -> &str {
        &self.name
    }

    fn n_qubits(&self) -> usize {
        3
    }

    fn observable(&self) -> &Hamiltonian {
        &self.observable
    }

    fn probes(&self) -> &[Vec<Gate>] {
        &self.probes
    }

    fn encoding_noise(&self) -> bool {
        self.encoding_noise
    }

    fn loss(&self, outputs: &[f64]) -> Result<f64> {
        match self.metric {
            Metric::Mse => mse_loss(outputs, &self.labels),
            Metric::ErrorRate => Ok(1.0 - accuracy(outputs, &self.labels)?),
        }
    }

    fn loss_gradient(&self, outputs: &[f64]) -> Result<Vec<f64>> {
        if self.metric != Metric::Mse {
            bail!(Capability, "error-rate metric is not differentiable");
        }
        if outputs.len() != self.labels.len() {
            bail!(Argument, "{} outputs for {} labels", outputs.len(), self.labels.len());
        }
        let scale = 2.0 / outputs.len() as f64;
        Ok(outputs.iter().zip(&self.labels).map(|(o, &y)| scale * (o - f64::from(y))).collect())
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    #[test]
    fn empty_circuit_outputs() {
        let quiet = NoiseModel::noiseless();
        assert!((classifier_output(&[], &[0.0, 0.0, 0.0], &quiet, true).unwrap() - 1.0).abs() < 1e-12);
        assert!(classifier_output(&[], &[0.0, 0.0, PI], &quiet, true).unwrap().abs() < 1e-12);
        assert!((classifier_output(&[], &[0.0, 0.0, PI / 2.0], &quiet, true).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn predict_threshold() {
        assert_eq!(predict(0.49), 0);
        assert_eq!(predict(0.5), 1);
        assert_eq!(predict(1.0), 1);
    }

    #[test]
    fn mse_examples() {
        assert_eq!(mse_loss(&[1.0, 0.0], &[1, 0]).unwrap(), 0.0);
        assert!((mse_loss(&[0.5, 0.5], &[0, 1]).unwrap() - 0.25).abs() < 1e-15);
        assert!((mse_loss(&[0.8], &[1]).unwrap() - 0.04).abs() < 1e-12);
        assert!(mse_loss(&[0.8], &[1, 0]).is_err());
    }

    #[test]
    fn accuracy_examples() {
        assert_eq!(accuracy(&[0.9, 0.1], &[1, 0]).unwrap(), 1.0);
        assert_eq!(accuracy(&[0.1, 0.9], &[1, 0]).unwrap(), 0.0);
        assert_eq!(accuracy(&[0.9, 0.9], &[1, 0]).unwrap(), 0.5);
    }
}
