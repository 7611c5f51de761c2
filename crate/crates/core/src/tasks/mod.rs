//! Benchmark tasks: synthetic 3-qubit classification and H₂ ground-state energy.

mod baselines;
mod classify;
mod dataset;
mod vqe;

pub use baselines::{
    baseline_classifier_space, baseline_vqe_space, baseline_vqe_space_with_depth,
    classification_space, vqe_rc_space, vqe_space,
};
pub use classify::{accuracy, mse_loss, predict, ClassificationTask, Metric};
pub use dataset::{generate_dataset, Dataset, DatasetOptions, Split, Teacher};
pub use vqe::{h2_hamiltonian, VqeTask};

use crate::error::Result;
use crate::sim::{Gate, Hamiltonian};

/// A learning objective evaluated through circuit expectations.
///
/// The trainable circuit is run once per *probe* (each probe prepends its own
/// encoding gates); the per-probe expectations of [`Task::observable`] are the
/// task's outputs, and the loss is a function of those outputs only.
pub trait Task: Send + Sync {
    fn name(&self) -> &str;

    fn n_qubits(&self) -> usize;

    fn observable(&self) -> &Hamiltonian;

    /// Encoding gate lists, one per probe.
    fn probes(&self) -> &[Vec<Gate>];

    /// Whether encoding gates incur gate noise.
    fn encoding_noise(&self) -> bool {
        true
    }

    fn loss(&self, outputs: &[f64]) -> Result<f64>;

    /// `∂loss/∂output_i` for every probe.
    fn loss_gradient(&self, outputs: &[f64]) -> Result<Vec<f64>>;

    /// Interval containing every attainable loss.
    fn loss_bounds(&self) -> (f64, f64) {
        (0.0, 1.0)
    }
}
