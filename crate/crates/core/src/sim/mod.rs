//! Dense state-vector and density-matrix simulation for small registers.

mod gate;
mod kernel;
mod noise;
mod pauli;
mod state;

pub use gate::{Gate, GateKind};
pub use noise::NoiseModel;
pub use pauli::{Hamiltonian, Pauli, PauliString, MAX_DENSE_QUBITS};
pub use state::{MixedState, PureState, QuantumState};

use crate::error::Result;

/// Expectation of `obs` after running `prefix` then `gates` from `|0...0>`.
///
/// Uses a state vector when `noise` is inactive and a density matrix otherwise.
/// `prefix_noise` controls whether the prefix (typically a data encoding) is noisy.
pub fn simulate_expectation(
    n_qubits: usize,
    prefix: &[Gate],
    gates: &[Gate],
    obs: &Hamiltonian,
    noise: &NoiseModel,
    prefix_noise: bool,
) -> Result<f64> {
    if noise.is_active() {
        let mut rho = MixedState::zero(n_qubits);
        let quiet = NoiseModel::noiseless();
        rho.run(prefix, if prefix_noise { noise } else { &quiet })?;
        rho.run(gates, noise)?;
        rho.expectation(obs)
    } else {
        let mut psi = PureState::zero(n_qubits);
        let quiet = NoiseModel::noiseless();
        psi.run(prefix, &quiet)?;
        psi.run(gates, &quiet)?;
        psi.expectation(obs)
    }
}

/// Same as [`simulate_expectation`] but always through a density matrix.
pub fn simulate_expectation_mixed(
    n_qubits: usize,
    prefix: &[Gate],
    gates: &[Gate],
    obs: &Hamiltonian,
    noise: &NoiseModel,
    prefix_noise: bool,
) -> Result<f64> {
    let mut rho = MixedState::zero(n_qubits);
    let quiet = NoiseModel::noiseless();
    rho.run(prefix, if prefix_noise { noise } else { &quiet })?;
    rho.run(gates, noise)?;
    rho.expectation(obs)
}
