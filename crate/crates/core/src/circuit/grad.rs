use std::f64::consts::FRAC_PI_2;

use super::arch::{Architecture, ParamAssignment};
use super::build::{build_circuit, check_task, circuit_outputs};
use super::space::SearchSpace;
use crate::error::{bail, Result};
use crate::sim::{
    Gate, GateKind, Hamiltonian, MixedState, NoiseModel, Pauli, PauliString, PureState,
    QuantumState,
};
use crate::tasks::Task;

/// Loss value and its gradient.
#[derive(Debug, Clone, PartialEq)]
pub struct LossGradient {
    pub loss: f64,
    pub gradient: Vec<f64>,
}

/// Parameter-shift gradient of the task loss over the trainable gates of a
/// built circuit. `n_params` is the length of the returned vector.
///
/// Each trainable angle is shifted by ±π/2; the per-probe output derivatives
/// `(f(θ+π/2) − f(θ−π/2))/2` are chained through `task.loss_gradient`.
pub fn param_shift_gates(
    task: &dyn Task,
    gates: &[Gate],
    n_params: usize,
    noise: &NoiseModel,
) -> Result<LossGradient> {
    let base = circuit_outputs(task, gates, noise)?;
    let loss = task.loss(&base)?;
    let outer = task.loss_gradient(&base)?;
    let mut gradient = vec![0.0; n_params];
    let mut shifted = gates.to_vec();
    for (pos, g) in gates.iter().enumerate() {
        let Some(j) = g.param else { continue };
        if !g.kind.is_rotation() {
            bail!(Capability, "trainable gate {} is not a Pauli rotation", g.kind);
        }
        if j >= n_params {
            bail!(Index, "parameter index {j} out of range for {n_params} parameters");
        }
        let theta = g.angle.unwrap_or(0.0);
        shifted[pos].angle = Some(theta + FRAC_PI_2);
        let plus = circuit_outputs(task, &shifted, noise)?;
        shifted[pos].angle = Some(theta - FRAC_PI_2);
        let minus = circuit_outputs(task, &shifted, noise)?;
        shifted[pos].angle = Some(theta);
        gradient[j] += outer
            .iter()
            .zip(plus.iter().zip(&minus))
            .map(|(d, (p, m))| d * (p - m) / 2.0)
            .sum::<f64>();
    }
    Ok(LossGradient { loss, gradient })
}

/// Parameter-shift gradient for `arch` with `params`, layer-major (length `N·slots·L`).
pub fn gradient_param_shift(
    space: &SearchSpace,
    arch: &Architecture,
    params: &ParamAssignment,
    task: &dyn Task,
    noise: &NoiseModel,
) -> Result<LossGradient> {
    check_task(space, task)?;
    let gates = build_circuit(space, arch, params, None)?;
    param_shift_gates(task, &gates, space.n_params(), noise)
}

/// Central finite-difference gradient; test oracle for the shift rule.
pub fn gradient_finite_difference(
    space: &SearchSpace,
    arch: &Architecture,
    params: &ParamAssignment,
    task: &dyn Task,
    noise: &NoiseModel,
    step: f64,
) -> Result<Vec<f64>> {
    let flat = params.flat();
    let mut grad = Vec::with_capacity(flat.len());
    for j in 0..flat.len() {
        let mut plus = flat.clone();
        plus[j] += step;
        let mut minus = flat.clone();
        minus[j] -= step;
        let fp = super::evaluate(space, arch, &ParamAssignment::from_flat(space, &plus)?, task, noise)?;
        let fm =
            super::evaluate(space, arch, &ParamAssignment::from_flat(space, &minus)?, task, noise)?;
        grad.push((fp - fm) / (2.0 * step));
    }
    Ok(grad)
}

fn generator(kind: GateKind) -> Pauli {
    match kind {
        GateKind::RX => Pauli::X,
        GateKind::RY => Pauli::Y,
        _ => Pauli::Z,
    }
}

/// Diagonal Fubini–Study metric `¼(1 − ⟨P_j⟩²)` for every trainable angle,
/// with `⟨P_j⟩` taken on the state entering gate `j` and averaged over probes.
pub fn metric_diagonal(
    space: &SearchSpace,
    arch: &Architecture,
    params: &ParamAssignment,
    task: &dyn Task,
    noise: &NoiseModel,
) -> Result<Vec<f64>> {
    check_task(space, task)?;
    let gates = build_circuit(space, arch, params, None)?;
    let n = task.n_qubits();
    let mut diag = vec![0.0; space.n_params()];
    let probes = task.probes();
    for enc in probes {
        if noise.is_active() {
            let mut rho = MixedState::zero(n);
            let quiet = NoiseModel::noiseless();
            rho.run(enc, if task.encoding_noise() { noise } else { &quiet })?;
            accumulate_metric(&mut rho, &gates, noise, &mut diag)?;
        } else {
            let mut psi = PureState::zero(n);
            psi.run(enc, noise)?;
            accumulate_metric(&mut psi, &gates, noise, &mut diag)?;
        }
    }
    let scale = 1.0 / probes.len().max(1) as f64;
    diag.iter_mut().for_each(|f| *f *= scale);
    Ok(diag)
}

fn accumulate_metric<S: QuantumState>(
    state: &mut S,
    gates: &[Gate],
    noise: &NoiseModel,
    diag: &mut [f64],
) -> Result<()> {
    let n = state.n_qubits();
    for g in gates {
        if let Some(j) = g.param {
            let p = generator(g.kind);
            let obs = Hamiltonian::new(n, vec![PauliString::sparse(1.0, n, &[(g.qubits[0], p)])?])?;
            let e = state.expectation(&obs)?;
            diag[j] += 0.25 * (1.0 - e * e);
        }
        state.apply(g)?;
        state.apply_gate_noise(g.kind, &g.qubits, noise)?;
    }
    Ok(())
}
