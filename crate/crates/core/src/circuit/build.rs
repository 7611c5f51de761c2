use super::arch::{Architecture, ParamAssignment};
use super::space::SearchSpace;
use crate::error::{bail, Result};
use crate::sim::{self, Gate, NoiseModel};
use crate::tasks::Task;

/// Gate list for `arch` with `params`, optionally preceded by `encoding`.
///
/// Layer order: fixed prefix gates, rotations (slot-major, qubit order), then
/// CNOTs for active pairs in candidate order. Trainable rotations carry the
/// layer-major index of their angle in [`ParamAssignment::flat`].
pub fn build_circuit(
    space: &SearchSpace,
    arch: &Architecture,
    params: &ParamAssignment,
    encoding: Option<&[Gate]>,
) -> Result<Vec<Gate>> {
    arch.validate_for(space)?;
    params.validate_for(space)?;
    let n = space.n_qubits;
    let mut gates = Vec::new();
    if let Some(enc) = encoding {
        gates.extend_from_slice(enc);
    }
    for (l, layer) in arch.layers.iter().enumerate() {
        for &kind in &space.fixed_prefix {
            gates.extend((0..n).map(|q| Gate::fixed(kind, q)));
        }
        let kinds = arch.layer_gates(space, l);
        for (i, kind) in kinds.into_iter().enumerate() {
            let index = l * space.params_per_layer() + i;
            gates.push(Gate::trainable(kind, i % n, params.layers[l][i], index));
        }
        for (p, &(c, t)) in space.candidate_pairs.iter().enumerate() {
            if layer.pairs >> p & 1 == 1 {
                gates.push(Gate::cnot(c, t));
            }
        }
    }
    Ok(gates)
}

pub(crate) fn check_task(space: &SearchSpace, task: &dyn Task) -> Result<()> {
    if task.n_qubits() != space.n_qubits {
        bail!(
            Argument,
            "task `{}` has {} qubits, search space has {}",
            task.name(),
            task.n_qubits(),
            space.n_qubits
        );
    }
    Ok(())
}

/// Per-probe expectations of the task observable for a built circuit.
pub fn circuit_outputs(task: &dyn Task, gates: &[Gate], noise: &NoiseModel) -> Result<Vec<f64>> {
    task.probes()
        .iter()
        .map(|enc| {
            sim::simulate_expectation(
                task.n_qubits(),
                enc,
                gates,
                task.observable(),
                noise,
                task.encoding_noise(),
            )
        })
        .collect()
}

/// Task outputs for `arch` with `params`.
pub fn outputs(
    space: &SearchSpace,
    arch: &Architecture,
    params: &ParamAssignment,
    task: &dyn Task,
    noise: &NoiseModel,
) -> Result<Vec<f64>> {
    check_task(space, task)?;
    let gates = build_circuit(space, arch, params, None)?;
    circuit_outputs(task, &gates, noise)
}

/// Task loss of `arch` with `params`. Deterministic.
pub fn evaluate(
    space: &SearchSpace,
    arch: &Architecture,
    params: &ParamAssignment,
    task: &dyn Task,
    noise: &NoiseModel,
) -> Result<f64> {
    let out = outputs(space, arch, params, task, noise)?;
    task.loss(&out)
}

/// [`evaluate`] forced through the density-matrix path.
pub fn evaluate_mixed(
    space: &SearchSpace,
    arch: &Architecture,
    params: &ParamAssignment,
    task: &dyn Task,
    noise: &NoiseModel,
) -> Result<f64> {
    check_task(space, task)?;
    let gates = build_circuit(space, arch, params, None)?;
    let out = task
        .probes()
        .iter()
        .map(|enc| {
            sim::simulate_expectation_mixed(
                task.n_qubits(),
                enc,
                &gates,
                task.observable(),
                noise,
                task.encoding_noise(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    task.loss(&out)
}
