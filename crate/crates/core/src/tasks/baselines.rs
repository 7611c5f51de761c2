use crate::circuit::{Architecture, LayerChoice, SearchSpace};
use crate::sim::GateKind::{RY, RZ};

/// 3 qubits, `RY` only, CNOT candidates (0,1), (0,2), (1,2), three layers: 8³ subnets.
pub fn classification_space() -> SearchSpace {
    SearchSpace::new(3, 3, vec![RY], vec![(0, 1), (0, 2), (1, 2)]).expect("valid space")
}

/// 4 qubits, `RY`/`RZ` per qubit, CNOT chain candidates, three layers: 128³ subnets.
pub fn vqe_space() -> SearchSpace {
    SearchSpace::new(4, 3, vec![RY, RZ], vec![(0, 1), (1, 2), (2, 3)]).expect("valid space")
}

/// [`vqe_space`] restricted to a device coupling map with directed CNOTs:
/// 1024³ subnets.
pub fn vqe_rc_space() -> SearchSpace {
    SearchSpace::new(4, 3, vec![RY, RZ], vec![(0, 1), (1, 0), (1, 2), (2, 1), (1, 3), (3, 1)])
        .expect("valid space")
}

fn dense(space: &SearchSpace) -> Architecture {
    Architecture {
        layers: (0..space.n_layers)
            .map(|_| LayerChoice {
                rotations: vec![0; space.params_per_layer()],
                pairs: space.pair_mask_all(),
            })
            .collect(),
    }
}

/// Dense classifier: `RY` on every qubit and all three CNOTs, in every layer.
pub fn baseline_classifier_space() -> (SearchSpace, Architecture) {
    let space = classification_space();
    let arch = dense(&space);
    (space, arch)
}

/// Dense VQE ansatz: `RY` then `RZ` on every qubit, then the CNOT chain, three layers.
///
/// Two rotations per qubit per layer do not fit the single-slot search space,
/// so the baseline lives in its own two-slot space.
pub fn baseline_vqe_space() -> (SearchSpace, Architecture) {
    baseline_vqe_space_with_depth(3)
}

pub fn baseline_vqe_space_with_depth(n_layers: usize) -> (SearchSpace, Architecture) {
    let space = SearchSpace::with_slots(
        4,
        n_layers,
        vec![vec![RY], vec![RZ]],
        vec![(0, 1), (1, 2), (2, 3)],
        vec![],
    )
    .expect("valid space");
    let arch = dense(&space);
    (space, arch)
}
