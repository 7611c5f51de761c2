//! Simulator checks against an independent dense-matrix oracle.

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use qas::sim::{
    simulate_expectation, simulate_expectation_mixed, Gate, GateKind, Hamiltonian, MixedState, NoiseModel, Pauli,
    PauliString, QuantumState,
};

type M = DMatrix<Complex64>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn pauli(p: usize) -> M {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    match p {
        0 => M::from_row_slice(2, 2, &[o, z, z, o]),
        1 => M::from_row_slice(2, 2, &[z, o, o, z]),
        2 => M::from_row_slice(2, 2, &[z, -i, i, z]),
        _ => M::from_row_slice(2, 2, &[o, z, z, -o]),
    }
}

/// `exp(-iθP/2) = cos(θ/2) I − i sin(θ/2) P`.
fn rotation(p: usize, theta: f64) -> M {
    pauli(0) * c((theta / 2.0).cos(), 0.0) - pauli(p) * c(0.0, (theta / 2.0).sin())
}

/// Embeds per-qubit factors with qubit 0 as the leftmost tensor factor.
fn kron_all(factors: &[M]) -> M {
    factors.iter().skip(1).fold(factors[0].clone(), |acc, f| acc.kronecker(f))
}

fn on_qubit(n: usize, q: usize, m: &M) -> M {
    let f: Vec<M> = (0..n).map(|k| if k == q { m.clone() } else { pauli(0) }).collect();
    kron_all(&f)
}

fn cnot(n: usize, ctrl: usize, tgt: usize) -> M {
    let p0 = M::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    let p1 = M::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
    let a: Vec<M> = (0..n).map(|k| if k == ctrl { p0.clone() } else { pauli(0) }).collect();
    let b: Vec<M> = (0..n)
        .map(|k| if k == ctrl { p1.clone() } else if k == tgt { pauli(1) } else { pauli(0) })
        .collect();
    kron_all(&a) + kron_all(&b)
}

/// `(1−p)ρ + p/4^k Σ_P PρP` over all Paulis on the given qubits, which equals
/// replacing those qubits with the maximally mixed state with probability `p`.
fn depolarize(n: usize, rho: &M, qubits: &[usize], p: f64) -> M {
    let k = qubits.len();
    let mut acc = M::zeros(rho.nrows(), rho.ncols());
    for idx in 0..4usize.pow(k as u32) {
        let mut factors: Vec<M> = (0..n).map(|_| pauli(0)).collect();
        for (j, &q) in qubits.iter().enumerate() {
            factors[q] = pauli((idx >> (2 * j)) & 3);
        }
        let pm = kron_all(&factors);
        acc += &pm * rho * &pm;
    }
    rho * c(1.0 - p, 0.0) + acc * c(p / 4f64.powi(k as i32), 0.0)
}

fn gate_matrix(n: usize, g: &Gate) -> M {
    match g.kind {
        GateKind::RX => on_qubit(n, g.qubits[0], &rotation(1, g.angle.unwrap())),
        GateKind::RY => on_qubit(n, g.qubits[0], &rotation(2, g.angle.unwrap())),
        GateKind::RZ => on_qubit(n, g.qubits[0], &rotation(3, g.angle.unwrap())),
        GateKind::CNOT => cnot(n, g.qubits[0], g.qubits[1]),
        GateKind::T => {
            let t = M::from_row_slice(
                2,
                2,
                &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)],
            );
            on_qubit(n, g.qubits[0], &t)
        }
        GateKind::Identity => on_qubit(n, g.qubits[0], &pauli(0)),
    }
}

fn oracle_expectation(n: usize, gates: &[Gate], obs: &M, noise: &NoiseModel) -> f64 {
    let dim = 1 << n;
    let mut rho = M::zeros(dim, dim);
    rho[(0, 0)] = c(1.0, 0.0);
    for g in gates {
        let u = gate_matrix(n, g);
        rho = &u * &rho * u.adjoint();
        if g.kind != GateKind::Identity && noise.is_active() {
            let p = noise.probability_for(g.kind);
            rho = depolarize(n, &rho, &g.qubits, p);
        }
    }
    (rho * obs).trace().re
}

fn arb_gate(n: usize) -> impl Strategy<Value = Gate> {
    let rot = (0..3usize, 0..n, -7.0..7.0f64).prop_map(|(k, q, a)| {
        Gate::rotation([GateKind::RX, GateKind::RY, GateKind::RZ][k], q, a)
    });
    let pair = (0..n, 1..n).prop_map(move |(a, d)| Gate::cnot(a, (a + d) % n));
    let t = (0..n).prop_map(|q| Gate::fixed(GateKind::T, q));
    prop_oneof![4 => rot, 2 => pair, 1 => t]
}

fn arb_circuit() -> impl Strategy<Value = (usize, Vec<Gate>)> {
    (2..=3usize).prop_flat_map(|n| (Just(n), prop::collection::vec(arb_gate(n), 1..14)))
}

fn arb_observable(n: usize) -> impl Strategy<Value = Hamiltonian> {
    prop::collection::vec((-1.0..1.0f64, prop::collection::vec(0..4usize, n)), 1..5).prop_map(move |terms| {
        let strings = terms
            .into_iter()
            .map(|(coef, letters)| {
                let ps = letters.into_iter().map(|l| [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][l]).collect();
                PauliString::new(coef, ps).unwrap()
            })
            .collect();
        Hamiltonian::new(n, strings).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn noiseless_pure_and_mixed_agree((n, gates) in arb_circuit(), seed in 0..4usize) {
        let obs = Hamiltonian::z(n, seed % n).unwrap();
        let quiet = NoiseModel::noiseless();
        let a = simulate_expectation(n, &[], &gates, &obs, &quiet, false).unwrap();
        let b = simulate_expectation_mixed(n, &[], &gates, &obs, &quiet, false).unwrap();
        prop_assert!((a - b).abs() < 1e-12, "{} vs {}", a, b);
    }

    #[test]
    fn matches_dense_oracle(
        (n, gates, obs) in arb_circuit().prop_flat_map(|(n, g)| (Just(n), Just(g), arb_observable(n))),
        p1 in 0.0..0.3f64,
        p2 in 0.0..0.5f64,
        noisy in any::<bool>(),
    ) {
        let noise = if noisy { NoiseModel::depolarizing(p1, p2).unwrap() } else { NoiseModel::noiseless() };
        let got = simulate_expectation(n, &[], &gates, &obs, &noise, false).unwrap();
        let want = oracle_expectation(n, &gates, &obs.to_dense().unwrap(), &noise);
        prop_assert!((got - want).abs() < 1e-10, "{} vs {}", got, want);
    }

    #[test]
    fn noisy_states_stay_physical((n, gates) in arb_circuit(), p1 in 0.0..1.0f64, p2 in 0.0..1.0f64) {
        let mut rho = MixedState::zero(n);
        rho.run(&gates, &NoiseModel::depolarizing(p1, p2).unwrap()).unwrap();
        prop_assert!((rho.trace().re - 1.0).abs() < 1e-12);
        prop_assert!(rho.trace().im.abs() < 1e-12);
        prop_assert!(rho.hermiticity_error() < 1e-12);
        let eig = nalgebra::SymmetricEigen::new(rho.to_dense()).eigenvalues;
        prop_assert!(eig.iter().all(|&l| l > -1e-12));
    }
}

#[test]
fn full_depolarization_gives_maximally_mixed() {
    let mut rho = MixedState::zero(2);
    rho.apply_gate(GateKind::RY, &[0], Some(0.7)).unwrap();
    rho.apply_depolarizing(&[0, 1], 1.0).unwrap();
    let want = MixedState::maximally_mixed(2);
    for r in 0..4 {
        for col in 0..4 {
            assert!((rho.get(r, col) - want.get(r, col)).norm() < 1e-15);
        }
    }
}

#[test]
fn single_qubit_channel_shrinks_z() {
    // <Z> goes from 1 to 1 − p for the replace-with-mixed convention
    let noise = NoiseModel::depolarizing(0.3, 0.0).unwrap();
    let e = simulate_expectation(1, &[], &[Gate::rotation(GateKind::RZ, 0, 0.0)], &Hamiltonian::z(1, 0).unwrap(), &noise, false)
        .unwrap();
    assert!((e - 0.7).abs() < 1e-15);
}
