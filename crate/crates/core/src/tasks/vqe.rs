use crate::error::{bail, Result};
use crate::sim::{Gate, Hamiltonian, Pauli, PauliString};

use super::Task;

/// Four-qubit molecular hydrogen Hamiltonian (Hartree), 15 Pauli terms.
pub fn h2_hamiltonian() -> Hamiltonian {
    use Pauli::{X, Y, Z};
    let t = |c: f64, ops: &[(usize, Pauli)]| PauliString::sparse(c, 4, ops).expect("valid term");
    let terms = vec![
        t(-0.042, &[]),
        t(0.178, &[(0, Z)]),
        t(0.178, &[(1, Z)]),
        t(-0.243, &[(2, Z)]),
        t(-0.243, &[(3, Z)]),
        t(0.171, &[(0, Z), (1, Z)]),
        t(0.123, &[(0, Z), (2, Z)]),
        t(0.123, &[(1, Z), (3, Z)]),
        t(0.168, &[(0, Z), (3, Z)]),
        t(0.168, &[(1, Z), (2, Z)]),
        t(0.176, &[(2, Z), (3, Z)]),
        t(0.045, &[(0, Y), (1, X), (2, X), (3, Y)]),
        t(-0.045, &[(0, Y), (1, Y), (2, X), (3, X)]),
        t(-0.045, &[(0, X), (1, X), (2, Y), (3, Y)]),
        t(0.045, &[(0, X), (1, Y), (2, Y), (3, X)]),
    ];
    Hamiltonian::new(4, terms).expect("consistent qubit count")
}

/// Energy minimization of a Hamiltonian from `|0...0>`, no encoding layer.
#[derive(Debug, Clone)]
pub struct VqeTask {
    name: String,
    hamiltonian: Hamiltonian,
    probes: Vec<Vec<Gate>>,
}

impl VqeTask {
    pub fn new(hamiltonian: Hamiltonian) -> Self {
        VqeTask::named("vqe", hamiltonian)
    }

    pub fn named(name: &str, hamiltonian: Hamiltonian) -> Self {
        VqeTask { name: name.to_string(), hamiltonian, probes: vec![Vec::new()] }
    }

    pub fn h2() -> Self {
        VqeTask::new(h2_hamiltonian())
    }

    pub fn hamiltonian(&self) -> &Hamiltonian {
        &self.hamiltonian
    }
}

impl Task for VqeTask {
    fn name(&self) -> &str {
        &self.name
    }

    fn n_qubits(&self) -> usize {
        self.hamiltonian.n_qubits()
    }

    fn observable(&self) -> &Hamiltonian {
        &self.hamiltonian
    }

    fn probes(&self) -> &[Vec<Gate>] {
        &self.probes
    }

    fn loss(&self, outputs: &[f64]) -> Result<f64> {
        match outputs {
            [e] => Ok(*e),
            _ => bail!(Argument, "energy task expects one output, got {}", outputs.len()),
        }
    }

    fn loss_gradient(&self, outputs: &[f64]) -> Result<Vec<f64>> {
        self.loss(outputs)?;
        Ok(vec![1.0])
    }

    /// `±Σ|c|` over the Hamiltonian terms.
    fn loss_bounds(&self) -> (f64, f64) {
        let s: f64 = self.hamiltonian.terms().iter().map(|t| t.coefficient.abs()).sum();
        (-s, s)
    }
}
