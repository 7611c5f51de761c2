use num_complex::Complex64;
use rand::Rng;

use super::gate::{self, Gate, GateKind};
use super::kernel;
use super::noise::NoiseModel;
use super::pauli::Hamiltonian;
use crate::error::{bail, Result};

/// Common surface of the pure and mixed simulators.
///
/// Qubit 0 is the most significant bit of a basis index: on two qubits,
/// `|10>` (qubit 0 set) is index 2.
pub trait QuantumState: Clone {
    fn n_qubits(&self) -> usize;

    fn apply_gate(&mut self, kind: GateKind, qubits: &[usize], angle: Option<f64>) -> Result<()>;

    fn expectation(&self, obs: &Hamiltonian) -> Result<f64>;

    /// Applies the noise channel that follows a gate on `qubits`.
    fn apply_gate_noise(&mut self, kind: GateKind, qubits: &[usize], noise: &NoiseModel)
        -> Result<()>;

    fn apply(&mut self, g: &Gate) -> Result<()> {
        self.apply_gate(g.kind, &g.qubits, g.angle)
    }

    /// Runs a gate list, inserting noise after every non-identity gate.
    fn run(&mut self, gates: &[Gate], noise: &NoiseModel) -> Result<()> {
        for g in gates {
            self.apply(g)?;
            self.apply_gate_noise(g.kind, &g.qubits, noise)?;
        }
        Ok(())
    }
}

#[inline]
pub(crate) fn qubit_bit(n_qubits: usize, qubit: usize) -> usize {
    n_qubits - 1 - qubit
}

fn check_observable(n_qubits: usize, obs: &Hamiltonian) -> Result<()> {
    if obs.n_qubits() != n_qubits {
        bail!(
            Argument,
            "observable acts on {} qubits, state has {n_qubits}",
            obs.n_qubits()
        );
    }
    Ok(())
}

/// State vector of `2^n` amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// `|0...0>`.
    pub fn zero(n_qubits: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        PureState { n_qubits, amplitudes }
    }

    /// Computational basis state with the given index.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if index >= 1 << n_qubits {
            bail!(Index, "basis index {index} out of range for {n_qubits} qubits");
        }
        let mut s = PureState::zero(n_qubits);
        s.amplitudes[0] = Complex64::new(0.0, 0.0);
        s.amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len == 0 || !len.is_power_of_two() {
            bail!(Argument, "amplitude count {len} is not a power of two");
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            bail!(Argument, "amplitudes have squared norm {norm}, expected 1");
        }
        Ok(PureState { n_qubits: len.trailing_zeros() as usize, amplitudes })
    }

    /// Haar-ish random state from Gaussian amplitudes.
    pub fn random<R: Rng>(n_qubits: usize, rng: &mut R) -> Self {
        use rand::distributions::Distribution;
        let normal = rand::distributions::Uniform::new(-1.0f64, 1.0);
        let mut amplitudes: Vec<Complex64> = (0..1usize << n_qubits)
            .map(|_| Complex64::new(normal.sample(rng), normal.sample(rng)))
            .collect();
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        PureState { n_qubits, amplitudes }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }
}

impl QuantumState for PureState {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn apply_gate(&mut self, kind: GateKind, qubits: &[usize], angle: Option<f64>) -> Result<()> {
        gate::validate(kind, qubits, angle, self.n_qubits)?;
        let n = self.n_qubits;
        match kind {
            GateKind::Identity => {}
            GateKind::CNOT => kernel::apply_cx(
                &mut self.amplitudes,
                qubit_bit(n, qubits[0]),
                qubit_bit(n, qubits[1]),
            ),
            _ => {
                let m = kind.matrix(angle.unwrap_or(0.0));
                kernel::apply_matrix(&mut self.amplitudes, qubit_bit(n, qubits[0]), &m);
            }
        }
        Ok(())
    }

    fn expectation(&self, obs: &Hamiltonian) -> Result<f64> {
        check_observable(self.n_qubits, obs)?;
        let psi = &self.amplitudes;
        let mut total = 0.0;
        for term in obs.terms() {
            if term.is_identity() {
                total += term.coefficient;
                continue;
            }
            let masks = term.masks();
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, amp) in psi.iter().enumerate() {
                acc += psi[i ^ masks.flip].conj() * masks.phase(i) * amp;
            }
            total += term.coefficient * acc.re;
        }
        Ok(total)
    }

    fn apply_gate_noise(
        &mut self,
        kind: GateKind,
        _qubits: &[usize],
        noise: &NoiseModel,
    ) -> Result<()> {
        if noise.probability_for(kind) > 0.0 {
            bail!(Capability, "noisy evolution requires a MixedState");
        }
        Ok(())
    }
}

/// Density matrix, row-major `2^n x 2^n`.
///
/// Stored as a vector over `2n` bits (row bits high, column bits low) so that
/// `U ρ U†` is the state-vector kernel applied to the row bits with `U` and to
/// the column bits with `conj(U)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedState {
    n_qubits: usize,
    data: Vec<Complex64>,
}

impl MixedState {
    pub fn zero(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        data[0] = Complex64::new(1.0, 0.0);
        MixedState { n_qubits, data }
    }

    /// `|ψ><ψ|`.
    pub fn from_pure(psi: &PureState) -> Self {
        let dim = psi.amplitudes.len();
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(psi.amplitudes[r] * psi.amplitudes[c].conj());
            }
        }
        MixedState { n_qubits: psi.n_qubits, data }
    }

    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(1.0 / dim as f64, 0.0);
        }
        MixedState { n_qubits, data }
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim() + col]
    }

    pub fn trace(&self) -> Complex64 {
        let dim = self.dim();
        (0..dim).map(|i| self.data[i * dim + i]).sum()
    }

    /// Largest elementwise deviation from Hermiticity.
    pub fn hermiticity_error(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0f64;
        for r in 0..dim {
            for c in 0..dim {
                worst = worst.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        worst
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<Complex64> {
        let dim = self.dim();
        nalgebra::DMatrix::from_row_slice(dim, dim, &self.data)
    }

    /// Depolarizing channel on `qubits`:
    /// `ρ -> (1-p) ρ + p · (I/2^k ⊗ Tr_qubits ρ)`.
    pub fn apply_depolarizing(&mut self, qubits: &[usize], p: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&p) {
            bail!(Argument, "depolarizing probability {p} outside [0, 1]");
        }
        let n = self.n_qubits;
        let mut mask = 0usize;
        for &q in qubits {
            if q >= n {
                bail!(Index, "qubit {q} out of range for {n}-qubit state");
            }
            mask |= 1 << qubit_bit(n, q);
        }
        if p == 0.0 || mask == 0 {
            return Ok(());
        }
        let dim = self.dim();
        let k = mask.count_ones();
        let keep = 1.0 - p;
        let weight = p / f64::from(1u32 << k);
        let submasks: Vec<usize> = {
            let mut v = Vec::with_capacity(1 << k);
            let mut s = mask;
            loop {
                v.push(s);
                if s == 0 {
                    break;
                }
                s = (s - 1) & mask;
            }
            v
        };
        for r0 in (0..dim).filter(|r| r & mask == 0) {
            for c0 in (0..dim).filter(|c| c & mask == 0) {
                let traced: Complex64 =
                    submasks.iter().map(|&s| self.data[(r0 | s) * dim + (c0 | s)]).sum();
                for &sr in &submasks {
                    for &sc in &submasks {
                        let idx = (r0 | sr) * dim + (c0 | sc);
                        self.data[idx] *= keep;
                        if sr == sc {
                            self.data[idx] += traced * weight;
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

impl QuantumState for MixedState {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn apply_gate(&mut self, kind: GateKind, qubits: &[usize], angle: Option<f64>) -> Result<()> {
        gate::validate(kind, qubits, angle, self.n_qubits)?;
        let n = self.n_qubits;
        match kind {
            GateKind::Identity => {}
            GateKind::CNOT => {
                let (c, t) = (qubit_bit(n, qubits[0]), qubit_bit(n, qubits[1]));
                kernel::apply_cx(&mut self.data, c + n, t + n);
                kernel::apply_cx(&mut self.data, c, t);
            }
            _ => {
                let m = kind.matrix(angle.unwrap_or(0.0));
                let conj = [m[0].conj(), m[1].conj(), m[2].conj(), m[3].conj()];
                let bit = qubit_bit(n, qubits[0]);
                kernel::apply_matrix(&mut self.data, bit + n, &m);
                kernel::apply_matrix(&mut self.data, bit, &conj);
            }
        }
        Ok(())
    }

    fn expectation(&self, obs: &Hamiltonian) -> Result<f64> {
        check_observable(self.n_qubits, obs)?;
        let dim = self.dim();
        let mut total = 0.0;
        for term in obs.terms() {
            let masks = term.masks();
            let mut acc = Complex64::new(0.0, 0.0);
            // Tr(Pρ) = Σ_k phase(k) ρ[k][k ^ flip]
            for k in 0..dim {
                acc += masks.phase(k) * self.data[k * dim + (k ^ masks.flip)];
            }
            total += term.coefficient * acc.re;
        }
        Ok(total)
    }

    fn apply_gate_noise(&mut self, kind: GateKind, qubits: &[usize], noise: &NoiseModel)
        -> Result<()> {
        let p = noise.probability_for(kind);
        if p > 0.0 {
            self.apply_depolarizing(qubits, p)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::sim::pauli::{Pauli, PauliString};
    use crate::QasError;

    fn z0(n: usize) -> Hamiltonian {
        Hamiltonian::z(n, 0).unwrap()
    }

    #[test]
    fn ry_pi_flips_zero() {
        let mut s = PureState::zero(1);
        s.apply_gate(GateKind::RY, &[0], Some(PI)).unwrap();
        assert!((s.amplitudes()[1].norm() - 1.0).abs() < 1e-12);
        assert!((s.expectation(&z0(1)).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn cnot_truth_table() {
        // |10> is index 2, |11> is index 3
        let mut s = PureState::basis(2, 2).unwrap();
        s.apply_gate(GateKind::CNOT, &[0, 1], None).unwrap();
        assert_eq!(s, PureState::basis(2, 3).unwrap());
        let mut s = PureState::basis(2, 1).unwrap();
        s.apply_gate(GateKind::CNOT, &[0, 1], None).unwrap();
        assert_eq!(s, PureState::basis(2, 1).unwrap());
    }

    #[test]
    fn identity_is_bit_exact() {
        let mut rng = rand::thread_rng();
        let s = PureState::random(3, &mut rng);
        let mut t = s.clone();
        t.apply_gate(GateKind::Identity, &[1], None).unwrap();
        assert_eq!(s, t);
        let m = MixedState::from_pure(&s);
        let mut mt = m.clone();
        mt.apply_gate(GateKind::Identity, &[2], None).unwrap();
        assert_eq!(m, mt);
    }

    #[test]
    fn gate_argument_errors() {
        let mut s = PureState::zero(2);
        assert!(matches!(s.apply_gate(GateKind::RY, &[2], Some(0.1)), Err(QasError::Index(_))));
        assert!(matches!(s.apply_gate(GateKind::RY, &[0], None), Err(QasError::Argument(_))));
        assert!(matches!(s.apply_gate(GateKind::T, &[0], Some(0.1)), Err(QasError::Argument(_))));
        assert!(matches!(s.apply_gate(GateKind::CNOT, &[1, 1], None), Err(QasError::Argument(_))));
    }

    #[test]
    fn depolarizing_single_qubit_examples() {
        let mut m = MixedState::zero(1);
        m.apply_depolarizing(&[0], 0.05).unwrap();
        assert!((m.expectation(&z0(1)).unwrap() - 0.95).abs() < 1e-12);

        let mut rng = rand::thread_rng();
        let psi = PureState::random(2, &mut rng);
        let base = MixedState::from_pure(&psi);
        let mut same = base.clone();
        same.apply_depolarizing(&[0, 1], 0.0).unwrap();
        assert_eq!(base, same);

        let mut full = base.clone();
        full.apply_depolarizing(&[0, 1], 1.0).unwrap();
        let mixed = MixedState::maximally_mixed(2);
        for (a, b) in full.data.iter().zip(&mixed.data) {
            assert!((a - b).norm() < 1e-12);
        }
        assert!(matches!(base.clone().apply_depolarizing(&[0], 1.5), Err(QasError::Argument(_))));
    }

    #[test]
    fn zero_projector_on_zero_state() {
        let pi = Hamiltonian::zero_projector(3, 2).unwrap();
        assert!((PureState::zero(3).expectation(&pi).unwrap() - 1.0).abs() < 1e-12);
        assert!((MixedState::zero(3).expectation(&pi).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn observable_size_mismatch() {
        let s = PureState::zero(2);
        assert!(matches!(s.expectation(&z0(3)), Err(QasError::Argument(_))));
    }

    #[test]
    fn pure_refuses_noise() {
        let mut s = PureState::zero(1);
        let noise = NoiseModel::depolarizing(0.1, 0.1).unwrap();
        assert!(s.apply_gate_noise(GateKind::RY, &[0], &noise).is_err());
        assert!(s.apply_gate_noise(GateKind::RY, &[0], &NoiseModel::noiseless()).is_ok());
    }

    #[test]
    fn xy_expectation_on_plus_states() {
        let mut s = PureState::zero(2);
        s.apply_gate(GateKind::RY, &[0], Some(PI / 2.0)).unwrap(); // |+>
        s.apply_gate(GateKind::RX, &[1], Some(-PI / 2.0)).unwrap(); // |+i>
        let xy = Hamiltonian::new(
            2,
            vec![PauliString::sparse(1.0, 2, &[(0, Pauli::X), (1, Pauli::Y)]).unwrap()],
        )
        .unwrap();
        assert!((s.expectation(&xy).unwrap() - 1.0).abs() < 1e-12);
        let m = MixedState::from_pure(&s);
        assert!((m.expectation(&xy).unwrap() - 1.0).abs() < 1e-12);
    }
}
