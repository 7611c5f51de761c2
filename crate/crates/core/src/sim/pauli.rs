use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{bail, QasError, Result};

/// Largest register the dense eigensolver accepts.
pub const MAX_DENSE_QUBITS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn from_char(c: char) -> Option<Self> {
        Some(match c {
            'I' => Pauli::I,
            'X' => Pauli::X,
            'Y' => Pauli::Y,
            'Z' => Pauli::Z,
            _ => return None,
        })
    }

    fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// A real-weighted tensor product of Pauli letters; `letters[q]` acts on qubit `q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct PauliString {
    pub coefficient: f64,
    pub letters: Vec<Pauli>,
}

/// Bit masks describing how a Pauli string acts on computational basis states.
///
/// `P|i> = i^{n_y} (-1)^{popcount(i & sign_mask)} |i ^ flip_mask>`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PauliMasks {
    pub flip: usize,
    pub sign: usize,
    pub n_y: u32,
}

impl PauliMasks {
    #[inline]
    pub fn phase(&self, index: usize) -> Complex64 {
        let negative = (index & self.sign).count_ones() & 1 == 1;
        let base = match self.n_y % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        if negative {
            -base
        } else {
            base
        }
    }
}

impl PauliString {
    pub fn new(coefficient: f64, letters: Vec<Pauli>) -> Result<Self> {
        if !coefficient.is_finite() {
            bail!(Argument, "non-finite Pauli coefficient {coefficient}");
        }
        Ok(PauliString { coefficient, letters })
    }

    /// Builds a string on `n_qubits` from sparse `(qubit, letter)` pairs.
    pub fn sparse(coefficient: f64, n_qubits: usize, ops: &[(usize, Pauli)]) -> Result<Self> {
        let mut letters = vec![Pauli::I; n_qubits];
        for &(q, p) in ops {
            if q >= n_qubits {
                bail!(Index, "qubit {q} out of range for {n_qubits} qubits");
            }
            letters[q] = p;
        }
        PauliString::new(coefficient, letters)
    }

    pub fn n_qubits(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.iter().all(|&p| p == Pauli::I)
    }

    pub(crate) fn masks(&self) -> PauliMasks {
        let n = self.letters.len();
        let mut masks = PauliMasks { flip: 0, sign: 0, n_y: 0 };
        for (q, &p) in self.letters.iter().enumerate() {
            let bit = 1usize << (n - 1 - q);
            match p {
                Pauli::I => {}
                Pauli::X => masks.flip |= bit,
                Pauli::Y => {
                    masks.flip |= bit;
                    masks.sign |= bit;
                    masks.n_y += 1;
                }
                Pauli::Z => masks.sign |= bit,
            }
        }
        masks
    }

    pub fn letters_string(&self) -> String {
        self.letters.iter().map(|p| p.as_char()).collect()
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.coefficient, self.letters_string())
    }
}

/// Weighted sum of Pauli strings over a fixed register.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct Hamiltonian {
    n_qubits: usize,
    terms: Vec<PauliString>,
}

impl Hamiltonian {
    pub fn new(n_qubits: usize, terms: Vec<PauliString>) -> Result<Self> {
        if let Some(t) = terms.iter().find(|t| t.n_qubits() != n_qubits) {
            bail!(
                Argument,
                "term {} has {} qubits, Hamiltonian has {n_qubits}",
                t.letters_string(),
                t.n_qubits()
            );
        }
        Ok(Hamiltonian { n_qubits, terms })
    }

    /// Single-qubit `Z` on `qubit`.
    pub fn z(n_qubits: usize, qubit: usize) -> Result<Self> {
        Hamiltonian::new(n_qubits, vec![PauliString::sparse(1.0, n_qubits, &[(qubit, Pauli::Z)])?])
    }

    /// Projector onto `|0>` of `qubit`: `(I + Z_q) / 2`.
    pub fn zero_projector(n_qubits: usize, qubit: usize) -> Result<Self> {
        Hamiltonian::new(
            n_qubits,
            vec![
                PauliString::sparse(0.5, n_qubits, &[])?,
                PauliString::sparse(0.5, n_qubits, &[(qubit, Pauli::Z)])?,
            ],
        )
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[PauliString] {
        &self.terms
    }

    /// Explicit `2^n x 2^n` matrix.
    pub fn to_dense(&self) -> Result<DMatrix<Complex64>> {
        if self.n_qubits > MAX_DENSE_QUBITS {
            bail!(
                Capability,
                "dense assembly supports at most {MAX_DENSE_QUBITS} qubits, got {}",
                self.n_qubits
            );
        }
        let dim = 1usize << self.n_qubits;
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for term in &self.terms {
            let masks = term.masks();
            for col in 0..dim {
                m[(col ^ masks.flip, col)] += masks.phase(col) * term.coefficient;
            }
        }
        Ok(m)
    }

    /// Minimum eigenvalue of the dense matrix.
    pub fn exact_ground_energy(&self) -> Result<f64> {
        let dense = self.to_dense()?;
        let eig = dense.symmetric_eigen();
        eig.eigenvalues
            .iter()
            .copied()
            .min_by(f64::total_cmp)
            .ok_or_else(|| QasError::Argument("empty Hamiltonian matrix".into()))
    }

    /// One `coeff letters` line per term.
    pub fn to_term_list(&self) -> String {
        let mut out = String::new();
        for t in &self.terms {
            out.push_str(&format!("{} {}\n", t.coefficient, t.letters_string()));
        }
        out
    }
}

impl FromStr for Hamiltonian {
    type Err = QasError;

    /// Parses the term-list format; blank lines and `#` comments are skipped.
    fn from_str(s: &str) -> Result<Self> {
        let mut terms = Vec::new();
        let mut n_qubits = None;
        for (lineno, line) in s.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(coeff), Some(word), None) = (parts.next(), parts.next(), parts.next()) else {
                bail!(Argument, "line {}: expected `coeff letters`", lineno + 1);
            };
            let coefficient: f64 = coeff
                .parse()
                .map_err(|_| QasError::Argument(format!("line {}: bad coefficient", lineno + 1)))?;
            let letters = word
                .chars()
                .map(Pauli::from_char)
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| QasError::Argument(format!("line {}: bad letters", lineno + 1)))?;
            n_qubits.get_or_insert(letters.len());
            terms.push(PauliString::new(coefficient, letters)?);
        }
        let Some(n) = n_qubits else {
            bail!(Argument, "empty term list");
        };
        Hamiltonian::new(n, terms)
    }
}
