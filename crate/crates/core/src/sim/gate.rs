use std::f64::consts::FRAC_PI_4;
use std::fmt;

use num_complex::Complex64;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{bail, Result};

/// Gate set shared by every search space.
///
/// Rotations follow `R_P(θ) = exp(-iθP/2)`; the parameter-shift rule relies on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, JsonSchema)]
pub enum GateKind {
    RX,
    RY,
    RZ,
    T,
    CNOT,
    Identity,
}

impl GateKind {
    pub fn is_rotation(self) -> bool {
        matches!(self, GateKind::RX | GateKind::RY | GateKind::RZ)
    }

    pub fn arity(self) -> usize {
        match self {
            GateKind::CNOT => 2,
            _ => 1,
        }
    }

    /// Single-letter form used by the architecture text encoding.
    pub fn letter(self) -> char {
        match self {
            GateKind::RX => 'X',
            GateKind::RY => 'Y',
            GateKind::RZ => 'Z',
            GateKind::T => 'T',
            GateKind::CNOT => 'C',
            GateKind::Identity => 'I',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        Some(match c {
            'X' => GateKind::RX,
            'Y' => GateKind::RY,
            'Z' => GateKind::RZ,
            'T' => GateKind::T,
            'C' => GateKind::CNOT,
            'I' => GateKind::Identity,
            _ => return None,
        })
    }

    /// 2x2 matrix, row-major, for single-qubit kinds.
    pub(crate) fn matrix(self, angle: f64) -> [Complex64; 4] {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let (s, c) = (angle / 2.0).sin_cos();
        match self {
            GateKind::RX => [
                Complex64::new(c, 0.0),
                Complex64::new(0.0, -s),
                Complex64::new(0.0, -s),
                Complex64::new(c, 0.0),
            ],
            GateKind::RY => [
                Complex64::new(c, 0.0),
                Complex64::new(-s, 0.0),
                Complex64::new(s, 0.0),
                Complex64::new(c, 0.0),
            ],
            GateKind::RZ => [Complex64::new(c, -s), zero, zero, Complex64::new(c, s)],
            GateKind::T => [one, zero, zero, Complex64::from_polar(1.0, FRAC_PI_4)],
            GateKind::Identity => [one, zero, zero, one],
            GateKind::CNOT => unreachable!("CNOT has no 2x2 matrix"),
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            GateKind::RX => "RX",
            GateKind::RY => "RY",
            GateKind::RZ => "RZ",
            GateKind::T => "T",
            GateKind::CNOT => "CNOT",
            GateKind::Identity => "I",
        };
        f.write_str(name)
    }
}

/// One gate application. `param` links a trainable rotation to its slot in the
/// flat parameter vector; fixed gates (encoding, prefixes, CNOTs) carry `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
    pub angle: Option<f64>,
    pub param: Option<usize>,
}

impl Gate {
    pub fn rotation(kind: GateKind, qubit: usize, angle: f64) -> Self {
        debug_assert!(kind.is_rotation());
        Gate { kind, qubits: vec![qubit], angle: Some(angle), param: None }
    }

    pub fn trainable(kind: GateKind, qubit: usize, angle: f64, param: usize) -> Self {
        Gate { param: Some(param), ..Gate::rotation(kind, qubit, angle) }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Gate { kind: GateKind::CNOT, qubits: vec![control, target], angle: None, param: None }
    }

    pub fn fixed(kind: GateKind, qubit: usize) -> Self {
        Gate { kind, qubits: vec![qubit], angle: None, param: None }
    }
}

/// Checks qubit indices and angle presence for one application.
pub(crate) fn validate(
    kind: GateKind,
    qubits: &[usize],
    angle: Option<f64>,
    n_qubits: usize,
) -> Result<()> {
    if qubits.len() != kind.arity() {
        bail!(Argument, "{kind} acts on {} qubit(s), got {}", kind.arity(), qubits.len());
    }
    if let Some(&q) = qubits.iter().find(|&&q| q >= n_qubits) {
        bail!(Index, "qubit {q} out of range for {n_qubits}-qubit state");
    }
    if qubits.len() == 2 && qubits[0] == qubits[1] {
        bail!(Argument, "{kind} needs distinct qubits, got {:?}", qubits);
    }
    match (kind.is_rotation(), angle) {
        (true, None) => bail!(Argument, "{kind} requires an angle"),
        (false, Some(_)) => bail!(Argument, "{kind} takes no angle"),
        (true, Some(a)) if !a.is_finite() => bail!(Argument, "non-finite angle {a}"),
        _ => Ok(()),
    }
}
