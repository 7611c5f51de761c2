use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::gate::GateKind;
use crate::error::{bail, Result};

/// Per-gate depolarizing noise: `p1` after every single-qubit gate, `p2` on both
/// qubits after every CNOT. Identity placeholders are noise-free.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct NoiseModel {
    pub p1: f64,
    pub p2: f64,
    pub enabled: bool,
}

impl NoiseModel {
    pub fn noiseless() -> Self {
        NoiseModel { p1: 0.0, p2: 0.0, enabled: false }
    }

    pub fn depolarizing(p1: f64, p2: f64) -> Result<Self> {
        let model = NoiseModel { p1, p2, enabled: true };
        model.validate()?;
        Ok(model)
    }

    /// The 0.05 / 0.2 setting used for the noisy benchmarks.
    pub fn benchmark() -> Self {
        NoiseModel { p1: 0.05, p2: 0.2, enabled: true }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [("p1", self.p1), ("p2", self.p2)] {
            if !(0.0..=1.0).contains(&p) {
                bail!(Argument, "{name} = {p} outside [0, 1]");
            }
        }
        Ok(())
    }

    /// True when simulation must go through density matrices.
    pub fn is_active(&self) -> bool {
        self.enabled && (self.p1 > 0.0 || self.p2 > 0.0)
    }

    pub fn probability_for(&self, kind: GateKind) -> f64 {
        if !self.enabled {
            return 0.0;
        }
        match kind {
            GateKind::Identity => 0.0,
            GateKind::CNOT => self.p2,
            _ => self.p1,
        }
    }
}

impl Default for NoiseModel {
    fn default() -> Self {
        NoiseModel::noiseless()
    }
}
