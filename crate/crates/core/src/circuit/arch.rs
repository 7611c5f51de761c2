use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::space::SearchSpace;
use crate::error::{bail, QasError, Result};
use crate::sim::GateKind;

/// Choices for one layer: a pool index per (slot, qubit), slot-major, and a
/// bitmask over the space's candidate pairs (bit `i` = pair `i` active).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, JsonSchema)]
pub struct LayerChoice {
    pub rotations: Vec<u8>,
    pub pairs: u64,
}

/// One subnet of a [`SearchSpace`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, JsonSchema)]
pub struct Architecture {
    pub layers: Vec<LayerChoice>,
}

/// Identifies a layer's single-qubit layout; the weight-sharing key.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, JsonSchema)]
pub struct LayoutKey {
    pub layer: usize,
    pub gates: Vec<GateKind>,
}

impl LayoutKey {
    pub fn letters(&self) -> String {
        self.gates.iter().map(|g| g.letter()).collect()
    }
}

/// Rotation angles per layer, `slots · N` entries each, slot-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct ParamAssignment {
    pub layers: Vec<Vec<f64>>,
}

impl ParamAssignment {
    pub fn zeros(space: &SearchSpace) -> Self {
        ParamAssignment { layers: vec![vec![0.0; space.params_per_layer()]; space.n_layers] }
    }

    /// Layer-major flat view; the order used by gradients.
    pub fn flat(&self) -> Vec<f64> {
        self.layers.iter().flatten().copied().collect()
    }

    pub fn from_flat(space: &SearchSpace, flat: &[f64]) -> Result<Self> {
        if flat.len() != space.n_params() {
            bail!(Argument, "expected {} parameters, got {}", space.n_params(), flat.len());
        }
        let layers = flat.chunks(space.params_per_layer()).map(<[f64]>::to_vec).collect();
        Ok(ParamAssignment { layers })
    }

    pub fn validate_for(&self, space: &SearchSpace) -> Result<()> {
        if self.layers.len() != space.n_layers {
            bail!(Argument, "parameters have {} layers, space has {}", self.layers.len(), space.n_layers);
        }
        for (l, row) in self.layers.iter().enumerate() {
            if row.len() != space.params_per_layer() {
                bail!(
                    Argument,
                    "layer {l} has {} angles, expected {}",
                    row.len(),
                    space.params_per_layer()
                );
            }
            if let Some(a) = row.iter().find(|a| !a.is_finite()) {
                bail!(Argument, "layer {l} has non-finite angle {a}");
            }
        }
        Ok(())
    }
}

impl Architecture {
    pub fn validate_for(&self, space: &SearchSpace) -> Result<()> {
        if self.layers.len() != space.n_layers {
            bail!(Argument, "architecture has {} layers, space has {}", self.layers.len(), space.n_layers);
        }
        for (l, layer) in self.layers.iter().enumerate() {
            if layer.rotations.len() != space.params_per_layer() {
                bail!(Argument, "layer {l} has {} rotation choices", layer.rotations.len());
            }
            for (s, pool) in space.rotation_slots.iter().enumerate() {
                let chunk = &layer.rotations[s * space.n_qubits..(s + 1) * space.n_qubits];
                if let Some(&i) = chunk.iter().find(|&&i| i as usize >= pool.len()) {
                    bail!(Index, "layer {l} slot {s}: pool index {i} out of range");
                }
            }
            if layer.pairs & !space.pair_mask_all() != 0 {
                bail!(Index, "layer {l}: pair mask {:#b} exceeds candidate pairs", layer.pairs);
            }
        }
        Ok(())
    }

    /// Gate kinds of layer `l`, slot-major.
    pub fn layer_gates(&self, space: &SearchSpace, l: usize) -> Vec<GateKind> {
        let n = space.n_qubits;
        self.layers[l]
            .rotations
            .iter()
            .enumerate()
            .map(|(i, &choice)| space.rotation_slots[i / n][choice as usize])
            .collect()
    }

    pub fn layout_key(&self, space: &SearchSpace, l: usize) -> LayoutKey {
        LayoutKey { layer: l, gates: self.layer_gates(space, l) }
    }

    pub fn layout_keys(&self, space: &SearchSpace) -> Vec<LayoutKey> {
        (0..self.layers.len()).map(|l| self.layout_key(space, l)).collect()
    }

    pub fn active_cnots(&self) -> u32 {
        self.layers.iter().map(|l| l.pairs.count_ones()).sum()
    }

    /// Canonical text form: layers joined by `|`; each layer is the gate
    /// letters per qubit (slots separated by `.`), a `:`, then one `0`/`1` per
    /// candidate pair in declaration order. Example: `YYY:101|YYY:111|YYY:000`.
    pub fn to_text(&self, space: &SearchSpace) -> String {
        let n = space.n_qubits;
        let mut layers = Vec::with_capacity(self.layers.len());
        for l in 0..self.layers.len() {
            let gates = self.layer_gates(space, l);
            let slots: Vec<String> =
                gates.chunks(n).map(|c| c.iter().map(|g| g.letter()).collect()).collect();
            let bits: String = (0..space.candidate_pairs.len())
                .map(|i| if self.layers[l].pairs >> i & 1 == 1 { '1' } else { '0' })
                .collect();
            layers.push(format!("{}:{}", slots.join("."), bits));
        }
        layers.join("|")
    }

    pub fn parse(space: &SearchSpace, text: &str) -> Result<Self> {
        let bad = |msg: &str| QasError::Argument(format!("architecture `{text}`: {msg}"));
        let mut layers = Vec::new();
        for layer_text in text.trim().split('|') {
            let (gates, bits) = layer_text.split_once(':').ok_or_else(|| bad("missing `:`"))?;
            let slot_texts: Vec<&str> = gates.split('.').collect();
            if slot_texts.len() != space.n_slots() {
                return Err(bad("wrong number of rotation slots"));
            }
            let mut rotations = Vec::with_capacity(space.params_per_layer());
            for (slot_text, pool) in slot_texts.iter().zip(&space.rotation_slots) {
                if slot_text.chars().count() != space.n_qubits {
                    return Err(bad("wrong number of qubits"));
                }
                for c in slot_text.chars() {
                    let kind = GateKind::from_letter(c).ok_or_else(|| bad("unknown gate letter"))?;
                    let idx = pool
                        .iter()
                        .position(|&k| k == kind)
                        .ok_or_else(|| bad("gate not in pool"))?;
                    rotations.push(idx as u8);
                }
            }
            if bits.len() != space.candidate_pairs.len() {
                return Err(bad("wrong number of pair bits"));
            }
            let mut pairs = 0u64;
            for (i, c) in bits.chars().enumerate() {
                match c {
                    '0' => {}
                    '1' => pairs |= 1 << i,
                    _ => return Err(bad("pair bits must be 0 or 1")),
                }
            }
            layers.push(LayerChoice { rotations, pairs });
        }
        let arch = Architecture { layers };
        arch.validate_for(space)?;
        Ok(arch)
    }
}
