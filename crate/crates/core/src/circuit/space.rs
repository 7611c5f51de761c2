use num_bigint::BigUint;
use rand::Rng;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::arch::{Architecture, LayerChoice};
use crate::error::{bail, Result};
use crate::sim::GateKind;

/// Discrete space of layered circuits.
///
/// Every layer is: the fixed prefix gates on all qubits, then one rotation per
/// qubit for each rotation slot (chosen from that slot's pool), then a CNOT for
/// every active candidate pair in declaration order. The usual search spaces
/// have a single slot; multi-slot spaces express dense baselines such as
/// `RY` then `RZ` on every qubit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct SearchSpace {
    pub n_qubits: usize,
    pub n_layers: usize,
    pub rotation_slots: Vec<Vec<GateKind>>,
    /// Directed `(control, target)` pairs.
    pub candidate_pairs: Vec<(usize, usize)>,
    #[serde(default)]
    pub fixed_prefix: Vec<GateKind>,
}

/// Upper bound on candidate pairs (they are packed into a `u64` mask).
pub const MAX_PAIRS: usize = 64;

impl SearchSpace {
    /// Single-slot space with the given rotation pool.
    pub fn new(
        n_qubits: usize,
        n_layers: usize,
        pool: Vec<GateKind>,
        candidate_pairs: Vec<(usize, usize)>,
    ) -> Result<Self> {
        SearchSpace::with_slots(n_qubits, n_layers, vec![pool], candidate_pairs, vec![])
    }

    pub fn with_slots(
        n_qubits: usize,
        n_layers: usize,
        rotation_slots: Vec<Vec<GateKind>>,
        candidate_pairs: Vec<(usize, usize)>,
        fixed_prefix: Vec<GateKind>,
    ) -> Result<Self> {
        let space =
            SearchSpace { n_qubits, n_layers, rotation_slots, candidate_pairs, fixed_prefix };
        space.validate()?;
        Ok(space)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_qubits == 0 {
            bail!(Argument, "search space needs at least one qubit");
        }
        if self.n_layers == 0 {
            bail!(Argument, "search space needs at least one layer");
        }
        if self.rotation_slots.is_empty() {
            bail!(Argument, "search space needs at least one rotation slot");
        }
        for pool in &self.rotation_slots {
            if pool.is_empty() {
                bail!(Argument, "empty rotation pool");
            }
            if pool.len() > u8::MAX as usize {
                bail!(Argument, "rotation pool too large");
            }
            if let Some(k) = pool.iter().find(|k| !k.is_rotation()) {
                bail!(Argument, "{k} is not a trainable rotation");
            }
        }
        if self.candidate_pairs.len() > MAX_PAIRS {
            bail!(Argument, "at most {MAX_PAIRS} candidate pairs supported");
        }
        for &(a, b) in &self.candidate_pairs {
            if a >= self.n_qubits || b >= self.n_qubits {
                bail!(Index, "pair ({a}, {b}) out of range for {} qubits", self.n_qubits);
            }
            if a == b {
                bail!(Argument, "pair ({a}, {b}) must reference distinct qubits");
            }
        }
        if let Some(k) = self.fixed_prefix.iter().find(|k| k.is_rotation() || k.arity() != 1) {
            bail!(Argument, "prefix gate {k} must be a fixed single-qubit gate");
        }
        Ok(())
    }

    pub fn n_slots(&self) -> usize {
        self.rotation_slots.len()
    }

    /// Trainable angles per layer.
    pub fn params_per_layer(&self) -> usize {
        self.n_slots() * self.n_qubits
    }

    pub fn n_params(&self) -> usize {
        self.params_per_layer() * self.n_layers
    }

    /// Distinct single-qubit layouts of one layer: `Π_s |pool_s|^N`.
    pub fn layouts_per_layer(&self) -> BigUint {
        self.rotation_slots
            .iter()
            .map(|p| BigUint::from(p.len()).pow(self.n_qubits as u32))
            .product()
    }

    /// Number of architectures: `(layouts · 2^pairs)^L`.
    pub fn size(&self) -> BigUint {
        let per_layer = self.layouts_per_layer() << self.candidate_pairs.len();
        per_layer.pow(self.n_layers as u32)
    }

    pub fn pair_mask_all(&self) -> u64 {
        match self.candidate_pairs.len() {
            0 => 0,
            64 => u64::MAX,
            n => (1u64 << n) - 1,
        }
    }

    /// Independent uniform choice of every gate index and pair bit.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Architecture {
        let layers = (0..self.n_layers)
            .map(|_| {
                let mut rotations = Vec::with_capacity(self.params_per_layer());
                for pool in &self.rotation_slots {
                    for _ in 0..self.n_qubits {
                        rotations.push(rng.gen_range(0..pool.len()) as u8);
                    }
                }
                let pairs = if self.candidate_pairs.is_empty() {
                    0
                } else {
                    rng.gen::<u64>() & self.pair_mask_all()
                };
                LayerChoice { rotations, pairs }
            })
            .collect();
        Architecture { layers }
    }

    pub fn contains(&self, arch: &Architecture) -> bool {
        arch.validate_for(self).is_ok()
    }

    /// Every architecture in the space, in mixed-radix order. Intended for tiny spaces.
    pub fn enumerate(&self) -> Result<Vec<Architecture>> {
        let size = self.size();
        let Ok(count) = u64::try_from(&size) else {
            bail!(Capability, "space of size {size} is too large to enumerate");
        };
        if count > 1 << 24 {
            bail!(Capability, "space of size {size} is too large to enumerate");
        }
        let per_layer_layouts = u64::try_from(self.layouts_per_layer()).unwrap_or(u64::MAX);
        let per_layer = per_layer_layouts << self.candidate_pairs.len();
        let mut out = Vec::with_capacity(count as usize);
        for mut code in 0..count {
            let mut layers = Vec::with_capacity(self.n_layers);
            for _ in 0..self.n_layers {
                let mut layer_code = code % per_layer;
                code /= per_layer;
                let pairs = layer_code & self.pair_mask_all();
                layer_code >>= self.candidate_pairs.len();
                let mut rotations = Vec::with_capacity(self.params_per_layer());
                for pool in &self.rotation_slots {
                    for _ in 0..self.n_qubits {
                        rotations.push((layer_code % pool.len() as u64) as u8);
                        layer_code /= pool.len() as u64;
                    }
                }
                layers.push(LayerChoice { rotations, pairs });
            }
            out.push(Architecture { layers });
        }
        Ok(out)
    }

    /// Short stable hash of the canonical JSON form.
    pub fn fingerprint(&self) -> String {
        let json = serde_json::to_string(self).expect("search space serializes");
        let digest = Sha256::digest(json.as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}
