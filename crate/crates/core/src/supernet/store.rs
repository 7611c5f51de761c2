use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_bigint::BigUint;
use rand::Rng;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::circuit::{Architecture, LayoutKey, ParamAssignment, SearchSpace};
use crate::error::{bail, QasError, Result};
use crate::sim::GateKind;

/// How unmaterialized parameter rows are initialized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InitPolicy {
    Uniform { low: f64, high: f64 },
    Constant { value: f64 },
}

impl Default for InitPolicy {
    fn default() -> Self {
        InitPolicy::Uniform { low: 0.0, high: TAU }
    }
}

/// Weight-sharing parameter table: one angle row per [`LayoutKey`].
///
/// Rows are created lazily. A row that has never been written is a pure
/// function of `(seed, key)`, so reads never mutate the store and two stores
/// built from the same seed agree bit-for-bit.
#[derive(Debug, Clone, PartialEq)]
pub struct SupernetStore {
    space: SearchSpace,
    seed: u64,
    policy: InitPolicy,
    entries: BTreeMap<LayoutKey, Vec<f64>>,
}

/// FNV-1a over the layer index and layout letters.
fn key_stream(key: &LayoutKey) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |b: u8| {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    };
    for b in (key.layer as u64).to_le_bytes() {
        eat(b);
    }
    for g in &key.gates {
        eat(g.letter() as u8);
    }
    h
}

impl SupernetStore {
    pub fn new(space: &SearchSpace, policy: InitPolicy, seed: u64) -> Self {
        SupernetStore { space: space.clone(), seed, policy, entries: BTreeMap::new() }
    }

    pub fn space(&self) -> &SearchSpace {
        &self.space
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn policy(&self) -> InitPolicy {
        self.policy
    }

    fn initial_row(&self, key: &LayoutKey) -> Vec<f64> {
        let len = self.space.params_per_layer();
        match self.policy {
            InitPolicy::Constant { value } => vec![value; len],
            InitPolicy::Uniform { low, high } => {
                let mut rng = crate::seeded_rng(self.seed, key_stream(key));
                (0..len).map(|_| rng.gen_range(low..high)).collect()
            }
        }
    }

    /// Angles for one layout.
    pub fn row(&self, key: &LayoutKey) -> Vec<f64> {
        self.entries.get(key).cloned().unwrap_or_else(|| self.initial_row(key))
    }

    pub fn set_row(&mut self, key: LayoutKey, angles: Vec<f64>) -> Result<()> {
        if key.layer >= self.space.n_layers || key.gates.len() != self.space.params_per_layer() {
            bail!(Argument, "layout key {} does not fit the store's space", key.letters());
        }
        if angles.len() != self.space.params_per_layer() {
            bail!(Argument, "row has {} angles, expected {}", angles.len(), self.space.params_per_layer());
        }
        self.entries.insert(key, angles);
        Ok(())
    }

    /// Parameters seen by `arch`: row `l` is looked up by layer `l`'s layout.
    pub fn get_params(&self, arch: &Architecture) -> Result<ParamAssignment> {
        arch.validate_for(&self.space)?;
        let layers = arch.layout_keys(&self.space).iter().map(|k| self.row(k)).collect();
        Ok(ParamAssignment { layers })
    }

    /// Writes every layer row of `arch` back into the table.
    pub fn write_params(&mut self, arch: &Architecture, params: &ParamAssignment) -> Result<()> {
        arch.validate_for(&self.space)?;
        params.validate_for(&self.space)?;
        for (key, row) in arch.layout_keys(&self.space).into_iter().zip(&params.layers) {
            self.entries.insert(key, row.clone());
        }
        Ok(())
    }

    /// Materializes every layout of every layer. Only for small pools.
    pub fn materialize_all(&mut self) -> Result<()> {
        for key in all_layout_keys(&self.space)? {
            if !self.entries.contains_key(&key) {
                let row = self.initial_row(&key);
                self.entries.insert(key, row);
            }
        }
        Ok(())
    }

    pub fn materialized_keys(&self) -> usize {
        self.entries.len()
    }

    /// Number of stored (materialized) angles.
    pub fn parameter_count(&self) -> usize {
        self.entries.len() * self.space.params_per_layer()
    }

    /// Upper bound `L · layouts_per_layer · params_per_layer`.
    pub fn max_parameter_count(&self) -> BigUint {
        self.space.layouts_per_layer()
            * BigUint::from(self.space.n_layers)
            * BigUint::from(self.space.params_per_layer())
    }

    pub fn to_document(&self) -> StoreDocument {
        StoreDocument {
            space_fingerprint: self.space.fingerprint(),
            seed: self.seed,
            policy: self.policy,
            entries: self
                .entries
                .iter()
                .map(|(k, v)| StoreEntry { layer: k.layer, layout: k.letters(), angles: v.clone() })
                .collect(),
        }
    }

    pub fn from_document(space: &SearchSpace, doc: &StoreDocument) -> Result<Self> {
        if doc.space_fingerprint != space.fingerprint() {
            bail!(
                Argument,
                "store fingerprint {} does not match space {}",
                doc.space_fingerprint,
                space.fingerprint()
            );
        }
        let mut store = SupernetStore::new(space, doc.policy, doc.seed);
        for e in &doc.entries {
            let gates = e
                .layout
                .chars()
                .map(GateKind::from_letter)
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| QasError::Argument(format!("bad layout `{}`", e.layout)))?;
            store.set_row(LayoutKey { layer: e.layer, gates }, e.angles.clone())?;
        }
        Ok(store)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_document())?)
    }

    pub fn from_json(space: &SearchSpace, text: &str) -> Result<Self> {
        let doc: StoreDocument = serde_json::from_str(text)?;
        SupernetStore::from_document(space, &doc)
    }
}

/// Serialized form of a store.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct StoreDocument {
    pub space_fingerprint: String,
    pub seed: u64,
    pub policy: InitPolicy,
    pub entries: Vec<StoreEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct StoreEntry {
    pub layer: usize,
    pub layout: String,
    pub angles: Vec<f64>,
}

/// Every layout key of the space.
pub fn all_layout_keys(space: &SearchSpace) -> Result<Vec<LayoutKey>> {
    let per_layer = space.layouts_per_layer();
    let Some(count) = u64::try_from(&per_layer).ok().filter(|&c| c <= 1 << 20) else {
        bail!(Capability, "{per_layer} layouts per layer is too many to materialize");
    };
    let n = space.n_qubits;
    let mut keys = Vec::with_capacity(count as usize * space.n_layers);
    for layer in 0..space.n_layers {
        for mut code in 0..count {
            let mut gates = Vec::with_capacity(space.params_per_layer());
            for i in 0..space.params_per_layer() {
                let pool = &space.rotation_slots[i / n];
                gates.push(pool[(code % pool.len() as u64) as usize]);
                code /= pool.len() as u64;
            }
            keys.push(LayoutKey { layer, gates });
        }
    }
    Ok(keys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tasks::{classification_space, vqe_space};

    #[test]
    fn eager_counts_match_sharing_rule() {
        let mut cls = SupernetStore::new(&classification_space(), InitPolicy::default(), 1);
        cls.materialize_all().unwrap();
        assert_eq!(cls.materialized_keys(), 3);
        assert_eq!(cls.parameter_count(), 9);

        let mut vqe = SupernetStore::new(&vqe_space(), InitPolicy::default(), 1);
        vqe.materialize_all().unwrap();
        assert_eq!(vqe.materialized_keys(), 48);
        assert_eq!(vqe.parameter_count(), 192);
        assert_eq!(vqe.max_parameter_count(), BigUint::from(192u32));
    }

    #[test]
    fn same_seed_same_store() {
        let space = vqe_space();
        let mut a = SupernetStore::new(&space, InitPolicy::default(), 42);
        let mut b = SupernetStore::new(&space, InitPolicy::default(), 42);
        a.materialize_all().unwrap();
        b.materialize_all().unwrap();
        assert_eq!(a, b);
        let mut c = SupernetStore::new(&space, InitPolicy::default(), 43);
        c.materialize_all().unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn pair_masks_do_not_change_parameters() {
        let space = classification_space();
        let store = SupernetStore::new(&space, InitPolicy::default(), 5);
        let mut rng = crate::seeded_rng(0, 0);
        let a = space.sample_uniform(&mut rng);
        let mut b = a.clone();
        b.layers.iter_mut().for_each(|l| l.pairs = !l.pairs & 0b111);
        assert_eq!(store.get_params(&a).unwrap(), store.get_params(&b).unwrap());
    }

    #[test]
    fn layer_layout_difference_gives_independent_row() {
        let space = vqe_space();
        let mut store = SupernetStore::new(&space, InitPolicy::default(), 5);
        let mut rng = crate::seeded_rng(0, 1);
        let a = space.sample_uniform(&mut rng);
        let mut b = a.clone();
        b.layers[1].rotations[2] ^= 1;
        let pa = store.get_params(&a).unwrap();
        let mut updated = pa.clone();
        updated.layers.iter_mut().flatten().for_each(|x| *x += 1.0);
        store.write_params(&a, &updated).unwrap();
        let pb = store.get_params(&b).unwrap();
        assert_eq!(pb.layers[0], updated.layers[0]);
        assert_eq!(pb.layers[2], updated.layers[2]);
        assert_ne!(pb.layers[1], updated.layers[1]);
    }

    #[test]
    fn json_round_trip_preserves_reads() {
        let space = vqe_space();
        let mut store = SupernetStore::new(&space, InitPolicy::default(), 9);
        let mut rng = crate::seeded_rng(2, 2);
        let a = space.sample_uniform(&mut rng);
        let mut p = store.get_params(&a).unwrap();
        p.layers[0][0] = 0.123_456_789_012_345_6;
        store.write_params(&a, &p).unwrap();
        let back = SupernetStore::from_json(&space, &store.to_json().unwrap()).unwrap();
        assert_eq!(back, store);
        for _ in 0..20 {
            let x = space.sample_uniform(&mut rng);
            assert_eq!(back.get_params(&x).unwrap(), store.get_params(&x).unwrap());
        }
        let other = classification_space();
        assert!(SupernetStore::from_json(&other, &store.to_json().unwrap()).is_err());
    }
}
