use rand::Rng;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::bandit::BanditState;
use super::store::{InitPolicy, SupernetStore};
use crate::circuit::{self, Architecture, SearchSpace};
use crate::error::{bail, Result};
use crate::sim::NoiseModel;
use crate::tasks::Task;

/// `W` independently initialized weight-sharing stores over one space.
#[derive(Debug, Clone, PartialEq)]
pub struct SupernetEnsemble {
    space: SearchSpace,
    stores: Vec<SupernetStore>,
}

/// Outcome of assigning one sampled subnet to a store.
///
/// `losses[w]` is `None` for stores that were not evaluated (bandit mode).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct AssignmentRecord {
    pub iteration: usize,
    pub architecture: String,
    pub losses: Vec<Option<f64>>,
    pub chosen: usize,
}

impl AssignmentRecord {
    pub fn chosen_loss(&self) -> Option<f64> {
        self.losses.get(self.chosen).copied().flatten()
    }

    /// True when every store was evaluated.
    pub fn is_full(&self) -> bool {
        self.losses.iter().all(Option::is_some)
    }
}

/// Index of the smallest loss; ties go to the lowest index.
pub fn argmin(losses: &[f64]) -> usize {
    let mut best = 0;
    for (i, &l) in losses.iter().enumerate().skip(1) {
        if l < losses[best] {
            best = i;
        }
    }
    best
}

impl SupernetEnsemble {
    /// Store seeds are drawn from a dedicated stream of `seed`, so stores differ.
    pub fn new(space: &SearchSpace, w: usize, policy: InitPolicy, seed: u64) -> Result<Self> {
        if w == 0 {
            bail!(Argument, "ensemble needs at least one supernet");
        }
        let mut rng = crate::seeded_rng(seed, 0x5eed);
        let mut seeds: Vec<u64> = Vec::with_capacity(w);
        while seeds.len() < w {
            let s = rng.gen();
            if !seeds.contains(&s) {
                seeds.push(s);
            }
        }
        let stores = seeds.into_iter().map(|s| SupernetStore::new(space, policy, s)).collect();
        Ok(SupernetEnsemble { space: space.clone(), stores })
    }

    pub fn from_stores(stores: Vec<SupernetStore>) -> Result<Self> {
        let Some(first) = stores.first() else {
            bail!(Argument, "ensemble needs at least one supernet");
        };
        let space = first.space().clone();
        if stores.iter().any(|s| s.space() != &space) {
            bail!(Argument, "stores in an ensemble must share a search space");
        }
        Ok(SupernetEnsemble { space, stores })
    }

    pub fn space(&self) -> &SearchSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.stores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stores.is_empty()
    }

    pub fn stores(&self) -> &[SupernetStore] {
        &self.stores
    }

    pub fn store(&self, w: usize) -> &SupernetStore {
        &self.stores[w]
    }

    pub fn store_mut(&mut self, w: usize) -> &mut SupernetStore {
        &mut self.stores[w]
    }

    /// Loss of `arch` under store `w`.
    pub fn evaluate(
        &self,
        w: usize,
        arch: &Architecture,
        task: &dyn Task,
        noise: &NoiseModel,
    ) -> Result<f64> {
        let params = self.stores[w].get_params(arch)?;
        circuit::evaluate(&self.space, arch, &params, task, noise)
    }

    /// Evaluates every store and picks the argmin (lowest index on ties).
    pub fn assign_greedy(
        &self,
        arch: &Architecture,
        task: &dyn Task,
        noise: &NoiseModel,
    ) -> Result<AssignmentRecord> {
        let losses = (0..self.len())
            .map(|w| self.evaluate(w, arch, task, noise))
            .collect::<Result<Vec<_>>>()?;
        let chosen = argmin(&losses);
        Ok(AssignmentRecord {
            iteration: 0,
            architecture: arch.to_text(&self.space),
            losses: losses.into_iter().map(Some).collect(),
            chosen,
        })
    }

    /// Samples one store from the exponential weights, evaluates only that
    /// store and feeds its loss back to the bandit.
    pub fn assign_bandit<R: Rng + ?Sized>(
        &self,
        arch: &Architecture,
        task: &dyn Task,
        noise: &NoiseModel,
        bandit: &mut BanditState,
        rng: &mut R,
    ) -> Result<AssignmentRecord> {
        if bandit.arms() != self.len() {
            bail!(Argument, "bandit has {} arms for {} supernets", bandit.arms(), self.len());
        }
        let chosen = bandit.sample(rng);
        let loss = self.evaluate(chosen, arch, task, noise)?;
        bandit.update(chosen, loss)?;
        let mut losses = vec![None; self.len()];
        losses[chosen] = Some(loss);
        Ok(AssignmentRecord {
            iteration: 0,
            architecture: arch.to_text(&self.space),
            losses,
            chosen,
        })
    }

    /// Minimum loss over all stores and the store attaining it.
    pub fn eval_min(
        &self,
        arch: &Architecture,
        task: &dyn Task,
        noise: &NoiseModel,
    ) -> Result<(f64, usize)> {
        let rec = self.assign_greedy(arch, task, noise)?;
        let loss = rec.chosen_loss().expect("greedy records are full");
        Ok((loss, rec.chosen))
    }
}
