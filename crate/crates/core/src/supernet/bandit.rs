use rand::Rng;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{bail, Result};

/// Exponential-weights (EXP3) state over `W` supernets, driven by losses.
///
/// Losses are mapped from `loss_range` onto `[0, 1]` and clipped; the
/// importance-weighted estimate `ℓ/p` updates the chosen arm only. The
/// learning rate is `sqrt(ln W / (W · T))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct BanditState {
    log_weights: Vec<f64>,
    learning_rate: f64,
    loss_range: (f64, f64),
    pulls: Vec<u64>,
}

impl BanditState {
    pub fn new(arms: usize, horizon: usize, loss_range: (f64, f64)) -> Result<Self> {
        if arms == 0 {
            bail!(Argument, "bandit needs at least one arm");
        }
        if !(loss_range.0 < loss_range.1) {
            bail!(Argument, "empty loss range {:?}", loss_range);
        }
        let w = arms as f64;
        let learning_rate = if arms == 1 {
            0.0
        } else {
            (w.ln() / (w * horizon.max(1) as f64)).sqrt()
        };
        Ok(BanditState {
            log_weights: vec![0.0; arms],
            learning_rate,
            loss_range,
            pulls: vec![0; arms],
        })
    }

    pub fn arms(&self) -> usize {
        self.log_weights.len()
    }

    pub fn learning_rate(&self) -> f64 {
        self.learning_rate
    }

    pub fn pulls(&self) -> &[u64] {
        &self.pulls
    }

    pub fn probabilities(&self) -> Vec<f64> {
        let max = self.log_weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let exp: Vec<f64> = self.log_weights.iter().map(|l| (l - max).exp()).collect();
        let total: f64 = exp.iter().sum();
        exp.into_iter().map(|e| e / total).collect()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let probs = self.probabilities();
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        for (i, p) in probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return i;
            }
        }
        probs.len() - 1
    }

    pub fn update(&mut self, arm: usize, loss: f64) -> Result<()> {
        if arm >= self.arms() {
            bail!(Index, "arm {arm} out of range for {} arms", self.arms());
        }
        if !loss.is_finite() {
            bail!(Numeric, "non-finite bandit loss {loss}");
        }
        let (lo, hi) = self.loss_range;
        let scaled = ((loss - lo) / (hi - lo)).clamp(0.0, 1.0);
        let p = self.probabilities()[arm];
        self.log_weights[arm] -= self.learning_rate * scaled / p;
        self.pulls[arm] += 1;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_pick_is_fair_coin() {
        let state = BanditState::new(2, 100, (0.0, 1.0)).unwrap();
        assert_eq!(state.probabilities(), vec![0.5, 0.5]);
        let ones: usize =
            (0..4000).map(|s| state.sample(&mut crate::seeded_rng(s, 0))).sum();
        let freq = ones as f64 / 4000.0;
        // 5σ for Bernoulli(1/2) over 4000 draws
        assert!((freq - 0.5).abs() < 5.0 * (0.25f64 / 4000.0).sqrt(), "{freq}");
    }

    #[test]
    fn converges_to_better_arm() {
        let horizon = 5000;
        let mut state = BanditState::new(2, horizon, (0.0, 1.0)).unwrap();
        let mut rng = crate::seeded_rng(17, 0);
        let mut late_good = 0;
        for t in 0..horizon {
            let arm = state.sample(&mut rng);
            let loss = if arm == 0 { 0.0 } else { 1.0 };
            state.update(arm, loss).unwrap();
            if t >= horizon - 1000 && arm == 0 {
                late_good += 1;
            }
        }
        assert!(late_good > 950, "{late_good}");
        assert!(state.probabilities()[0] > 0.99);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(BanditState::new(0, 1, (0.0, 1.0)).is_err());
        assert!(BanditState::new(2, 1, (1.0, 1.0)).is_err());
        let mut s = BanditState::new(2, 1, (0.0, 1.0)).unwrap();
        assert!(s.update(2, 0.0).is_err());
        assert!(s.update(0, f64::NAN).is_err());
    }
}
