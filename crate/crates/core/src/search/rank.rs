use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::config::ScoreMode;
use super::train::TrainHistory;
use crate::circuit::Architecture;
use crate::error::{bail, Result};
use crate::sim::NoiseModel;
use crate::supernet::SupernetEnsemble;
use crate::tasks::Task;

/// One scored subnet. `objective` is the task loss (lower is better).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct RankingEntry {
    pub architecture: String,
    pub objective: f64,
    pub store: usize,
    pub active_cnots: u32,
}

pub(crate) fn entry_order(a: &RankingEntry, b: &RankingEntry) -> Ordering {
    a.objective.total_cmp(&b.objective).then_with(|| a.architecture.cmp(&b.architecture))
}

/// Sorts best-first by `(objective, architecture text)`.
pub fn sort_entries(entries: &mut [RankingEntry]) {
    entries.sort_by(entry_order);
}

/// Scores subnets against a frozen ensemble.
pub struct Scorer<'a> {
    ensemble: &'a SupernetEnsemble,
    task: &'a dyn Task,
    noise: NoiseModel,
    last: Option<HashMap<String, usize>>,
}

impl<'a> Scorer<'a> {
    pub fn new(ensemble: &'a SupernetEnsemble, task: &'a dyn Task, noise: NoiseModel) -> Self {
        Scorer { ensemble, task, noise, last: None }
    }

    pub fn with_mode(mut self, mode: ScoreMode, history: &TrainHistory) -> Self {
        self.last = match mode {
            ScoreMode::Min => None,
            ScoreMode::LastAssigned => Some(history.last_assigned()),
        };
        self
    }

    pub fn ensemble(&self) -> &SupernetEnsemble {
        self.ensemble
    }

    pub fn score(&self, arch: &Architecture) -> Result<RankingEntry> {
        let space = self.ensemble.space();
        let architecture = arch.to_text(space);
        let assigned = self.last.as_ref().and_then(|m| m.get(&architecture).copied());
        let (objective, store) = match assigned {
            Some(w) => (self.ensemble.evaluate(w, arch, self.task, &self.noise)?, w),
            None => self.ensemble.eval_min(arch, self.task, &self.noise)?,
        };
        Ok(RankingEntry { architecture, objective, store, active_cnots: arch.active_cnots() })
    }

    /// Scores in parallel; output order follows input order.
    pub fn score_all(&self, archs: &[Architecture]) -> Result<Vec<RankingEntry>> {
        archs.par_iter().map(|a| self.score(a)).collect()
    }
}

/// `k` uniform samples scored and sorted best-first.
pub fn rank_uniform<R: Rng + ?Sized>(
    scorer: &Scorer<'_>,
    k: usize,
    rng: &mut R,
) -> Result<Vec<RankingEntry>> {
    let space = scorer.ensemble().space();
    let archs: Vec<Architecture> = (0..k).map(|_| space.sample_uniform(rng)).collect();
    let mut entries = scorer.score_all(&archs)?;
    sort_entries(&mut entries);
    Ok(entries)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct HistogramBin {
    pub bin_low: f64,
    pub bin_high: f64,
    pub count: usize,
}

/// Equal-width histogram; the last bin is closed on the right. Values outside
/// `range` are dropped. Without a range the data extent is used.
pub fn histogram(values: &[f64], bins: usize, range: Option<(f64, f64)>) -> Result<Vec<HistogramBin>> {
    if bins == 0 {
        bail!(Argument, "histogram needs at least one bin");
    }
    let (lo, hi) = match range {
        Some(r) => r,
        None => {
            let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if !lo.is_finite() {
                (0.0, 1.0)
            } else if lo == hi {
                (lo - 0.5, hi + 0.5)
            } else {
                (lo, hi)
            }
        }
    };
    if !(lo < hi) {
        bail!(Argument, "empty histogram range [{lo}, {hi}]");
    }
    let width = (hi - lo) / bins as f64;
    let mut out: Vec<HistogramBin> = (0..bins)
        .map(|i| HistogramBin {
            bin_low: lo + i as f64 * width,
            bin_high: if i + 1 == bins { hi } else { lo + (i + 1) as f64 * width },
            count: 0,
        })
        .collect();
    for &v in values {
        if !(lo..=hi).contains(&v) {
            continue;
        }
        let i = (((v - lo) / width) as usize).min(bins - 1);
        out[i].count += 1;
    }
    Ok(out)
}

pub fn histogram_csv(bins: &[HistogramBin]) -> String {
    let mut s = String::from("bin_low,bin_high,count\n");
    for b in bins {
        let _ = writeln!(s, "{},{},{}", b.bin_low, b.bin_high, b.count);
    }
    s
}

pub fn ranking_csv(entries: &[RankingEntry]) -> String {
    let mut s = String::from("rank,architecture,objective,store,active_cnots\n");
    for (i, e) in entries.iter().enumerate() {
        let _ = writeln!(s, "{},{},{},{},{}", i + 1, e.architecture, e.objective, e.store, e.active_cnots);
    }
    s
}
