use crate::error::{bail, Result};
use crate::supernet::AssignmentRecord;

/// `Σ_t L(t, chosen_t) − min_w Σ_t L(t, w)` for a full loss table.
///
/// Row `t` holds the loss of every store at iteration `t`. Sums run in
/// iteration order, so a greedy (row-argmin) choice yields a value ≤ 0 exactly
/// in floating point.
pub fn regret_from_table(losses: &[Vec<f64>], chosen: &[usize]) -> Result<f64> {
    if losses.len() != chosen.len() {
        bail!(Argument, "{} loss rows for {} choices", losses.len(), chosen.len());
    }
    let Some(w) = losses.first().map(Vec::len) else {
        return Ok(0.0);
    };
    if w == 0 || losses.iter().any(|r| r.len() != w) {
        bail!(Argument, "loss rows must share a non-zero width");
    }
    let mut picked = 0.0;
    let mut totals = vec![0.0; w];
    for (row, &c) in losses.iter().zip(chosen) {
        if c >= w {
            bail!(Index, "choice {c} out of range for {w} stores");
        }
        picked += row[c];
        for (t, l) in totals.iter_mut().zip(row) {
            *t += l;
        }
    }
    let best = totals.into_iter().fold(f64::INFINITY, f64::min);
    Ok(picked - best)
}

/// Regret of a recorded training run. Needs every store's loss at every
/// iteration, which bandit-mode records do not carry.
pub fn regret(records: &[AssignmentRecord]) -> Result<f64> {
    let mut table = Vec::with_capacity(records.len());
    for r in records {
        let row: Option<Vec<f64>> = r.losses.iter().copied().collect();
        let Some(row) = row else {
            bail!(Capability, "iteration {} lacks a full loss vector (bandit mode)", r.iteration);
        };
        table.push(row);
    }
    let chosen: Vec<usize> = records.iter().map(|r| r.chosen).collect();
    regret_from_table(&table, &chosen)
}
