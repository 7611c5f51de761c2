use std::f64::consts::TAU;
use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::circuit::{self, Architecture, ParamAssignment, SearchSpace};
use crate::error::{bail, Result};
use crate::sim::{Hamiltonian, NoiseModel};
use crate::tasks::{baseline_vqe_space_with_depth, VqeTask};

/// Variance of `‖∇⟨O⟩‖₂ / d` at one depth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct VariancePoint {
    pub layers: usize,
    pub parameters: usize,
    pub mean: f64,
    pub variance: f64,
    /// Monte-Carlo standard error of `variance`.
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct VarianceSweep {
    pub samples: usize,
    pub observable: String,
    pub points: Vec<VariancePoint>,
}

impl VarianceSweep {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("L,variance,stderr\n");
        for p in &self.points {
            let _ = writeln!(s, "{},{},{}", p.layers, p.variance, p.stderr);
        }
        s
    }
}

/// Unbiased variance and its standard error from the fourth central moment.
pub fn variance_with_stderr(x: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let m2 = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let m4 = x.iter().map(|v| (v - mean).powi(4)).sum::<f64>() / n;
    let var = m2 * n / (n - 1.0);
    let se2 = (m4 - var * var * (n - 3.0) / (n - 1.0)) / n;
    (mean, var, se2.max(0.0).sqrt())
}

/// Samples `samples` uniform parameter vectors per depth on `family(L)` and
/// reports the spread of the normalized gradient norm of `observable`.
/// Noiseless. Depth `L` uses RNG stream `L`, so depths are independent.
pub fn barren_sweep<F>(
    family: F,
    depths: &[usize],
    samples: usize,
    observable: &Hamiltonian,
    seed: u64,
) -> Result<VarianceSweep>
where
    F: Fn(usize) -> Result<(SearchSpace, Architecture)>,
{
    if samples < 2 {
        bail!(Argument, "need at least two samples per depth, got {samples}");
    }
    let task = VqeTask::named("gradient-probe", observable.clone());
    let quiet = NoiseModel::noiseless();
    let mut points = Vec::with_capacity(depths.len());
    for &l in depths {
        let (space, arch) = family(l)?;
        let d = space.n_params();
        if d == 0 {
            bail!(Argument, "depth {l} has no trainable parameters");
        }
        let mut rng = crate::seeded_rng(seed, l as u64);
        let draws: Vec<Vec<f64>> =
            (0..samples).map(|_| (0..d).map(|_| rng.gen_range(0.0..TAU)).collect()).collect();
        let norms = draws
            .par_iter()
            .map(|flat| {
                let p = ParamAssignment::from_flat(&space, flat)?;
                let g = circuit::gradient_param_shift(&space, &arch, &p, &task, &quiet)?;
                Ok(g.gradient.iter().map(|x| x * x).sum::<f64>().sqrt() / d as f64)
            })
            .collect::<Result<Vec<f64>>>()?;
        let (mean, variance, stderr) = variance_with_stderr(&norms);
        points.push(VariancePoint { layers: l, parameters: d, mean, variance, stderr });
    }
    Ok(VarianceSweep { samples, observable: observable.to_term_list(), points })
}

/// Sweep over the dense VQE baseline family with observable `Z₀`.
pub fn barren_sweep_heuristic(depths: &[usize], samples: usize, seed: u64) -> Result<VarianceSweep> {
    barren_sweep(|l| Ok(baseline_vqe_space_with_depth(l)), depths, samples, &Hamiltonian::z(4, 0)?, seed)
}
