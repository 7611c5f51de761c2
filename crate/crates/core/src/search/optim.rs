use std::fmt;
use std::str::FromStr;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{bail, QasError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum OptimizerKind {
    Gd,
    Adam,
    DiagNaturalGd,
}

impl OptimizerKind {
    pub fn as_str(self) -> &'static str {
        match self {
            OptimizerKind::Gd => "gd",
            OptimizerKind::Adam => "adam",
            OptimizerKind::DiagNaturalGd => "diag-natural-gd",
        }
    }

    pub fn needs_metric(self) -> bool {
        self == OptimizerKind::DiagNaturalGd
    }
}

impl fmt::Display for OptimizerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OptimizerKind {
    type Err = QasError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gd" => Ok(OptimizerKind::Gd),
            "adam" => Ok(OptimizerKind::Adam),
            "diag-natural-gd" => Ok(OptimizerKind::DiagNaturalGd),
            _ => Err(QasError::Argument(format!("unknown optimizer `{s}`"))),
        }
    }
}

pub const ADAM_BETA1: f64 = 0.9;
pub const ADAM_BETA2: f64 = 0.999;
pub const ADAM_EPSILON: f64 = 1e-8;

/// Optimizer kind plus its hyper-parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct Optimizer {
    pub kind: OptimizerKind,
    pub learning_rate: f64,
    /// Regularizer added to the diagonal metric.
    #[serde(default = "default_metric_epsilon")]
    pub metric_epsilon: f64,
}

fn default_metric_epsilon() -> f64 {
    1e-2
}

/// Per-parameter moments for Adam; unused by the other kinds.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct OptimizerState {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub t: u64,
}

impl OptimizerState {
    pub fn new(len: usize) -> Self {
        OptimizerState { m: vec![0.0; len], v: vec![0.0; len], t: 0 }
    }
}

impl Optimizer {
    pub fn new(kind: OptimizerKind, learning_rate: f64) -> Self {
        Optimizer { kind, learning_rate, metric_epsilon: default_metric_epsilon() }
    }

    pub fn gd(learning_rate: f64) -> Self {
        Optimizer::new(OptimizerKind::Gd, learning_rate)
    }

    pub fn adam(learning_rate: f64) -> Self {
        Optimizer::new(OptimizerKind::Adam, learning_rate)
    }

    pub fn diag_natural(learning_rate: f64) -> Self {
        Optimizer::new(OptimizerKind::DiagNaturalGd, learning_rate)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            bail!(Config, "learning rate must be positive, got {}", self.learning_rate);
        }
        if !(self.metric_epsilon >= 0.0 && self.metric_epsilon.is_finite()) {
            bail!(Config, "metric epsilon must be non-negative, got {}", self.metric_epsilon);
        }
        Ok(())
    }

    /// One update of `params` in place. `metric` is the diagonal metric and is
    /// required for the natural-gradient kind only.
    pub fn step(
        &self,
        params: &mut [f64],
        gradient: &[f64],
        metric: Option<&[f64]>,
        state: &mut OptimizerState,
    ) -> Result<()> {
        if gradient.len() != params.len() {
            bail!(Argument, "gradient has {} entries for {} parameters", gradient.len(), params.len());
        }
        if let Some(bad) = gradient.iter().position(|g| !g.is_finite()) {
            bail!(Numeric, "non-finite gradient entry {} at index {bad}", gradient[bad]);
        }
        let eta = self.learning_rate;
        match self.kind {
            OptimizerKind::Gd => {
                for (p, g) in params.iter_mut().zip(gradient) {
                    *p -= eta * g;
                }
            }
            OptimizerKind::Adam => {
                if state.m.len() != params.len() {
                    *state = OptimizerState::new(params.len());
                }
                state.t += 1;
                let t = state.t as i32;
                let c1 = 1.0 - ADAM_BETA1.powi(t);
                let c2 = 1.0 - ADAM_BETA2.powi(t);
                for (i, (p, &g)) in params.iter_mut().zip(gradient).enumerate() {
                    state.m[i] = ADAM_BETA1 * state.m[i] + (1.0 - ADAM_BETA1) * g;
                    state.v[i] = ADAM_BETA2 * state.v[i] + (1.0 - ADAM_BETA2) * g * g;
                    let m_hat = state.m[i] / c1;
                    let v_hat = state.v[i] / c2;
                    *p -= eta * m_hat / (v_hat.sqrt() + ADAM_EPSILON);
                }
            }
            OptimizerKind::DiagNaturalGd => {
                let Some(metric) = metric else {
                    bail!(Argument, "diag-natural-gd needs the metric diagonal");
                };
                if metric.len() != params.len() {
                    bail!(Argument, "metric has {} entries for {} parameters", metric.len(), params.len());
                }
                for ((p, g), f) in params.iter_mut().zip(gradient).zip(metric) {
                    *p -= eta * g / (f + self.metric_epsilon);
                }
            }
        }
        if let Some(bad) = params.iter().position(|p| !p.is_finite()) {
            bail!(Numeric, "update produced non-finite parameter {} at index {bad}", params[bad]);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_gradient_is_a_fixed_point() {
        for kind in [OptimizerKind::Gd, OptimizerKind::Adam, OptimizerKind::DiagNaturalGd] {
            let opt = Optimizer::new(kind, 0.3);
            let mut p = vec![0.4, -1.0];
            let mut st = OptimizerState::default();
            opt.step(&mut p, &[0.0, 0.0], Some(&[0.25, 0.25]), &mut st).unwrap();
            assert_eq!(p, vec![0.4, -1.0], "{kind}");
        }
    }

    #[test]
    fn gd_step() {
        let mut p = vec![0.0, 0.0];
        Optimizer::gd(0.1).step(&mut p, &[1.0, -2.0], None, &mut OptimizerState::default()).unwrap();
        assert_eq!(p, vec![-0.1, 0.2]);
    }

    #[test]
    fn first_adam_step_is_learning_rate() {
        // m̂ = g, v̂ = g² after bias correction, so Δ = −η·g/(|g| + ε)
        let eta = 0.05;
        let mut p = vec![1.0];
        let mut st = OptimizerState::default();
        Optimizer::adam(eta).step(&mut p, &[1.0], None, &mut st).unwrap();
        assert!((p[0] - (1.0 - eta)).abs() < 1e-6);
        assert_eq!(st.t, 1);
    }

    #[test]
    fn natural_step_rescales_by_metric() {
        let opt = Optimizer { kind: OptimizerKind::DiagNaturalGd, learning_rate: 0.2, metric_epsilon: 0.0 };
        let mut p = vec![0.0, 0.0];
        opt.step(&mut p, &[1.0, 1.0], Some(&[0.25, 0.5]), &mut OptimizerState::default()).unwrap();
        assert!((p[0] + 0.8).abs() < 1e-15);
        assert!((p[1] + 0.4).abs() < 1e-15);
        assert!(opt.step(&mut p, &[1.0, 1.0], None, &mut OptimizerState::default()).is_err());
    }

    #[test]
    fn nan_gradient_is_rejected() {
        let mut p = vec![0.0];
        let err = Optimizer::gd(0.1).step(&mut p, &[f64::NAN], None, &mut OptimizerState::default());
        assert!(matches!(err, Err(QasError::Numeric(_))));
        assert_eq!(p, vec![0.0]);
        let err = Optimizer::gd(1e308).step(&mut p, &[10.0], None, &mut OptimizerState::default());
        assert!(matches!(err, Err(QasError::Numeric(_))));
    }

    #[test]
    fn kind_names_round_trip() {
        for kind in [OptimizerKind::Gd, OptimizerKind::Adam, OptimizerKind::DiagNaturalGd] {
            assert_eq!(kind.as_str().parse::<OptimizerKind>().unwrap(), kind);
            assert_eq!(serde_json::to_string(&kind).unwrap(), format!("\"{kind}\""));
        }
    }
}
