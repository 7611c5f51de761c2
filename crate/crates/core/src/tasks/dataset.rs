use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::classify::{classifier_output, encoding_gates};
use crate::error::{bail, QasError, Result};
use crate::sim::{Gate, NoiseModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Val,
    Test,
}

impl Split {
    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Val => "val",
            Split::Test => "test",
        }
    }
}

impl FromStr for Split {
    type Err = QasError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "train" => Ok(Split::Train),
            "val" => Ok(Split::Val),
            "test" => Ok(Split::Test),
            other => bail!(Argument, "unknown split `{other}`"),
        }
    }
}

/// Hidden labelling circuit: three layers of `RY⊗3` then `CNOT(0,1)`, `CNOT(1,2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct Teacher {
    pub angles: Vec<[f64; 3]>,
}

impl Teacher {
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Teacher { angles: (0..3).map(|_| [0, 1, 2].map(|_| rng.gen_range(0.0..TAU))).collect() }
    }

    pub fn gates(&self) -> Vec<Gate> {
        let mut gates = Vec::new();
        for layer in &self.angles {
            for (q, &a) in layer.iter().enumerate() {
                gates.push(Gate::rotation(crate::sim::GateKind::RY, q, a));
            }
            gates.push(Gate::cnot(0, 1));
            gates.push(Gate::cnot(1, 2));
        }
        gates
    }

    /// Noiseless `⟨Π⟩` of the teacher on the encoded input.
    pub fn measure(&self, x: &[f64; 3]) -> Result<f64> {
        classifier_output(&self.gates(), x, &NoiseModel::noiseless(), false)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct DatasetOptions {
    pub n: usize,
    /// Label 0 when the teacher output is at most this value.
    pub low: f64,
    /// Label 1 when the teacher output is at least this value.
    pub high: f64,
    pub n_train: usize,
    pub n_val: usize,
}

impl DatasetOptions {
    /// Splits `n` into thirds; the test split takes any remainder.
    pub fn with_size(n: usize) -> Self {
        DatasetOptions { n, low: 0.25, high: 0.75, n_train: n / 3, n_val: n / 3 }
    }
}

impl Default for DatasetOptions {
    fn default() -> Self {
        DatasetOptions::with_size(300)
    }
}

/// Labelled 3-feature dataset with its split assignment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct Dataset {
    pub features: Vec<[f64; 3]>,
    pub labels: Vec<u8>,
    pub splits: Vec<Split>,
    #[serde(default)]
    pub teacher: Option<Teacher>,
    /// Draws rejected for falling inside the margin.
    #[serde(default)]
    pub rejected: usize,
    #[serde(default)]
    pub teacher_resamples: usize,
}

/// Consecutive draws inspected before declaring a teacher degenerate.
const REJECTION_WINDOW: usize = 10_000;
const MAX_TEACHER_RESAMPLES: usize = 100;

/// Samples a teacher and `n` labelled points with margin rejection.
pub fn generate_dataset(seed: u64, options: &DatasetOptions) -> Result<Dataset> {
    if options.n == 0 {
        bail!(Argument, "dataset size must be at least 1");
    }
    if options.n_train + options.n_val > options.n {
        bail!(Argument, "train + val sizes exceed n = {}", options.n);
    }
    if !(options.low <= options.high) {
        bail!(Argument, "margin low {} exceeds high {}", options.low, options.high);
    }
    let mut rng = crate::seeded_rng(seed, 0xda7a);
    let mut resamples = 0;
    'teacher: loop {
        let teacher = Teacher::random(&mut rng);
        let mut features = Vec::with_capacity(options.n);
        let mut labels = Vec::with_capacity(options.n);
        let mut rejected = 0;
        let mut window_rejects = 0;
        let mut window_draws = 0;
        while features.len() < options.n {
            let x = [0, 1, 2].map(|_| rng.gen_range(0.0..TAU));
            let value = teacher.measure(&x)?;
            window_draws += 1;
            let label = if value >= options.high {
                Some(1)
            } else if value <= options.low {
                Some(0)
            } else {
                None
            };
            match label {
                Some(y) => {
                    features.push(x);
                    labels.push(y);
                }
                None => {
                    rejected += 1;
                    window_rejects += 1;
                }
            }
            if window_draws == REJECTION_WINDOW {
                if window_rejects * 1000 > REJECTION_WINDOW * 999 {
                    resamples += 1;
                    if resamples > MAX_TEACHER_RESAMPLES {
                        bail!(Numeric, "no usable teacher after {MAX_TEACHER_RESAMPLES} resamples");
                    }
                    continue 'teacher;
                }
                window_draws = 0;
                window_rejects = 0;
            }
        }
        let mut order: Vec<usize> = (0..options.n).collect();
        order.shuffle(&mut rng);
        let features = order.iter().map(|&i| features[i]).collect();
        let labels = order.iter().map(|&i| labels[i]).collect();
        let splits = (0..options.n)
            .map(|i| {
                if i < options.n_train {
                    Split::Train
                } else if i < options.n_train + options.n_val {
                    Split::Val
                } else {
                    Split::Test
                }
            })
            .collect();
        return Ok(Dataset {
            features,
            labels,
            splits,
            teacher: Some(teacher),
            rejected,
            teacher_resamples: resamples,
        });
    }
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn split_indices(&self, split: Split) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.splits[i] == split).collect()
    }

    pub fn rejection_rate(&self) -> f64 {
        let total = self.rejected + self.len();
        if total == 0 {
            0.0
        } else {
            self.rejected as f64 / total as f64
        }
    }

    /// Encoding gates for sample `i`.
    pub fn encoding(&self, i: usize) -> Vec<Gate> {
        encoding_gates(&self.features[i])
    }

    /// CSV with header `x1,x2,x3,label,split`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x1,x2,x3,label,split\n");
        for i in 0..self.len() {
            let [a, b, c] = self.features[i];
            let _ = writeln!(out, "{a},{b},{c},{},{}", self.labels[i], self.splits[i].as_str());
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        match lines.next() {
            Some(h) if h.trim() == "x1,x2,x3,label,split" => {}
            _ => bail!(Argument, "dataset CSV must start with header `x1,x2,x3,label,split`"),
        }
        let mut ds = Dataset {
            features: Vec::new(),
            labels: Vec::new(),
            splits: Vec::new(),
            teacher: None,
            rejected: 0,
            teacher_resamples: 0,
        };
        for (lineno, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let err = || QasError::Argument(format!("dataset CSV row {}: malformed", lineno + 2));
            let cols: Vec<&str> = line.trim().split(',').collect();
            if cols.len() != 5 {
                return Err(err());
            }
            let mut x = [0.0; 3];
            for (k, v) in x.iter_mut().enumerate() {
                *v = cols[k].parse().map_err(|_| err())?;
            }
            let label: u8 = cols[3].parse().map_err(|_| err())?;
            if label > 1 {
                return Err(err());
            }
            ds.features.push(x);
            ds.labels.push(label);
            ds.splits.push(cols[4].parse()?);
        }
        Ok(ds)
    }
}
