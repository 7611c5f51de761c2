use std::path::PathBuf;
use std::sync::Arc;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::circuit::SearchSpace;
use crate::diag::CorrelationOptions;
use crate::error::{bail, QasError, Result};
use crate::search::{Optimizer, QasConfig, TaskSuite};
use crate::tasks::{
    classification_space, generate_dataset, vqe_rc_space, vqe_space, Dataset, DatasetOptions, VqeTask,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum TaskKind {
    Classify,
    Vqe,
}

impl TaskKind {
    fn n_qubits(self) -> usize {
        match self {
            TaskKind::Classify => 3,
            TaskKind::Vqe => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum SpacePreset {
    /// 3 qubits, `RY`, pairs (0,1) (0,2) (1,2).
    Classification,
    /// 4 qubits, `RY`/`RZ`, CNOT chain.
    Vqe,
    /// 4 qubits, `RY`/`RZ`, directed pairs of a T-shaped device.
    VqeRc,
}

/// Either a named preset or a full space description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum SpaceSpec {
    Preset(SpacePreset),
    Custom(SearchSpace),
}

impl SpaceSpec {
    pub fn build(&self) -> Result<SearchSpace> {
        Ok(match self {
            SpaceSpec::Preset(SpacePreset::Classification) => classification_space(),
            SpaceSpec::Preset(SpacePreset::Vqe) => vqe_space(),
            SpaceSpec::Preset(SpacePreset::VqeRc) => vqe_rc_space(),
            SpaceSpec::Custom(s) => {
                s.validate()?;
                s.clone()
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct DatasetSpec {
    /// Read this CSV instead of generating.
    #[serde(default)]
    pub path: Option<PathBuf>,
    /// Defaults to the run seed.
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default = "default_n")]
    pub n: usize,
}

fn default_n() -> usize {
    300
}

impl Default for DatasetSpec {
    fn default() -> Self {
        DatasetSpec { path: None, seed: None, n: default_n() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum BarrenMode {
    /// Dense VQE baseline at each depth.
    #[default]
    Heuristic,
    /// The searched subnet's layers, repeated cyclically to each depth.
    Qas,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct BarrenSpec {
    #[serde(default = "default_depths")]
    pub depths: Vec<usize>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub mode: BarrenMode,
}

fn default_depths() -> Vec<usize> {
    (2..=7).collect()
}

fn default_samples() -> usize {
    2000
}

impl Default for BarrenSpec {
    fn default() -> Self {
        BarrenSpec { depths: default_depths(), samples: default_samples(), mode: BarrenMode::Heuristic }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct CorrelationSpec {
    #[serde(default = "default_subnets")]
    pub subnets: usize,
    #[serde(default = "default_epochs")]
    pub epochs: usize,
    #[serde(default = "default_corr_optimizer")]
    pub optimizer: Optimizer,
}

fn default_subnets() -> usize {
    500
}

fn default_epochs() -> usize {
    100
}

fn default_corr_optimizer() -> Optimizer {
    Optimizer::adam(0.05)
}

impl Default for CorrelationSpec {
    fn default() -> Self {
        CorrelationSpec { subnets: default_subnets(), epochs: default_epochs(), optimizer: default_corr_optimizer() }
    }
}

/// Which diagnostics `diag` runs. Absent sections are skipped.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct Diagnostics {
    #[serde(default)]
    pub barren: Option<BarrenSpec>,
    #[serde(default)]
    pub correlation: Option<CorrelationSpec>,
}

/// One experiment: task, search space, search hyper-parameters, diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub task: TaskKind,
    /// Defaults to the task's standard space.
    #[serde(default)]
    pub space: Option<SpaceSpec>,
    pub qas: QasConfig,
    /// Classification only.
    #[serde(default)]
    pub dataset: DatasetSpec,
    /// Apply gate noise to the data-encoding rotations too.
    #[serde(default = "default_true")]
    pub encoding_noise: bool,
    #[serde(default)]
    pub diagnostics: Diagnostics,
    #[serde(default = "default_bins")]
    pub histogram_bins: usize,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

fn default_true() -> bool {
    true
}

fn default_bins() -> usize {
    20
}

impl ExperimentConfig {
    pub fn new(task: TaskKind, qas: QasConfig) -> Self {
        ExperimentConfig {
            task,
            space: None,
            qas,
            dataset: DatasetSpec::default(),
            encoding_noise: true,
            diagnostics: Diagnostics::default(),
            histogram_bins: default_bins(),
            output: None,
        }
    }

    /// Parses and validates; unknown keys are rejected.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| QasError::Config(format!("invalid config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Hex SHA-256 of the canonical JSON form.
    pub fn sha256(&self) -> Result<String> {
        let canonical = serde_json::to_vec(self)?;
        Ok(format!("{:x}", Sha256::digest(&canonical)))
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |e: QasError| QasError::Config(e.to_string());
        self.qas.validate().map_err(fail)?;
        let space = self.space().map_err(fail)?;
        if space.n_qubits != self.task.n_qubits() {
            bail!(Config, "task {:?} needs {} qubits, space has {}", self.task, self.task.n_qubits(), space.n_qubits);
        }
        if self.histogram_bins == 0 {
            bail!(Config, "histogram_bins must be at least 1");
        }
        if self.task == TaskKind::Classify && self.dataset.path.is_none() && self.dataset.n < 3 {
            bail!(Config, "dataset needs at least 3 samples to fill three splits");
        }
        if let Some(b) = &self.diagnostics.barren {
            if b.samples < 2 || b.depths.is_empty() || b.depths.contains(&0) {
                bail!(Config, "barren sweep needs samples >= 2 and positive depths");
            }
        }
        if let Some(c) = &self.diagnostics.correlation {
            if c.subnets < 2 {
                bail!(Config, "correlation study needs at least 2 subnets");
            }
            c.optimizer.validate().map_err(fail)?;
        }
        Ok(())
    }

    pub fn space(&self) -> Result<SearchSpace> {
        match &self.space {
            Some(s) => s.build(),
            None => Ok(match self.task {
                TaskKind::Classify => classification_space(),
                TaskKind::Vqe => vqe_space(),
            }),
        }
    }

    pub fn dataset(&self) -> Result<Dataset> {
        match &self.dataset.path {
            Some(p) => Dataset::from_csv(&std::fs::read_to_string(p)?),
            None => generate_dataset(
                self.dataset.seed.unwrap_or(self.qas.seed),
                &DatasetOptions::with_size(self.dataset.n),
            ),
        }
    }

    pub fn suite(&self) -> Result<TaskSuite> {
        match self.task {
            TaskKind::Classify => TaskSuite::classification(Arc::new(self.dataset()?), self.encoding_noise),
            TaskKind::Vqe => Ok(TaskSuite::vqe(VqeTask::h2())),
        }
    }

    pub fn correlation_options(&self) -> CorrelationOptions {
        let spec = self.diagnostics.correlation.unwrap_or_default();
        CorrelationOptions {
            subnets: spec.subnets,
            epochs: spec.epochs,
            optimizer: spec.optimizer,
            noise: self.qas.noise,
            seed: self.qas.seed,
        }
    }
}
