//! Command-line front end: config loading, orchestration and run persistence.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid configuration or input,
//! 3 numeric failure (a partial record is still written).

mod config;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

pub use config::{
    BarrenMode, BarrenSpec, CorrelationSpec, DatasetSpec, Diagnostics, ExperimentConfig, SpacePreset,
    SpaceSpec, TaskKind,
};

use crate::circuit::{Architecture, SearchSpace};
use crate::diag::{barren_sweep, barren_sweep_heuristic, correlation_study, VarianceSweep};
use crate::error::{bail, QasError, Result};
use crate::search::{
    histogram, histogram_csv, rank_ensemble, ranking_csv, retrain, run_qas, RankingEntry, RetrainOutcome,
    RunRecord,
};
use crate::sim::{Hamiltonian, NoiseModel};
use crate::supernet::{SupernetEnsemble, SupernetStore};
use crate::tasks::{generate_dataset, h2_hamiltonian, DatasetOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "qas", version, about = "Quantum circuit architecture search")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Experiment config (JSON).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output path (a directory, or a file for gen-data).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker thread cap.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Force gate noise on (benchmark strengths unless the config sets them) or off.
    #[arg(long, global = true, value_enum)]
    pub noise: Option<Toggle>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Toggle {
    On,
    Off,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a labelled classification dataset as CSV.
    GenData {
        #[arg(long, default_value_t = 300)]
        n: usize,
    },
    /// Train, rank and retrain.
    Search,
    /// Re-rank a trained run.
    Rank {
        /// Directory written by `search`.
        #[arg(long)]
        run: PathBuf,
    },
    /// Retrain one subnet from a trained run's weights.
    Retrain {
        #[arg(long)]
        run: PathBuf,
        /// Architecture text; defaults to the run's best-ranked subnet.
        #[arg(long)]
        arch: Option<String>,
        /// Defaults to the config's retraining budget.
        #[arg(long)]
        epochs: Option<usize>,
    },
    /// Exact ground energy of the H2 Hamiltonian.
    VqeExact,
    /// Gradient-variance sweep over circuit depth.
    Barren {
        /// Needed for the `qas` mode.
        #[arg(long)]
        run: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        depths: Option<Vec<usize>>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// Correlation between supernet scores and independent training.
    Correlate {
        #[arg(long)]
        run: Option<PathBuf>,
        #[arg(long)]
        subnets: Option<usize>,
        #[arg(long)]
        epochs: Option<usize>,
    },
    /// Every diagnostic enabled in the config.
    Diag {
        #[arg(long)]
        run: Option<PathBuf>,
    },
    /// Write the JSON schemas of config, manifest and run record.
    Schema,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Heuristic,
    Qas,
}

/// Written next to every set of artifacts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: u64,
    /// SHA-256 of the effective config; absent for commands without one.
    pub config_sha256: Option<String>,
    /// Paths relative to the manifest.
    pub artifacts: Vec<String>,
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &QasError) -> i32 {
    match e {
        QasError::Numeric(_) => EXIT_NUMERIC,
        QasError::Io(_) => EXIT_IO,
        _ => EXIT_CONFIG,
    }
}

fn execute(cli: &Cli) -> Result<i32> {
    if let Some(n) = cli.threads {
        if n == 0 {
            bail!(Config, "--threads must be at least 1");
        }
        // fails only when a pool already exists, e.g. on a second call in-process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match &cli.command {
        Command::GenData { n } => gen_data(cli, *n),
        Command::Search => search(cli),
        Command::Rank { run } => rank(cli, run),
        Command::Retrain { run, arch, epochs } => retrain_cmd(cli, run, arch.as_deref(), *epochs),
        Command::VqeExact => vqe_exact(cli),
        Command::Barren { run, depths, samples, mode } => {
            let cfg = load_config(cli, run.as_deref(), false)?;
            let mut spec = cfg.as_ref().and_then(|c| c.diagnostics.barren.clone()).unwrap_or_default();
            if let Some(d) = depths {
                spec.depths = d.clone();
            }
            if let Some(s) = samples {
                spec.samples = *s;
            }
            if let Some(m) = mode {
                spec.mode = match m {
                    ModeArg::Heuristic => BarrenMode::Heuristic,
                    ModeArg::Qas => BarrenMode::Qas,
                };
            }
            let out = out_dir(cli, cfg.as_ref(), "qas-barren")?;
            let mut w = Writer::new(&out, "barren")?;
            barren(cli, &spec, cfg.as_ref(), run.as_deref(), &mut w)?;
            w.finish(seed_of(cli, cfg.as_ref()), cfg.as_ref())?;
            Ok(EXIT_OK)
        }
        Command::Correlate { run, subnets, epochs } => {
            let cfg = load_config(cli, run.as_deref(), true)?;
            let mut cfg = cfg.expect("required");
            let mut spec = cfg.diagnostics.correlation.unwrap_or_default();
            if let Some(n) = subnets {
                spec.subnets = *n;
            }
            if let Some(e) = epochs {
                spec.epochs = *e;
            }
            cfg.diagnostics.correlation = Some(spec);
            cfg.validate()?;
            let out = out_dir(cli, Some(&cfg), "qas-correlate")?;
            let mut w = Writer::new(&out, "correlate")?;
            correlate(&cfg, run.as_deref(), &mut w)?;
            w.finish(cfg.qas.seed, Some(&cfg))?;
            Ok(EXIT_OK)
        }
        Command::Diag { run } => {
            let cfg = load_config(cli, run.as_deref(), true)?;
            let cfg = cfg.expect("required");
            let out = out_dir(cli, Some(&cfg), "qas-diag")?;
            let mut w = Writer::new(&out, "diag")?;
            if let Some(spec) = &cfg.diagnostics.barren {
                barren(cli, spec, Some(&cfg), run.as_deref(), &mut w)?;
            }
            if cfg.diagnostics.correlation.is_some() {
                correlate(&cfg, run.as_deref(), &mut w)?;
            }
            w.finish(cfg.qas.seed, Some(&cfg))?;
            Ok(EXIT_OK)
        }
        Command::Schema => {
            let out = cli.out.clone().unwrap_or_else(|| PathBuf::from("schemas"));
            for (name, text) in schemas()? {
                write_file(&out.join(name), &text)?;
            }
            Ok(EXIT_OK)
        }
    }
}

/// `(file name, pretty JSON)` for every shipped schema.
pub fn schemas() -> Result<Vec<(&'static str, String)>> {
    let mut out = Vec::new();
    for (name, schema) in [
        ("experiment-config.schema.json", schemars::schema_for!(ExperimentConfig)),
        ("run-manifest.schema.json", schemars::schema_for!(RunManifest)),
        ("run-record.schema.json", schemars::schema_for!(RunRecord)),
    ] {
        out.push((name, serde_json::to_string_pretty(&schema)? + "\n"));
    }
    Ok(out)
}

/// Loads `--config`, falling back to the run directory's saved config, and
/// applies `--seed` / `--noise`.
fn load_config(cli: &Cli, run: Option<&Path>, required: bool) -> Result<Option<ExperimentConfig>> {
    let path = match (&cli.config, run) {
        (Some(p), _) => Some(p.clone()),
        (None, Some(r)) => Some(r.join("config.json")),
        (None, None) => None,
    };
    let Some(path) = path else {
        if required {
            bail!(Config, "a config is required: pass --config or --run");
        }
        return Ok(None);
    };
    let text = fs::read_to_string(&path)
        .map_err(|e| QasError::Config(format!("cannot read config {}: {e}", path.display())))?;
    let mut cfg = ExperimentConfig::from_json(&text)?;
    if let Some(s) = cli.seed {
        cfg.qas.seed = s;
    }
    match cli.noise {
        Some(Toggle::Off) => cfg.qas.noise = NoiseModel::noiseless(),
        Some(Toggle::On) => {
            let n = cfg.qas.noise;
            cfg.qas.noise =
                if n.p1 == 0.0 && n.p2 == 0.0 { NoiseModel::benchmark() } else { NoiseModel { enabled: true, ..n } };
        }
        None => {}
    }
    cfg.validate()?;
    Ok(Some(cfg))
}

fn seed_of(cli: &Cli, cfg: Option<&ExperimentConfig>) -> u64 {
    cfg.map(|c| c.qas.seed).or(cli.seed).unwrap_or(0)
}

fn out_dir(cli: &Cli, cfg: Option<&ExperimentConfig>, fallback: &str) -> Result<PathBuf> {
    let dir = cli
        .out
        .clone()
        .or_else(|| cfg.and_then(|c| c.output.clone()))
        .unwrap_or_else(|| PathBuf::from(fallback));
    fs::create_dir_all(&dir)?;
    Ok(dir)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    fs::write(path, text)?;
    Ok(())
}

/// Collects artifacts written into one directory, then the manifest.
struct Writer {
    dir: PathBuf,
    command: String,
    artifacts: Vec<String>,
}

impl Writer {
    fn new(dir: &Path, command: &str) -> Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Writer { dir: dir.to_path_buf(), command: command.into(), artifacts: Vec::new() })
    }

    fn put(&mut self, name: &str, text: &str) -> Result<()> {
        write_file(&self.dir.join(name), text)?;
        self.artifacts.push(name.to_string());
        Ok(())
    }

    fn finish(mut self, seed: u64, cfg: Option<&ExperimentConfig>) -> Result<()> {
        let config_sha256 = match cfg {
            Some(c) => {
                self.put("config.json", &(c.to_json()? + "\n"))?;
                Some(c.sha256()?)
            }
            None => None,
        };
        let manifest = RunManifest {
            tool: "qas".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: self.command.clone(),
            seed,
            config_sha256,
            artifacts: self.artifacts.clone(),
        };
        write_file(&self.dir.join("manifest.json"), &(serde_json::to_string_pretty(&manifest)? + "\n"))
    }
}

fn gen_data(cli: &Cli, n: usize) -> Result<i32> {
    let seed = cli.seed.unwrap_or(0);
    let ds = generate_dataset(seed, &DatasetOptions::with_size(n))?;
    let path = cli.out.clone().unwrap_or_else(|| PathBuf::from("dataset.csv"));
    write_file(&path, &ds.to_csv())?;
    let name = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let manifest = RunManifest {
        tool: "qas".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: "gen-data".into(),
        seed,
        config_sha256: None,
        artifacts: vec![name.clone()],
    };
    let mpath = path.with_file_name(format!("{name}.manifest.json"));
    write_file(&mpath, &(serde_json::to_string_pretty(&manifest)? + "\n"))?;
    println!(
        "wrote {} rows to {}; rejection rate {:.4} ({} draws rejected, {} teacher resamples)",
        ds.len(),
        path.display(),
        ds.rejection_rate(),
        ds.rejected,
        ds.teacher_resamples
    );
    Ok(EXIT_OK)
}

fn training_csv(record: &RunRecord) -> String {
    let mut s = String::from("iteration,architecture,chosen,loss\n");
    for (r, l) in record.history.records.iter().zip(&record.history.losses) {
        let _ = writeln!(s, "{},{},{},{}", r.iteration, r.architecture, r.chosen, l);
    }
    s
}

fn retrain_csv(outcome: &RetrainOutcome) -> String {
    let mut s = String::from("epoch,loss,validation\n");
    for e in &outcome.trajectory {
        let v = e.validation.map(|v| v.to_string()).unwrap_or_default();
        let _ = writeln!(s, "{},{},{}", e.epoch, e.loss, v);
    }
    s
}

fn ranking_artifacts(w: &mut Writer, ranking: &[RankingEntry], bins: usize) -> Result<()> {
    w.put("ranking.csv", &ranking_csv(ranking))?;
    let values: Vec<f64> = ranking.iter().map(|e| e.objective).collect();
    w.put("histogram.csv", &histogram_csv(&histogram(&values, bins, None)?))
}

fn save_ensemble(w: &mut Writer, ens: &SupernetEnsemble) -> Result<()> {
    for (i, s) in ens.stores().iter().enumerate() {
        w.put(&format!("stores/store-{i}.json"), &s.to_json()?)?;
    }
    Ok(())
}

/// Loads every `stores/store-N.json` of a run directory. A missing store
/// directory is a configuration error.
fn load_ensemble(run: &Path, space: &SearchSpace) -> Result<SupernetEnsemble> {
    let dir = run.join("stores");
    let mut stores = Vec::new();
    loop {
        let path = dir.join(format!("store-{}.json", stores.len()));
        if !path.exists() {
            break;
        }
        stores.push(SupernetStore::from_json(space, &fs::read_to_string(&path)?)?);
    }
    if stores.is_empty() {
        bail!(Config, "no trained ensemble under {}", dir.display());
    }
    SupernetEnsemble::from_stores(stores)
}

fn load_record(run: &Path) -> Result<RunRecord> {
    let path = run.join("run.json");
    let text = fs::read_to_string(&path)
        .map_err(|e| QasError::Config(format!("cannot read {}: {e}", path.display())))?;
    RunRecord::from_json(&text)
}

fn search(cli: &Cli) -> Result<i32> {
    let cfg = load_config(cli, None, true)?;
    let cfg = cfg.expect("required");
    let space = cfg.space()?;
    let suite = cfg.suite()?;
    let out = out_dir(cli, Some(&cfg), "qas-run")?;
    let (record, ens) = run_qas(&cfg.qas, &space, &suite)?;
    let mut w = Writer::new(&out, "search")?;
    w.put("run.json", &record.to_json()?)?;
    w.put("training.csv", &training_csv(&record))?;
    save_ensemble(&mut w, &ens)?;
    if let Some(reason) = &record.history.abort {
        w.finish(cfg.qas.seed, Some(&cfg))?;
        eprintln!("error: training aborted: {reason}; partial record in {}", out.display());
        return Ok(EXIT_NUMERIC);
    }
    ranking_artifacts(&mut w, &record.ranking, cfg.histogram_bins)?;
    if let Some(r) = &record.retrain {
        w.put("retrain.csv", &retrain_csv(r))?;
    }
    if let Some(a) = &record.final_architecture {
        w.put("best_arch.txt", &format!("{a}\n"))?;
    }
    w.finish(cfg.qas.seed, Some(&cfg))?;
    let mut summary = format!("best {}", record.final_architecture.as_deref().unwrap_or("-"));
    for (k, v) in &record.metrics {
        let _ = write!(summary, "; {k} {v:.6}");
    }
    if let Some(r) = record.regret {
        let _ = write!(summary, "; regret {r:.6}");
    }
    println!("{summary}");
    Ok(EXIT_OK)
}

fn rank(cli: &Cli, run: &Path) -> Result<i32> {
    let cfg = load_config(cli, Some(run), true)?;
    let cfg = cfg.expect("required");
    let space = cfg.space()?;
    let ens = load_ensemble(run, &space)?;
    let record = load_record(run)?;
    let suite = cfg.suite()?;
    let ranking = rank_ensemble(&cfg.qas, &ens, &record.history, suite.rank.as_ref())?;
    let out = out_dir(cli, None, &run.join("rank").to_string_lossy())?;
    let mut w = Writer::new(&out, "rank")?;
    ranking_artifacts(&mut w, &ranking, cfg.histogram_bins)?;
    w.put("best_arch.txt", &format!("{}\n", ranking[0].architecture))?;
    w.finish(cfg.qas.seed, Some(&cfg))?;
    println!("best {} objective {:.6}", ranking[0].architecture, ranking[0].objective);
    Ok(EXIT_OK)
}

fn retrain_cmd(cli: &Cli, run: &Path, arch: Option<&str>, epochs: Option<usize>) -> Result<i32> {
    let cfg = load_config(cli, Some(run), true)?;
    let cfg = cfg.expect("required");
    let space = cfg.space()?;
    let ens = load_ensemble(run, &space)?;
    let text = match arch {
        Some(a) => a.to_string(),
        None => load_record(run)?
            .final_architecture
            .ok_or_else(|| QasError::Config("run has no best architecture; pass --arch".into()))?,
    };
    let arch = Architecture::parse(&space, &text).map_err(|e| QasError::Config(e.to_string()))?;
    let suite = cfg.suite()?;
    let noise = cfg.qas.noise;
    let (_, store) = ens.eval_min(&arch, suite.rank.as_ref(), &noise)?;
    let init = ens.store(store).get_params(&arch)?;
    let outcome = retrain(
        &space,
        &arch,
        &init,
        suite.train.as_ref(),
        epochs.unwrap_or(cfg.qas.retrain_epochs),
        &cfg.qas.retrain_optimizer(),
        &noise,
        suite.validation.as_deref(),
    )?;
    let mut metrics = std::collections::BTreeMap::new();
    for (name, task) in &suite.reports {
        metrics.insert(name.clone(), crate::circuit::evaluate(&space, &arch, &outcome.params, task.as_ref(), &noise)?);
    }
    let out = out_dir(cli, None, &run.join("retrain").to_string_lossy())?;
    let mut w = Writer::new(&out, "retrain")?;
    w.put("retrain.csv", &retrain_csv(&outcome))?;
    let doc = serde_json::json!({
        "architecture": text,
        "store": store,
        "selected_epoch": outcome.selected_epoch,
        "params": outcome.params.flat(),
        "metrics": metrics,
    });
    w.put("retrain.json", &serde_json::to_string_pretty(&doc)?)?;
    w.finish(cfg.qas.seed, Some(&cfg))?;
    let mut summary = format!("{text}: selected epoch {}", outcome.selected_epoch);
    for (k, v) in &metrics {
        let _ = write!(summary, "; {k} {v:.6}");
    }
    println!("{summary}");
    Ok(EXIT_OK)
}

fn vqe_exact(cli: &Cli) -> Result<i32> {
    let h = h2_hamiltonian();
    let e = h.exact_ground_energy()?;
    println!("{e:.10}");
    if let Some(dir) = &cli.out {
        let mut w = Writer::new(dir, "vqe-exact")?;
        w.put("hamiltonian.txt", &h.to_term_list())?;
        w.put("energy.json", &(serde_json::to_string_pretty(&serde_json::json!({ "exact_energy": e }))? + "\n"))?;
        w.finish(cli.seed.unwrap_or(0), None)?;
    }
    Ok(EXIT_OK)
}

fn barren(
    cli: &Cli,
    spec: &BarrenSpec,
    cfg: Option<&ExperimentConfig>,
    run: Option<&Path>,
    w: &mut Writer,
) -> Result<()> {
    if spec.samples < 2 || spec.depths.is_empty() || spec.depths.contains(&0) {
        bail!(Config, "barren sweep needs samples >= 2 and positive depths");
    }
    let seed = seed_of(cli, cfg);
    let sweep: VarianceSweep = match spec.mode {
        BarrenMode::Heuristic => barren_sweep_heuristic(&spec.depths, spec.samples, seed)?,
        BarrenMode::Qas => {
            let Some(run) = run else {
                bail!(Config, "qas-mode sweep needs --run");
            };
            let record = load_record(run)?;
            let space = record.space.clone();
            let text = record
                .final_architecture
                .ok_or_else(|| QasError::Config("run has no searched subnet".into()))?;
            let base = Architecture::parse(&space, &text)?;
            let family = |l: usize| {
                let s = SearchSpace { n_layers: l, ..space.clone() };
                let layers = (0..l).map(|i| base.layers[i % base.layers.len()].clone()).collect();
                Ok((s, Architecture { layers }))
            };
            barren_sweep(family, &spec.depths, spec.samples, &Hamiltonian::z(space.n_qubits, 0)?, seed)?
        }
    };
    w.put("barren.csv", &sweep.to_csv())?;
    w.put("barren.json", &serde_json::to_string_pretty(&sweep)?)
}

fn correlate(cfg: &ExperimentConfig, run: Option<&Path>, w: &mut Writer) -> Result<()> {
    let Some(run) = run else {
        bail!(Config, "correlation needs a trained ensemble: pass --run");
    };
    let space = cfg.space()?;
    let ens = load_ensemble(run, &space)?;
    let suite = cfg.suite()?;
    let report = correlation_study(&ens, suite.train.as_ref(), suite.rank.as_ref(), &cfg.correlation_options())?;
    w.put("correlation.csv", &report.to_csv())?;
    w.put("correlation.json", &serde_json::to_string_pretty(&report)?)?;
    println!("n {}; spearman {:.6}; kendall {:.6}", report.n(), report.spearman, report.kendall);
    Ok(())
}
