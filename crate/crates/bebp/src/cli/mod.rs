//! Config-file driven command-line front end.

mod dispatch;

pub use dispatch::{dispatch, Command, Overrides, PreparedSource};


use crate::attack::AttackConfig;
use crate::data::FeatureSchema;
use crate::error::{Error, Result};
use crate::victims::VictimSpec;
use serde::Deserialize;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

/// Environment variable naming the root under which relative output
/// directories are created.
pub const OUT_ROOT_ENV: &str = "BEBP_OUT_ROOT";

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    dataset: DatasetSection,
    #[serde(default)]
    victims: VictimsSection,
    #[serde(default)]
    attack: AttackSection,
    #[serde(default)]
    experiment: ExperimentSection,
    #[serde(default)]
    output: OutputSection,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DatasetSection {
    source: String,
    n: Option<usize>,
    noise: Option<f64>,
    eval_n: Option<usize>,
    train_path: Option<String>,
    test_path: Option<String>,
    schema: Option<String>,
    normal_tags: Option<Vec<String>>,
    synth_seed: Option<u64>,
    synth_scale: Option<f64>,
    train_counts: Option<BTreeMap<String, usize>>,
    eval_counts: Option<BTreeMap<String, usize>>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct VictimsSection {
    models: Option<Vec<String>>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct AttackSection {
    eta: Option<f64>,
    rounds: Option<usize>,
    step: Option<f64>,
    epsilon: Option<f64>,
    max_iters: Option<usize>,
    batch_size: Option<usize>,
    epd_k: Option<usize>,
    epd_tau: Option<f64>,
    max_edge_points: Option<usize>,
    cumulative_budget: Option<bool>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ExperimentSection {
    repetitions: Option<usize>,
    seed: Option<u64>,
    eta_list: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct OutputSection {
    dir: Option<String>,
}

/// Where the experiment data comes from.
#[derive(Debug, Clone)]
pub enum DataSourceConfig {
    Moons {
        n: usize,
        noise: f64,
        eval_n: usize,
    },
    KddCsv {
        train_path: PathBuf,
        test_path: Option<PathBuf>,
        schema: FeatureSchema,
        normal_tags: Option<Vec<String>>,
        train_counts: BTreeMap<String, usize>,
        eval_counts: BTreeMap<String, usize>,
    },
    SynthKdd {
        seed: u64,
        scale: f64,
        train_counts: BTreeMap<String, usize>,
        eval_counts: BTreeMap<String, usize>,
    },
}

impl DataSourceConfig {
    pub fn describe(&self) -> String {
        match self {
            DataSourceConfig::Moons { n, noise, eval_n } => {
                format!("moons(n={n},noise={noise},eval_n={eval_n})")
            }
            DataSourceConfig::KddCsv { train_path, .. } => {
                format!("kdd-csv({})", train_path.display())
            }
            DataSourceConfig::SynthKdd { seed, scale, .. } => {
                format!("synth-kdd(seed={seed},scale={scale})")
            }
        }
    }
}

/// A fully validated run configuration with all defaults applied.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub source: DataSourceConfig,
    pub victims: Vec<VictimSpec>,
    pub attack: AttackConfig,
    pub repetitions: usize,
    pub eta_list: Vec<f64>,
    pub out_dir: PathBuf,
}

fn table1_train_counts() -> BTreeMap<String, usize> {
    crate::data::counts_from_pairs(&[
        ("NORMAL", 2000),
        ("PROB", 300),
        ("DOS", 3790),
        ("U2R", 32),
        ("R2L", 350),
    ])
}

fn table1_eval_counts() -> BTreeMap<String, usize> {
    crate::data::counts_from_pairs(&[
        ("NORMAL", 2000),
        ("PROB", 500),
        ("DOS", 3900),
        ("U2R", 20),
        ("R2L", 400),
    ])
}

fn resolve_schema(spec: Option<&str>) -> Result<FeatureSchema> {
    match spec.unwrap_or("kdd41") {
        "kdd41" => Ok(FeatureSchema::kdd41()),
        "kyoto24" => Ok(FeatureSchema::kyoto24()),
        path => FeatureSchema::from_file(Path::new(path)),
    }
}

/// Parses and validates a TOML run configuration. Unknown keys are rejected
/// by name; out-of-range values are rejected with the offending value.
pub fn parse_config(path: &Path) -> Result<RunConfig> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let file: FileConfig = toml::from_str(&text)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;

    let source = match file.dataset.source.as_str() {
        "moons" => {
            let n = file.dataset.n.unwrap_or(100);
            if n < 2 {
                return Err(Error::Config(format!("dataset.n = {n} is below 2")));
            }
            let noise = file.dataset.noise.unwrap_or(0.2);
            if noise < 0.0 {
                return Err(Error::Config(format!("dataset.noise = {noise} is negative")));
            }
            DataSourceConfig::Moons {
                n,
                noise,
                eval_n: file.dataset.eval_n.unwrap_or(n),
            }
        }
        "kdd-csv" => {
            let train_path = PathBuf::from(file.dataset.train_path.ok_or_else(|| {
                Error::Config("dataset.train_path is required for kdd-csv".into())
            })?);
            if !train_path.exists() {
                return Err(Error::Config(format!(
                    "dataset.train_path {} does not exist",
                    train_path.display()
                )));
            }
            let test_path = file.dataset.test_path.map(PathBuf::from);
            if let Some(p) = &test_path {
                if !p.exists() {
                    return Err(Error::Config(format!(
                        "dataset.test_path {} does not exist",
                        p.display()
                    )));
                }
            }
            DataSourceConfig::KddCsv {
                train_path,
                test_path,
                schema: resolve_schema(file.dataset.schema.as_deref())?,
                normal_tags: file.dataset.normal_tags,
                train_counts: file.dataset.train_counts.unwrap_or_else(table1_train_counts),
                eval_counts: file.dataset.eval_counts.unwrap_or_else(table1_eval_counts),
            }
        }
        "synth-kdd" => DataSourceConfig::SynthKdd {
            seed: file.dataset.synth_seed.unwrap_or(20090827),
            scale: file.dataset.synth_scale.unwrap_or(1.0),
            train_counts: file.dataset.train_counts.unwrap_or_else(table1_train_counts),
            eval_counts: file.dataset.eval_counts.unwrap_or_else(table1_eval_counts),
        },
        other => {
            return Err(Error::Config(format!(
                "dataset.source {other:?} is not one of moons, kdd-csv, synth-kdd"
            )))
        }
    };

    let model_names = file.victims.models.unwrap_or_else(|| {
        vec![
            "nb".into(),
            "lr".into(),
            "svm-sigmoid".into(),
            "svm-poly".into(),
            "svm-rbf".into(),
            "svm-linear".into(),
        ]
    });
    let victims = model_names
        .iter()
        .map(|n| VictimSpec::from_name(n))
        .collect::<Result<Vec<_>>>()?;

    let seed = file.experiment.seed.unwrap_or(1);
    let mut attack = AttackConfig::new(seed);
    let a = &file.attack;
    if let Some(v) = a.eta {
        attack.eta = v;
    }
    if let Some(v) = a.rounds {
        attack.rounds = v;
    }
    if let Some(v) = a.step {
        attack.step = v;
        attack.epsilon = v; // epsilon defaults to the step
    }
    if let Some(v) = a.epsilon {
        attack.epsilon = v;
    }
    if let Some(v) = a.max_iters {
        attack.max_iters = v;
    }
    if let Some(v) = a.batch_size {
        attack.batch_size = Some(v);
    }
    if let Some(v) = a.epd_k {
        attack.epd_k = v;
    }
    if let Some(v) = a.epd_tau {
        attack.epd_tau = v;
    }
    if let Some(v) = a.max_edge_points {
        attack.max_edge_points = if v == 0 { None } else { Some(v) };
    }
    if let Some(v) = a.cumulative_budget {
        attack.cumulative_budget = v;
    }
    let attack = attack.validated()?;

    let repetitions = file.experiment.repetitions.unwrap_or(10);
    if repetitions == 0 {
        return Err(Error::Config("experiment.repetitions must be >= 1".into()));
    }
    let eta_list = file
        .experiment
        .eta_list
        .unwrap_or_else(|| vec![attack.eta]);
    for &e in &eta_list {
        if !(e > 0.0 && e < 1.0) {
            return Err(Error::Config(format!(
                "experiment.eta_list entry {e} outside (0,1)"
            )));
        }
    }

    let dir = file.output.dir.unwrap_or_else(|| "bebp-out".into());
    let dir = PathBuf::from(dir);
    let out_dir = if dir.is_relative() {
        match std::env::var_os(OUT_ROOT_ENV) {
            Some(root) => PathBuf::from(root).join(dir),
            None => dir,
        }
    } else {
        dir
    };

    Ok(RunConfig {
        source,
        victims,
        attack,
        repetitions,
        eta_list,
        out_dir,
    })
}
