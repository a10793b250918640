//! Command execution: wires data sources to the experiment harness and
//! writes the CSV/manifest artifacts.

use super::{DataSourceConfig, RunConfig};
use crate::attack::chronic_attack;
use crate::data::{
    binarize_labels, load_kdd_style, make_moons, map_kdd_groups, stratified_sample_raw,
    synth_kdd_pool, write_kdd_csv, LabelRule, Preprocessor, RawDataset, SynthKddConfig,
};
use crate::data::{apply_normalize, fit_normalize, save_normalized};
use crate::error::{Error, Result};
use crate::eval::report::{
    write_aggregate_csv, write_batches_csv, write_dr_comparison_csv, write_raster_csv,
    write_rounds_csv, Manifest,
};
use crate::eval::{
    boundary_raster, compare_baselines, data_bounds_padded, rep_seeds, run_experiment, sweep_eta,
    RepData,
};
use crate::victims::{save_model, VictimSpec};
use std::collections::BTreeMap;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Prepare,
    Attack,
    Experiment,
    Sweep,
    CompareBaselines,
    Raster,
}

impl Command {
    pub fn as_str(&self) -> &'static str {
        match self {
            Command::Prepare => "prepare",
            Command::Attack => "attack",
            Command::Experiment => "experiment",
            Command::Sweep => "sweep",
            Command::CompareBaselines => "compare-baselines",
            Command::Raster => "raster",
        }
    }
}

/// Flag overrides; every set field wins over the config file.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub eta: Option<f64>,
    pub rounds: Option<usize>,
    pub repetitions: Option<usize>,
    pub seed: Option<u64>,
    pub victim: Option<String>,
    pub out: Option<PathBuf>,
}

const EVAL_SEED_SALT: u64 = 0x00F5_1A2B_3C4D_5E6F;

/// A loaded data source that can draw per-repetition splits. Loading parses
/// and binarizes the pools once; `rep_data` stratifies, encodes and
/// normalizes deterministically in the seed.
pub enum PreparedSource {
    Moons {
        n: usize,
        noise: f64,
        eval_n: usize,
    },
    Kdd {
        pool: RawDataset,
        test: Option<RawDataset>,
        train_counts: BTreeMap<String, usize>,
        eval_counts: BTreeMap<String, usize>,
    },
}

impl PreparedSource {
    pub fn load(src: &DataSourceConfig) -> Result<Self> {
        match src {
            DataSourceConfig::Moons { n, noise, eval_n } => Ok(PreparedSource::Moons {
                n: *n,
                noise: *noise,
                eval_n: *eval_n,
            }),
            DataSourceConfig::KddCsv {
                train_path,
                test_path,
                schema,
                normal_tags,
                train_counts,
                eval_counts,
            } => {
                let rule = match normal_tags {
                    Some(tags) => LabelRule {
                        normal_tags: tags.clone(),
                    },
                    None => LabelRule::kdd(),
                };
                let raw = load_kdd_style(train_path, schema)?;
                let pool = map_kdd_groups(&binarize_labels(&raw, &rule));
                let test = match test_path {
                    Some(p) => {
                        let t = load_kdd_style(p, schema)?;
                        Some(binarize_labels(&t, &rule))
                    }
                    None => None,
                };
                Ok(PreparedSource::Kdd {
                    pool,
                    test,
                    train_counts: train_counts.clone(),
                    eval_counts: eval_counts.clone(),
                })
            }
            DataSourceConfig::SynthKdd {
                seed,
                scale,
                train_counts,
                eval_counts,
            } => {
                let (train_pool, test_pool) = synth_kdd_pool(&SynthKddConfig {
                    seed: *seed,
                    scale: *scale,
                });
                let rule = LabelRule::kdd();
                Ok(PreparedSource::Kdd {
                    pool: map_kdd_groups(&binarize_labels(&train_pool, &rule)),
                    test: Some(binarize_labels(&test_pool, &rule)),
                    train_counts: train_counts.clone(),
                    eval_counts: eval_counts.clone(),
                })
            }
        }
    }

    pub fn rep_data(&self, seed: u64) -> Result<RepData> {
        match self {
            PreparedSource::Moons { n, noise, eval_n } => {
                let train = make_moons(*n, *noise, seed)?;
                let eval = make_moons(*eval_n, *noise, seed ^ EVAL_SEED_SALT)?;
                let params = fit_normalize(&train);
                Ok(RepData {
                    train: apply_normalize(&params, &train)?,
                    eval_sets: vec![(
                        "evaluating".to_string(),
                        apply_normalize(&params, &eval)?,
                    )],
                })
            }
            PreparedSource::Kdd {
                pool,
                test,
                train_counts,
                eval_counts,
            } => {
                let (train_raw, rest) = stratified_sample_raw(pool, train_counts, seed)?;
                let (eval_raw, _) =
                    stratified_sample_raw(&rest, eval_counts, seed ^ EVAL_SEED_SALT)?;
                let (prep, train) = Preprocessor::fit(&train_raw)?;
                let mut eval_sets = vec![("evaluating".to_string(), prep.apply(&eval_raw)?)];
                if let Some(t) = test {
                    eval_sets.push(("testing".to_string(), prep.apply(t)?));
                }
                Ok(RepData {
                    train,
                    eval_sets,
                })
            }
        }
    }
}

fn apply_overrides(cfg: &mut RunConfig, ov: &Overrides) -> Result<()> {
    if let Some(eta) = ov.eta {
        cfg.attack.eta = eta;
    }
    if let Some(rounds) = ov.rounds {
        cfg.attack.rounds = rounds;
    }
    if let Some(reps) = ov.repetitions {
        if reps == 0 {
            return Err(Error::Config("repetitions must be >= 1".into()));
        }
        cfg.repetitions = reps;
    }
    if let Some(seed) = ov.seed {
        cfg.attack.seed = seed;
    }
    if let Some(victim) = &ov.victim {
        cfg.victims = vec![VictimSpec::from_name(victim)?];
    }
    if let Some(out) = &ov.out {
        cfg.out_dir = out.clone();
    }
    cfg.attack = cfg.attack.clone().validated()?;
    Ok(())
}

fn base_manifest(cmd: Command, cfg: &RunConfig) -> Manifest {
    let mut m = Manifest::new(cfg.out_dir.join("manifest.txt"));
    m.set("command", cmd.as_str());
    m.set("source", cfg.source.describe());
    m.set(
        "victims",
        cfg.victims
            .iter()
            .map(|v| v.label())
            .collect::<Vec<_>>()
            .join(";"),
    );
    m.set("eta", cfg.attack.eta);
    m.set(
        "eta_list",
        cfg.eta_list
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(";"),
    );
    m.set("rounds", cfg.attack.rounds);
    m.set("repetitions", cfg.repetitions);
    m.set("seed", cfg.attack.seed);
    m.set(
        "rep_seeds",
        rep_seeds(cfg.attack.seed, cfg.repetitions)
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(";"),
    );
    m.set("step", cfg.attack.step);
    m.set("epsilon", cfg.attack.epsilon);
    m.set("max_iters", cfg.attack.max_iters);
    m.set(
        "batch_size",
        cfg.attack
            .batch_size
            .map(|v| v.to_string())
            .unwrap_or_else(|| "auto".into()),
    );
    m.set("epd_k", cfg.attack.epd_k);
    m.set("epd_tau", cfg.attack.epd_tau);
    m.set(
        "max_edge_points",
        cfg.attack
            .max_edge_points
            .map(|v| v.to_string())
            .unwrap_or_else(|| "unlimited".into()),
    );
    m.set("cumulative_budget", cfg.attack.cumulative_budget);
    m
}

fn sanitize(label: &str) -> String {
    label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect()
}

/// Executes a command. Returns the artifact paths written under the output
/// directory; the manifest is written before computation starts and
/// finalized on success.
pub fn dispatch(cmd: Command, mut cfg: RunConfig, ov: &Overrides) -> Result<Vec<PathBuf>> {
    apply_overrides(&mut cfg, ov)?;
    std::fs::create_dir_all(&cfg.out_dir)
        .map_err(|e| Error::io(cfg.out_dir.display().to_string(), e))?;
    let mut manifest = base_manifest(cmd, &cfg);
    manifest.write_started()?;
    let out = &cfg.out_dir;
    let mut artifacts: Vec<PathBuf> = Vec::new();

    let source = PreparedSource::load(&cfg.source)?;
    let provider = |seed: u64| source.rep_data(seed);

    match cmd {
        Command::Prepare => {
            if let DataSourceConfig::SynthKdd { seed, scale, .. } = &cfg.source {
                let (train_pool, test_pool) = synth_kdd_pool(&SynthKddConfig {
                    seed: *seed,
                    scale: *scale,
                });
                let p1 = out.join("synth_train_pool.csv");
                write_kdd_csv(&train_pool, &p1)?;
                artifacts.push(p1);
                let p2 = out.join("synth_test_pool.csv");
                write_kdd_csv(&test_pool, &p2)?;
                artifacts.push(p2);
            }
            let data = provider(cfg.attack.seed)?;
            // Refit normalization on the prepared training split so the
            // sidecar matches the emitted files.
            let params = fit_normalize(&data.train);
            let p = out.join("train.csv");
            save_normalized(&data.train, &p)?;
            artifacts.push(p);
            for (name, ds) in &data.eval_sets {
                let p = out.join(format!("{name}.csv"));
                save_normalized(ds, &p)?;
                artifacts.push(p);
            }
            let p = out.join("normalization.csv");
            params.save(&data.train.schema, &p)?;
            artifacts.push(p);
        }
        Command::Attack => {
            let data = provider(cfg.attack.seed)?;
            let spec = &cfg.victims[0];
            let run = chronic_attack(&data.train, spec, &cfg.attack, &data.eval_sets)?;
            let label = sanitize(&run.victim);
            let reports: Vec<_> = run.rounds.iter().map(|r| r.report.clone()).collect();
            let p = out.join(format!("rounds_{label}.csv"));
            write_rounds_csv(&p, &[reports])?;
            artifacts.push(p);
            let p = out.join(format!("adversarial_{label}.csv"));
            write_batches_csv(&p, &run, data.train.dim())?;
            artifacts.push(p);
            let p = out.join(format!("model_{label}.txt"));
            save_model(&run.rounds.last().expect("round 0 exists").model, &p)?;
            artifacts.push(p);
        }
        Command::Experiment => {
            let res = run_experiment(&cfg.victims, &cfg.attack, cfg.repetitions, &provider)?;
            for v in &res.victims {
                let label = sanitize(&v.victim);
                let p = out.join(format!("rounds_{label}.csv"));
                write_rounds_csv(&p, &v.reps)?;
                artifacts.push(p);
                let p = out.join(format!("aggregate_{label}.csv"));
                write_aggregate_csv(&p, &v.aggregate)?;
                artifacts.push(p);
            }
            manifest.set("complete_repetitions", res.complete);
        }
        Command::Sweep => {
            let results = sweep_eta(
                &cfg.victims,
                &cfg.attack,
                cfg.repetitions,
                &cfg.eta_list,
                &provider,
            )?;
            let mut summary = String::from("victim,eta,final_acc_mean,final_dr_mean\n");
            for (eta, res) in &results {
                for v in &res.victims {
                    let label = sanitize(&v.victim);
                    let p = out.join(format!("aggregate_eta{eta}_{label}.csv"));
                    write_aggregate_csv(&p, &v.aggregate)?;
                    artifacts.push(p);
                    if let Some(last) = v.aggregate.last() {
                        if let Some(s) = last.sets.iter().find(|s| s.dataset == "evaluating") {
                            summary.push_str(&format!(
                                "{},{eta},{:.6},{}\n",
                                v.victim,
                                s.acc_mean,
                                s.dr_mean
                                    .map(|d| format!("{d:.6}"))
                                    .unwrap_or_else(|| "NA".into())
                            ));
                        }
                    }
                }
            }
            let p = out.join("sweep_summary.csv");
            std::fs::write(&p, summary).map_err(|e| Error::io(p.display().to_string(), e))?;
            artifacts.push(p);
        }
        Command::CompareBaselines => {
            let victim = match &ov.victim {
                Some(name) => VictimSpec::from_name(name)?,
                None => VictimSpec::lssvm_mi(18),
            };
            manifest.set("victims", victim.label());
            let results = compare_baselines(&victim, &cfg.attack, cfg.repetitions, &provider)?;
            for (method, res) in &results {
                let p = out.join(format!(
                    "aggregate_{}_{}.csv",
                    method.as_str(),
                    sanitize(&victim.label())
                ));
                write_aggregate_csv(&p, &res.victims[0].aggregate)?;
                artifacts.push(p);
            }
            let p = out.join("dr_comparison.csv");
            write_dr_comparison_csv(&p, &results, "evaluating")?;
            artifacts.push(p);
        }
        Command::Raster => {
            let data = provider(cfg.attack.seed)?;
            if data.train.dim() != 2 {
                return Err(Error::Dimension {
                    expected: 2,
                    got: data.train.dim(),
                });
            }
            let spec = &cfg.victims[0];
            let run = chronic_attack(&data.train, spec, &cfg.attack, &data.eval_sets)?;
            let bounds = data_bounds_padded(&data.train, 0.1)?;
            for outcome in &run.rounds {
                let raster = boundary_raster(&outcome.model, bounds, 200, 200)?;
                let p = out.join(format!(
                    "raster_{}_round{}.csv",
                    sanitize(&run.victim),
                    outcome.round
                ));
                write_raster_csv(&p, &raster)?;
                artifacts.push(p);
            }
        }
    }

    manifest.finalize(&artifacts)?;
    let mut all = artifacts;
    all.push(cfg.out_dir.join("manifest.txt"));
    Ok(all)
}
