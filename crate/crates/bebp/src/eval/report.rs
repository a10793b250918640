//! CSV and manifest artifacts. Every writer is deterministic: fixed header,
//! fixed row order, fixed float formatting — identical runs produce
//! byte-identical files.

use super::{ExperimentResult, Raster, RoundAggregate, RoundReport};
use crate::attack::ChronicRun;
use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

fn metric(v: f64) -> String {
    format!("{v:.6}")
}

fn opt_metric(v: Option<f64>) -> String {
    v.map(metric).unwrap_or_else(|| "NA".into())
}

fn create(path: &Path) -> Result<std::io::BufWriter<std::fs::File>> {
    Ok(std::io::BufWriter::new(std::fs::File::create(path).map_err(
        |e| Error::io(path.display().to_string(), e),
    )?))
}

fn finish(mut w: std::io::BufWriter<std::fs::File>, path: &Path) -> Result<()> {
    w.flush().map_err(|e| Error::io(path.display().to_string(), e))
}

/// Per-round report rows:
/// `rep,round,dataset,tp,tn,fp,fn,acc,dr,injected,train_size,warnings`.
pub fn write_rounds_csv(path: &Path, reps: &[Vec<RoundReport>]) -> Result<()> {
    let mut w = create(path)?;
    let io_err = |e| Error::io(path.display().to_string(), e);
    writeln!(
        w,
        "rep,round,dataset,tp,tn,fp,fn,acc,dr,injected,train_size,warnings"
    )
    .map_err(io_err)?;
    for (rep, rounds) in reps.iter().enumerate() {
        for r in rounds {
            for s in &r.sets {
                writeln!(
                    w,
                    "{rep},{},{},{},{},{},{},{},{},{},{},{}",
                    r.round,
                    s.dataset,
                    s.counts.true_pos,
                    s.counts.true_neg,
                    s.counts.false_pos,
                    s.counts.false_neg,
                    metric(s.acc),
                    opt_metric(s.dr),
                    r.injected,
                    r.train_size,
                    r.warnings.join("|")
                )
                .map_err(io_err)?;
            }
        }
    }
    finish(w, path)
}

/// Aggregate rows:
/// `round,dataset,acc_mean,acc_std,dr_mean,dr_std,dr_defined,injected_mean,train_size_mean`.
pub fn write_aggregate_csv(path: &Path, aggregate: &[RoundAggregate]) -> Result<()> {
    let mut w = create(path)?;
    let io_err = |e| Error::io(path.display().to_string(), e);
    writeln!(
        w,
        "round,dataset,acc_mean,acc_std,dr_mean,dr_std,dr_defined,injected_mean,train_size_mean"
    )
    .map_err(io_err)?;
    for a in aggregate {
        for s in &a.sets {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{}",
                a.round,
                s.dataset,
                metric(s.acc_mean),
                metric(s.acc_std),
                opt_metric(s.dr_mean),
                opt_metric(s.dr_std),
                s.dr_defined,
                metric(a.injected_mean),
                metric(a.train_size_mean)
            )
            .map_err(io_err)?;
        }
    }
    finish(w, path)
}

/// Adversarial samples of a run, for audit and replay:
/// `f0,...,fd-1,round,origin`. Features print in round-trip form.
pub fn write_batches_csv(path: &Path, run: &ChronicRun, dim: usize) -> Result<()> {
    let mut w = create(path)?;
    let io_err = |e| Error::io(path.display().to_string(), e);
    let mut header: Vec<String> = (0..dim).map(|i| format!("f{i}")).collect();
    header.push("round".into());
    header.push("origin".into());
    writeln!(w, "{}", header.join(",")).map_err(io_err)?;
    for outcome in &run.rounds {
        if let Some(batch) = &outcome.batch {
            for s in &batch.samples {
                let mut line = String::new();
                for v in &s.features {
                    line.push_str(&format!("{v},"));
                }
                line.push_str(&format!("{},adversarial", batch.round));
                writeln!(w, "{line}").map_err(io_err)?;
            }
        }
    }
    finish(w, path)
}

/// Raster rows: `x,y,label,value`.
pub fn write_raster_csv(path: &Path, raster: &Raster) -> Result<()> {
    let mut w = create(path)?;
    let io_err = |e| Error::io(path.display().to_string(), e);
    writeln!(w, "x,y,label,value").map_err(io_err)?;
    for c in &raster.cells {
        writeln!(w, "{},{},{},{}", c.x, c.y, c.label.as_str(), c.value).map_err(io_err)?;
    }
    finish(w, path)
}

/// Joined per-round mean-DR table over one eval set, one column per method:
/// `round,dr_BEBP,dr_BASIC,dr_RANDOM`.
pub fn write_dr_comparison_csv(
    path: &Path,
    methods: &[(crate::attack::InjectionMethod, ExperimentResult)],
    dataset: &str,
) -> Result<()> {
    let mut w = create(path)?;
    let io_err = |e| Error::io(path.display().to_string(), e);
    let header: Vec<String> = std::iter::once("round".to_string())
        .chain(methods.iter().map(|(m, _)| format!("dr_{}", m.as_str())))
        .collect();
    writeln!(w, "{}", header.join(",")).map_err(io_err)?;
    let rounds = methods
        .iter()
        .filter_map(|(_, r)| r.victims.first().map(|v| v.aggregate.len()))
        .min()
        .unwrap_or(0);
    for round in 0..rounds {
        let mut row = vec![round.to_string()];
        for (_, res) in methods {
            let agg = &res.victims[0].aggregate[round];
            let dr = agg
                .sets
                .iter()
                .find(|s| s.dataset == dataset)
                .and_then(|s| s.dr_mean);
            row.push(opt_metric(dr));
        }
        writeln!(w, "{}", row.join(",")).map_err(io_err)?;
    }
    finish(w, path)
}

/// Run manifest: sorted `key = value` lines. Written with `status = started`
/// before computation and rewritten with `status = complete` plus the
/// artifact list on success, so partial outputs are detectable.
#[derive(Debug, Clone)]
pub struct Manifest {
    path: PathBuf,
    entries: BTreeMap<String, String>,
}

impl Manifest {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        Manifest {
            path: path.into(),
            entries: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.entries.insert(key.to_string(), value.to_string());
    }

    fn write_with_status(&self, status: &str) -> Result<()> {
        let mut w = create(&self.path)?;
        let io_err = |e| Error::io(self.path.display().to_string(), e);
        for (k, v) in &self.entries {
            writeln!(w, "{k} = {v}").map_err(io_err)?;
        }
        writeln!(w, "status = {status}").map_err(io_err)?;
        finish(w, &self.path)
    }

    pub fn write_started(&self) -> Result<()> {
        self.write_with_status("started")
    }

    pub fn finalize(&mut self, artifacts: &[PathBuf]) -> Result<()> {
        for (i, a) in artifacts.iter().enumerate() {
            let name = a
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_else(|| a.display().to_string());
            self.entries.insert(format!("artifact.{i}"), name);
        }
        self.write_with_status("complete")
    }
}
