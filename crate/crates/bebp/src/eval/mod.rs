//! Metrics and experiment orchestration. Abnormal is the positive class.

mod experiment;
mod raster;
pub mod report;

pub use experiment::{
    compare_baselines, rep_seeds, run_experiment, sweep_eta, DataProvider, ExperimentResult,
    RepData, RoundAggregate, SetAggregate, VictimResult,
};
pub use raster::{boundary_raster, data_bounds_padded, Raster, RasterCell};

use crate::data::{Dataset, Label};
use crate::error::{Error, Result};
use crate::victims::FittedModel;

/// Confusion counts with Abnormal as the positive class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConfusionCounts {
    pub true_pos: usize,
    pub true_neg: usize,
    pub false_pos: usize,
    pub false_neg: usize,
}

impl ConfusionCounts {
    pub fn total(&self) -> usize {
        self.true_pos + self.true_neg + self.false_pos + self.false_neg
    }
}

/// Predicts every sample and tallies the confusion counts.
pub fn confusion(model: &FittedModel, data: &Dataset) -> Result<ConfusionCounts> {
    if data.is_empty() {
        return Err(Error::Size("evaluation data is empty".into()));
    }
    let mut c = ConfusionCounts::default();
    for s in &data.samples {
        let predicted = model.predict(&s.features)?;
        match (s.label, predicted) {
            (Label::Abnormal, Label::Abnormal) => c.true_pos += 1,
            (Label::Normal, Label::Normal) => c.true_neg += 1,
            (Label::Normal, Label::Abnormal) => c.false_pos += 1,
            (Label::Abnormal, Label::Normal) => c.false_neg += 1,
        }
    }
    Ok(c)
}

/// Accuracy: (TP + TN) / (TP + TN + FN + FP).
pub fn acc(c: &ConfusionCounts) -> f64 {
    (c.true_pos + c.true_neg) as f64 / c.total() as f64
}

/// Detecting rate TP / (TP + FN); `None` when there are no Abnormal samples
/// (an explicit undefined marker, never silently 0).
pub fn dr(c: &ConfusionCounts) -> Option<f64> {
    let denom = c.true_pos + c.false_neg;
    if denom == 0 {
        None
    } else {
        Some(c.true_pos as f64 / denom as f64)
    }
}

/// Metrics of one model over one evaluation set.
#[derive(Debug, Clone)]
pub struct EvalSetReport {
    pub dataset: String,
    pub counts: ConfusionCounts,
    pub acc: f64,
    pub dr: Option<f64>,
}

/// The per-round record of a chronic run.
#[derive(Debug, Clone)]
pub struct RoundReport {
    pub round: usize,
    pub sets: Vec<EvalSetReport>,
    /// Adversarial samples injected before this round's model was trained.
    pub injected: usize,
    /// Training-set size after injection.
    pub train_size: usize,
    pub warnings: Vec<String>,
}

impl RoundReport {
    pub fn set(&self, name: &str) -> Option<&EvalSetReport> {
        self.sets.iter().find(|s| s.dataset == name)
    }
}

/// Evaluates a model over every evaluation set and assembles the report.
pub fn round_report(
    round: usize,
    model: &FittedModel,
    eval_sets: &[(String, Dataset)],
    injected: usize,
    train_size: usize,
    warnings: Vec<String>,
) -> Result<RoundReport> {
    let mut sets = Vec::with_capacity(eval_sets.len());
    for (name, data) in eval_sets {
        let counts = confusion(model, data)?;
        sets.push(EvalSetReport {
            dataset: name.clone(),
            counts,
            acc: acc(&counts),
            dr: dr(&counts),
        });
    }
    Ok(RoundReport {
        round,
        sets,
        injected,
        train_size,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::victims::test_util::dataset;
    use crate::victims::{fit, VictimSpec};
    use rand::{Rng, SeedableRng};

    #[test]
    fn metric_arithmetic() {
        let c = ConfusionCounts {
            true_pos: 50,
            true_neg: 40,
            false_pos: 5,
            false_neg: 5,
        };
        assert!((acc(&c) - 0.9).abs() < 1e-12);
        let c2 = ConfusionCounts {
            true_pos: 3,
            false_neg: 1,
            ..Default::default()
        };
        assert!((dr(&c2).unwrap() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn all_correct_counts_give_perfect_metrics() {
        let c = ConfusionCounts {
            true_pos: 10,
            true_neg: 10,
            ..Default::default()
        };
        assert_eq!(acc(&c), 1.0);
        assert_eq!(dr(&c), Some(1.0));
    }

    #[test]
    fn dr_without_abnormal_samples_is_undefined() {
        let c = ConfusionCounts {
            true_neg: 10,
            false_pos: 2,
            ..Default::default()
        };
        assert_eq!(dr(&c), None);
    }

    #[test]
    fn perfect_and_degenerate_classifiers() {
        // A threshold model separates the two blobs perfectly.
        let rows: Vec<(Vec<f64>, Label)> = (0..20)
            .map(|i| {
                if i < 10 {
                    (vec![0.1 + 0.01 * i as f64], Label::Abnormal)
                } else {
                    (vec![0.8 + 0.01 * i as f64], Label::Normal)
                }
            })
            .collect();
        let ds = dataset(&rows);
        let model = fit(&VictimSpec::gaussian_nb(), &ds).unwrap();
        let c = confusion(&model, &ds).unwrap();
        assert_eq!(
            (c.true_pos, c.true_neg, c.false_pos, c.false_neg),
            (10, 10, 0, 0)
        );
    }

    #[test]
    fn confusion_matches_an_independent_tally() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let rows: Vec<(Vec<f64>, Label)> = (0..500)
            .map(|_| {
                let label = if rng.gen::<bool>() {
                    Label::Abnormal
                } else {
                    Label::Normal
                };
                let shift = if label == Label::Abnormal { 0.3 } else { 0.0 };
                (vec![rng.gen::<f64>() * 0.7 + shift, rng.gen::<f64>()], label)
            })
            .collect();
        let ds = dataset(&rows);
        let model = fit(&VictimSpec::logreg(), &ds).unwrap();
        let c = confusion(&model, &ds).unwrap();

        // Brute-force recount, one sample at a time.
        let (mut tp, mut tn, mut fp, mut fk) = (0, 0, 0, 0);
        for s in &ds.samples {
            let p = model.predict(&s.features).unwrap();
            match (s.label, p) {
                (Label::Abnormal, Label::Abnormal) => tp += 1,
                (Label::Normal, Label::Normal) => tn += 1,
                (Label::Normal, Label::Abnormal) => fp += 1,
                (Label::Abnormal, Label::Normal) => fk += 1,
            }
        }
        assert_eq!((c.true_pos, c.true_neg, c.false_pos, c.false_neg), (tp, tn, fp, fk));
        assert_eq!(c.total(), 500);
    }
}
