//! From-scratch binary classifiers serving as poisoning targets, plus the
//! black-box label oracle the attack consumes.
//!
//! Four families: Gaussian naive Bayes, L2 logistic regression, soft-margin
//! kernel SVM trained by SMO-style dual optimization, and a least-squares SVM
//! with optional mutual-information feature selection. Fitted models are
//! immutable; prediction is a pure function of (model, input).

mod gaussian_nb;
mod kernel;
pub mod logreg;
mod lssvm;
pub mod mi;
mod persist;
mod svm;

pub use kernel::{Kernel, KernelKind};
pub use mi::mi_feature_select;
pub use persist::{load_model, save_model};
pub use svm::kkt_satisfied_fraction;

use crate::data::{Dataset, Label};
use crate::error::{Error, Result};
use std::sync::atomic::{AtomicU64, Ordering};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    GaussianNb,
    LogReg,
    Svm,
    Lssvm,
}

impl Family {
    pub fn as_str(&self) -> &'static str {
        match self {
            Family::GaussianNb => "gaussian-nb",
            Family::LogReg => "logreg",
            Family::Svm => "svm",
            Family::Lssvm => "lssvm",
        }
    }
}

/// Which model to train and with which hyperparameters. Constructors supply
/// the pinned defaults; individual fields can be overridden afterwards.
#[derive(Debug, Clone)]
pub struct VictimSpec {
    pub family: Family,
    pub kernel: Option<KernelKind>,
    /// Soft-margin / inverse-regularization strength.
    pub c: f64,
    /// Kernel width; `None` resolves to 1/d at fit time.
    pub gamma: Option<f64>,
    pub coef0: f64,
    pub degree: u32,
    /// Convergence tolerance (KKT for SVM, gradient norm for LogReg).
    pub tol: f64,
    /// SMO iteration cap as a multiple of the training-set size.
    pub smo_pass_cap: usize,
    /// Gradient-descent iteration cap for LogReg.
    pub lr_max_iters: usize,
    /// LSSVM ridge regularization.
    pub ls_gamma: f64,
    /// LSSVM rows above this cap are subsampled (evenly strided).
    pub lssvm_train_cap: usize,
    /// Select the top-q features by mutual information before training.
    pub feature_select_q: Option<usize>,
}

impl VictimSpec {
    pub fn gaussian_nb() -> Self {
        VictimSpec {
            family: Family::GaussianNb,
            kernel: None,
            c: 1.0,
            gamma: None,
            coef0: 0.0,
            degree: 3,
            tol: 1e-4,
            smo_pass_cap: 200,
            lr_max_iters: 1000,
            ls_gamma: 1.0,
            lssvm_train_cap: 8000,
            feature_select_q: None,
        }
    }

    pub fn logreg() -> Self {
        VictimSpec {
            family: Family::LogReg,
            ..Self::gaussian_nb()
        }
    }

    pub fn svm(kind: KernelKind) -> Self {
        VictimSpec {
            family: Family::Svm,
            kernel: Some(kind),
            tol: 1e-3,
            // The homogeneous cubic collapses on [0,1]-normalized traffic
            // (kernel values shrink to ~1e-6 and the model degenerates to
            // the majority class); the inhomogeneous form is the usable
            // default.
            coef0: if kind == KernelKind::Poly { 1.0 } else { 0.0 },
            ..Self::gaussian_nb()
        }
    }

    pub fn lssvm_mi(q: usize) -> Self {
        VictimSpec {
            family: Family::Lssvm,
            kernel: Some(KernelKind::Rbf),
            feature_select_q: Some(q),
            ..Self::gaussian_nb()
        }
    }

    /// The six victims evaluated against every data set.
    pub fn paper_zoo() -> Vec<VictimSpec> {
        vec![
            Self::gaussian_nb(),
            Self::logreg(),
            Self::svm(KernelKind::Sigmoid),
            Self::svm(KernelKind::Poly),
            Self::svm(KernelKind::Rbf),
            Self::svm(KernelKind::Linear),
        ]
    }

    /// Short label used in reports and CSV artifacts.
    pub fn label(&self) -> String {
        match self.family {
            Family::GaussianNb => "NB".into(),
            Family::LogReg => "LR".into(),
            Family::Svm => match self.kernel.unwrap_or(KernelKind::Linear) {
                KernelKind::Linear => "SVM-linear".into(),
                KernelKind::Rbf => "SVM-RBF".into(),
                KernelKind::Poly => "SVM-POLY".into(),
                KernelKind::Sigmoid => "SVM-sigmoid".into(),
            },
            Family::Lssvm => {
                if self.feature_select_q.is_some() {
                    "LSSVM-MI".into()
                } else {
                    "LSSVM".into()
                }
            }
        }
    }

    /// Parses the CLI / config model names.
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "nb" | "gaussian-nb" => Ok(Self::gaussian_nb()),
            "lr" | "logreg" => Ok(Self::logreg()),
            "svm-linear" => Ok(Self::svm(KernelKind::Linear)),
            "svm-rbf" => Ok(Self::svm(KernelKind::Rbf)),
            "svm-poly" => Ok(Self::svm(KernelKind::Poly)),
            "svm-sigmoid" => Ok(Self::svm(KernelKind::Sigmoid)),
            "lssvm" => Ok(Self::lssvm_mi(18)),
            "lssvm-mi" => Ok(Self::lssvm_mi(18)),
            other => Err(Error::Config(format!("unknown victim model {other:?}"))),
        }
    }

    pub(crate) fn resolve_kernel(&self, dim: usize) -> Kernel {
        Kernel {
            kind: self.kernel.unwrap_or(KernelKind::Linear),
            gamma: self.gamma.unwrap_or(1.0 / dim.max(1) as f64),
            coef0: self.coef0,
            degree: self.degree,
        }
    }
}

/// Dense row-major matrix used by the kernel machines.
#[derive(Debug, Clone)]
pub(crate) struct Matrix {
    pub data: Vec<f64>,
    pub rows: usize,
    pub cols: usize,
}

impl Matrix {
    pub fn from_rows<'a, I: IntoIterator<Item = &'a [f64]>>(rows: I, cols: usize) -> Matrix {
        let mut data = Vec::new();
        let mut n = 0;
        for r in rows {
            debug_assert_eq!(r.len(), cols);
            data.extend_from_slice(r);
            n += 1;
        }
        Matrix {
            data,
            rows: n,
            cols,
        }
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
}

#[derive(Debug, Clone)]
pub(crate) enum ModelParams {
    GaussianNb(gaussian_nb::NbParams),
    LogReg(logreg::LrParams),
    Svm(svm::SvmParams),
    Lssvm(lssvm::LssvmParams),
}

/// An immutable fitted victim model.
#[derive(Debug, Clone)]
pub struct FittedModel {
    pub(crate) params: ModelParams,
    pub(crate) spec: VictimSpec,
    /// Sorted feature indices kept by MI selection, applied inside predict.
    pub(crate) mask: Option<Vec<usize>>,
    pub(crate) input_dim: usize,
    /// Set when the optimizer hit its iteration cap; the best iterate is
    /// still returned so the experiment can proceed.
    pub convergence_warning: bool,
}

impl FittedModel {
    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn spec(&self) -> &VictimSpec {
        &self.spec
    }

    pub fn feature_mask(&self) -> Option<&[usize]> {
        self.mask.as_deref()
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.input_dim {
            return Err(Error::Dimension {
                expected: self.input_dim,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Signed discriminant value; positive means Abnormal. Used by
    /// diagnostics and the boundary raster, never by the attack path.
    pub fn decision_value(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        let masked;
        let x = match &self.mask {
            Some(mask) => {
                masked = mask.iter().map(|&i| x[i]).collect::<Vec<f64>>();
                masked.as_slice()
            }
            None => x,
        };
        Ok(match &self.params {
            ModelParams::GaussianNb(p) => p.decision_value(x),
            ModelParams::LogReg(p) => p.decision_value(x),
            ModelParams::Svm(p) => p.decision_value(x),
            ModelParams::Lssvm(p) => p.decision_value(x),
        })
    }

    /// Label by the sign of the decision value; ties go to Normal.
    pub fn predict(&self, x: &[f64]) -> Result<Label> {
        Ok(if self.decision_value(x)? > 0.0 {
            Label::Abnormal
        } else {
            Label::Normal
        })
    }
}

/// Optimizer state carried between chronic rounds. The training set only
/// grows, so a previous solution (padded with zeros for the new rows) is a
/// valid starting iterate.
#[derive(Debug, Clone)]
pub enum WarmState {
    None,
    Svm { alpha: Vec<f64>, outputs: Vec<f64> },
    LogReg { w: Vec<f64>, b: f64 },
}

fn validate_train(train: &Dataset) -> Result<()> {
    if train.is_empty() {
        return Err(Error::Size("training set is empty".into()));
    }
    let normals = train.count_label(Label::Normal);
    if normals == 0 || normals == train.len() {
        return Err(Error::Degenerate(
            "training data contains a single class".into(),
        ));
    }
    Ok(())
}

/// Trains a victim model.
pub fn fit(spec: &VictimSpec, train: &Dataset) -> Result<FittedModel> {
    fit_warm(spec, train, &WarmState::None).map(|(m, _)| m)
}

/// Trains a victim model, optionally warm-starting from a previous round's
/// state. The returned [`WarmState`] seeds the next retraining.
pub fn fit_warm(
    spec: &VictimSpec,
    train: &Dataset,
    warm: &WarmState,
) -> Result<(FittedModel, WarmState)> {
    validate_train(train)?;
    match spec.family {
        Family::GaussianNb => {
            let params = gaussian_nb::fit(train)?;
            Ok((
                FittedModel {
                    params: ModelParams::GaussianNb(params),
                    spec: spec.clone(),
                    mask: None,
                    input_dim: train.dim(),
                    convergence_warning: false,
                },
                WarmState::None,
            ))
        }
        Family::LogReg => {
            let start = match warm {
                WarmState::LogReg { w, b } if w.len() == train.dim() => Some((w.clone(), *b)),
                _ => None,
            };
            let (params, converged) = logreg::fit(train, spec, start)?;
            let next = WarmState::LogReg {
                w: params.w.clone(),
                b: params.b,
            };
            Ok((
                FittedModel {
                    params: ModelParams::LogReg(params),
                    spec: spec.clone(),
                    mask: None,
                    input_dim: train.dim(),
                    convergence_warning: !converged,
                },
                next,
            ))
        }
        Family::Svm => {
            let start = match warm {
                WarmState::Svm { alpha, outputs } if alpha.len() <= train.len() => {
                    Some((alpha.as_slice(), outputs.as_slice()))
                }
                _ => None,
            };
            let (params, state, converged) = svm::fit(train, spec, start)?;
            Ok((
                FittedModel {
                    params: ModelParams::Svm(params),
                    spec: spec.clone(),
                    mask: None,
                    input_dim: train.dim(),
                    convergence_warning: !converged,
                },
                state,
            ))
        }
        Family::Lssvm => {
            let (params, mask) = lssvm::fit(train, spec)?;
            Ok((
                FittedModel {
                    params: ModelParams::Lssvm(params),
                    spec: spec.clone(),
                    mask,
                    input_dim: train.dim(),
                    convergence_warning: false,
                },
                WarmState::None,
            ))
        }
    }
}

/// The adversary's only view of a victim: feature vector in, label out.
/// Queries are counted; the counter is safe to read across threads.
pub struct LabelOracle<'a> {
    query_fn: Box<dyn Fn(&[f64]) -> Label + Sync + 'a>,
    queries: AtomicU64,
}

impl<'a> LabelOracle<'a> {
    pub fn new(f: impl Fn(&[f64]) -> Label + Sync + 'a) -> Self {
        LabelOracle {
            query_fn: Box::new(f),
            queries: AtomicU64::new(0),
        }
    }

    /// Wraps a fitted model. Only labels escape through this interface.
    pub fn from_model(model: &'a FittedModel) -> Self {
        LabelOracle::new(move |x| {
            model
                .predict(x)
                .expect("oracle query with mismatched dimension")
        })
    }

    pub fn query(&self, x: &[f64]) -> Label {
        self.queries.fetch_add(1, Ordering::Relaxed);
        (self.query_fn)(x)
    }

    pub fn query_count(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Label;
    use test_util::dataset;

    #[test]
    fn single_class_training_is_degenerate() {
        let ds = dataset(&[
            (vec![0.1], Label::Normal),
            (vec![0.2], Label::Normal),
        ]);
        assert!(matches!(
            fit(&VictimSpec::gaussian_nb(), &ds),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn predict_rejects_wrong_dimension() {
        let ds = dataset(&[
            (vec![0.2, 0.0], Label::Normal),
            (vec![0.8, 1.0], Label::Abnormal),
        ]);
        let m = fit(&VictimSpec::gaussian_nb(), &ds).unwrap();
        assert!(matches!(
            m.predict(&[0.5]),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn oracle_counts_queries() {
        let oracle = LabelOracle::new(|x: &[f64]| {
            if x[0] < 0.5 {
                Label::Normal
            } else {
                Label::Abnormal
            }
        });
        assert_eq!(oracle.query(&[0.1]), Label::Normal);
        assert_eq!(oracle.query(&[0.9]), Label::Abnormal);
        assert_eq!(oracle.query_count(), 2);
    }

    #[test]
    fn refitting_identical_data_reproduces_predictions_bitwise() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(91);
        let rows: Vec<(Vec<f64>, Label)> = (0..80)
            .map(|i| {
                let shift = if i % 2 == 0 { 0.0 } else { 0.4 };
                let label = if i % 2 == 0 {
                    Label::Normal
                } else {
                    Label::Abnormal
                };
                let x: Vec<f64> = (0..3).map(|_| rng.gen::<f64>() * 0.5 + shift).collect();
                (x, label)
            })
            .collect();
        let ds = dataset(&rows);
        for spec in [
            VictimSpec::gaussian_nb(),
            VictimSpec::logreg(),
            VictimSpec::svm(KernelKind::Rbf),
            VictimSpec::lssvm_mi(2),
        ] {
            let a = fit(&spec, &ds).unwrap();
            let b = fit(&spec, &ds).unwrap();
            for _ in 0..100 {
                let x: Vec<f64> = (0..3).map(|_| rng.gen::<f64>()).collect();
                assert_eq!(
                    a.decision_value(&x).unwrap().to_bits(),
                    b.decision_value(&x).unwrap().to_bits(),
                    "{}",
                    spec.label()
                );
            }
        }
    }

    #[test]
    fn predict_is_sign_consistent_with_decision_value() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let rows: Vec<(Vec<f64>, Label)> = (0..60)
            .map(|i| {
                let x: Vec<f64> = (0..3).map(|_| rng.gen::<f64>()).collect();
                let l = if i % 2 == 0 {
                    Label::Normal
                } else {
                    Label::Abnormal
                };
                (x, l)
            })
            .collect();
        let ds = dataset(&rows);
        for spec in [
            VictimSpec::gaussian_nb(),
            VictimSpec::logreg(),
            VictimSpec::svm(KernelKind::Rbf),
            VictimSpec::lssvm_mi(2),
        ] {
            let m = fit(&spec, &ds).unwrap();
            for _ in 0..1000 {
                let x: Vec<f64> = (0..3).map(|_| rng.gen::<f64>()).collect();
                let v = m.decision_value(&x).unwrap();
                let want = if v > 0.0 { Label::Abnormal } else { Label::Normal };
                assert_eq!(m.predict(&x).unwrap(), want);
            }
        }
    }
}
