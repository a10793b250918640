//! Least-squares SVM victim: the dual is a single symmetric linear system,
//! solved by dense Cholesky factorization via block elimination.
//!
//! With A = K + I/gamma_ls (positive definite), solving A eta = 1 and
//! A nu = y gives b = sum(nu)/sum(eta) and alpha = nu - b eta, which satisfy
//! the full (n+1)-dimensional saddle system [0 1^T; 1 A][b; alpha] = [0; y].

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::victims::{mi, svm::labels_to_signs, Kernel, Matrix, VictimSpec};
use faer::prelude::Solve;
use faer::{Mat, Side};

#[derive(Debug, Clone)]
pub(crate) struct LssvmParams {
    pub kernel: Kernel,
    pub x: Matrix,
    pub alpha: Vec<f64>,
    pub bias: f64,
    /// Single-precision copy of the training rows for the query hot path.
    pub(crate) x32: Vec<f32>,
}

impl LssvmParams {
    pub(crate) fn finish(&mut self) {
        self.x32 = self.x.data.iter().map(|&v| v as f32).collect();
    }

    pub fn decision_value(&self, x: &[f64]) -> f64 {
        let d = self.x.cols;
        let x32: Vec<f32> = x.iter().map(|&v| v as f32).collect();
        let mut s = self.bias;
        for (i, a) in self.alpha.iter().enumerate() {
            s += a * self.kernel.eval_f32(&self.x32[i * d..(i + 1) * d], &x32);
        }
        s
    }
}

pub(crate) fn fit(
    train: &Dataset,
    spec: &VictimSpec,
) -> Result<(LssvmParams, Option<Vec<usize>>)> {
    // Feature selection runs on the full training set; the row cap below only
    // bounds the size of the linear system.
    let mask = match spec.feature_select_q {
        Some(q) => Some(mi::mi_feature_select(train, q)?),
        None => None,
    };

    let cap = spec.lssvm_train_cap.max(2);
    let rows: Vec<usize> = if train.len() > cap {
        // Evenly strided subsample: deterministic without extra state.
        (0..cap).map(|i| i * train.len() / cap).collect()
    } else {
        (0..train.len()).collect()
    };

    let dim = mask.as_ref().map_or(train.dim(), |m| m.len());
    let take = |s: &crate::data::LabeledSample| -> Vec<f64> {
        match &mask {
            Some(m) => m.iter().map(|&i| s.features[i]).collect(),
            None => s.features.clone(),
        }
    };
    let feats: Vec<Vec<f64>> = rows.iter().map(|&i| take(&train.samples[i])).collect();
    let x = Matrix::from_rows(feats.iter().map(|v| v.as_slice()), dim);
    let signs = labels_to_signs(train);
    let y: Vec<f64> = rows.iter().map(|&i| signs[i]).collect();
    let n = x.rows;
    let kernel = spec.resolve_kernel(dim);

    let mut a = Mat::<f64>::zeros(n, n);
    for i in 0..n {
        let xi = x.row(i);
        for j in 0..=i {
            let k = kernel.eval(xi, x.row(j));
            a[(i, j)] = k;
            a[(j, i)] = k;
        }
        a[(i, i)] += 1.0 / spec.ls_gamma;
    }
    let llt = a
        .llt(Side::Lower)
        .map_err(|_| Error::Degenerate("LSSVM kernel system is not positive definite".into()))?;
    let mut rhs = Mat::<f64>::zeros(n, 2);
    for i in 0..n {
        rhs[(i, 0)] = 1.0;
        rhs[(i, 1)] = y[i];
    }
    let sol = llt.solve(&rhs);
    let ones_sol: f64 = (0..n).map(|i| sol[(i, 0)]).sum();
    let y_sol: f64 = (0..n).map(|i| sol[(i, 1)]).sum();
    if ones_sol.abs() < 1e-300 {
        return Err(Error::Degenerate("LSSVM bias system is singular".into()));
    }
    let bias = y_sol / ones_sol;
    let alpha: Vec<f64> = (0..n).map(|i| sol[(i, 1)] - bias * sol[(i, 0)]).collect();

    let mut params = LssvmParams {
        kernel,
        x,
        alpha,
        bias,
        x32: Vec::new(),
    };
    params.finish();
    Ok((params, mask))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Label;
    use crate::victims::test_util::dataset;
    use crate::victims::{fit as fit_model, ModelParams};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn solution_satisfies_the_saddle_system() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let rows: Vec<(Vec<f64>, Label)> = (0..50)
            .map(|i| {
                let shift = if i % 2 == 0 { 0.0 } else { 0.5 };
                let label = if i % 2 == 0 {
                    Label::Normal
                } else {
                    Label::Abnormal
                };
                (
                    vec![rng.gen::<f64>() * 0.4 + shift, rng.gen::<f64>() * 0.4],
                    label,
                )
            })
            .collect();
        let ds = dataset(&rows);
        let mut spec = VictimSpec::lssvm_mi(2);
        spec.feature_select_q = None;
        let model = fit_model(&spec, &ds).unwrap();
        let p = match &model.params {
            ModelParams::Lssvm(p) => p,
            _ => unreachable!(),
        };

        // Plug (alpha, b) back into the original system:
        //   sum(alpha) = 0  and  K alpha + alpha/gamma + b = y.
        let sum_alpha: f64 = p.alpha.iter().sum();
        assert!(sum_alpha.abs() < 1e-8, "sum(alpha) = {sum_alpha}");
        for (i, s) in ds.samples.iter().enumerate() {
            let yi = if s.label == Label::Abnormal { 1.0 } else { -1.0 };
            let mut lhs = p.bias + p.alpha[i] / spec.ls_gamma;
            for (j, a) in p.alpha.iter().enumerate() {
                lhs += a * p.kernel.eval(p.x.row(j), &s.features);
            }
            assert!((lhs - yi).abs() < 1e-8, "row {i}: {lhs} vs {yi}");
        }
    }

    #[test]
    fn separable_clusters_train_accurately() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let rows: Vec<(Vec<f64>, Label)> = (0..80)
            .map(|i| {
                let shift = if i % 2 == 0 { 0.0 } else { 0.6 };
                let label = if i % 2 == 0 {
                    Label::Normal
                } else {
                    Label::Abnormal
                };
                let x: Vec<f64> = (0..3).map(|_| rng.gen::<f64>() * 0.35 + shift).collect();
                (x, label)
            })
            .collect();
        let ds = dataset(&rows);
        let mut spec = VictimSpec::lssvm_mi(3);
        spec.feature_select_q = None;
        let m = fit_model(&spec, &ds).unwrap();
        let correct = ds
            .samples
            .iter()
            .filter(|s| m.predict(&s.features).unwrap() == s.label)
            .count();
        assert!(correct as f64 / ds.len() as f64 >= 0.95);
    }

    #[test]
    fn train_cap_subsamples_rows() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let rows: Vec<(Vec<f64>, Label)> = (0..120)
            .map(|i| {
                let shift = if i % 2 == 0 { 0.0 } else { 0.6 };
                let label = if i % 2 == 0 {
                    Label::Normal
                } else {
                    Label::Abnormal
                };
                (vec![rng.gen::<f64>() * 0.3 + shift], label)
            })
            .collect();
        let ds = dataset(&rows);
        let mut spec = VictimSpec::lssvm_mi(1);
        spec.feature_select_q = None;
        spec.lssvm_train_cap = 40;
        let m = fit_model(&spec, &ds).unwrap();
        let p = match &m.params {
            ModelParams::Lssvm(p) => p,
            _ => unreachable!(),
        };
        assert_eq!(p.alpha.len(), 40);
    }
}
