//! L2-regularized logistic regression trained by gradient descent with
//! backtracking line search.
//!
//! The objective is the mean logistic loss plus `|w|^2 / (2 C n)`; the bias
//! is not regularized. `objective` and `gradient` are public so tests can
//! check the analytic gradient against finite differences.

use crate::data::{Dataset, Label};
use crate::error::Result;
use crate::victims::VictimSpec;

#[derive(Debug, Clone)]
pub(crate) struct LrParams {
    pub w: Vec<f64>,
    pub b: f64,
}

impl LrParams {
    pub fn decision_value(&self, x: &[f64]) -> f64 {
        self.w.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + self.b
    }
}

/// Numerically stable ln(1 + exp(-m)).
#[inline]
fn softplus_neg(m: f64) -> f64 {
    if m > 0.0 {
        (-m).exp().ln_1p()
    } else {
        -m + m.exp().ln_1p()
    }
}

/// Stable logistic sigmoid of -m.
#[inline]
fn sigma_neg(m: f64) -> f64 {
    if m > 0.0 {
        let e = (-m).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + m.exp())
    }
}

/// Mean logistic loss plus L2 penalty. `y` entries are +1 (Abnormal) or -1.
pub fn objective(x: &[Vec<f64>], y: &[f64], w: &[f64], b: f64, c: f64) -> f64 {
    let n = x.len() as f64;
    let mut loss = 0.0;
    for (xi, yi) in x.iter().zip(y) {
        let z = w.iter().zip(xi).map(|(a, v)| a * v).sum::<f64>() + b;
        loss += softplus_neg(yi * z);
    }
    let reg: f64 = w.iter().map(|v| v * v).sum::<f64>() / (2.0 * c * n);
    loss / n + reg
}

/// Analytic gradient of [`objective`]: (d/dw, d/db).
pub fn gradient(x: &[Vec<f64>], y: &[f64], w: &[f64], b: f64, c: f64) -> (Vec<f64>, f64) {
    let n = x.len() as f64;
    let mut gw = vec![0.0; w.len()];
    let mut gb = 0.0;
    for (xi, yi) in x.iter().zip(y) {
        let z = w.iter().zip(xi).map(|(a, v)| a * v).sum::<f64>() + b;
        let s = sigma_neg(yi * z); // sigmoid(-y z)
        let coeff = -yi * s;
        for (g, v) in gw.iter_mut().zip(xi) {
            *g += coeff * v;
        }
        gb += coeff;
    }
    for (g, wv) in gw.iter_mut().zip(w) {
        *g = *g / n + wv / (c * n);
    }
    (gw, gb / n)
}

pub(crate) fn fit(
    train: &Dataset,
    spec: &VictimSpec,
    warm: Option<(Vec<f64>, f64)>,
) -> Result<(LrParams, bool)> {
    let d = train.dim();
    let x: Vec<Vec<f64>> = train.samples.iter().map(|s| s.features.clone()).collect();
    let y: Vec<f64> = train
        .samples
        .iter()
        .map(|s| if s.label == Label::Abnormal { 1.0 } else { -1.0 })
        .collect();

    let (mut w, mut b) = warm.unwrap_or((vec![0.0; d], 0.0));
    let mut f = objective(&x, &y, &w, b, spec.c);
    let mut step = 1.0f64;
    let mut converged = false;

    for _ in 0..spec.lr_max_iters {
        let (gw, gb) = gradient(&x, &y, &w, b, spec.c);
        let gnorm2: f64 = gw.iter().map(|g| g * g).sum::<f64>() + gb * gb;
        if gnorm2.sqrt() <= spec.tol {
            converged = true;
            break;
        }
        // Armijo backtracking, re-using the last accepted step as the guess.
        step = (step * 2.0).min(1e4);
        let mut accepted = false;
        for _ in 0..60 {
            let wt: Vec<f64> = w.iter().zip(&gw).map(|(a, g)| a - step * g).collect();
            let bt = b - step * gb;
            let ft = objective(&x, &y, &wt, bt, spec.c);
            if ft <= f - 1e-4 * step * gnorm2 {
                w = wt;
                b = bt;
                f = ft;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            // No descent step of representable size: treat as converged.
            converged = gnorm2.sqrt() <= 10.0 * spec.tol;
            break;
        }
    }
    Ok((LrParams { w, b }, converged))
}
