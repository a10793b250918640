//! Gaussian naive Bayes: per-class, per-feature Gaussians with shared
//! variance smoothing.

use crate::data::{Dataset, Label};
use crate::error::Result;

const VAR_SMOOTHING: f64 = 1e-9;
/// Absolute variance floor. Features are normalized into [0,1], so 1e-7 is
/// far below any informative variance; without it, zero-variance features
/// divide rounding noise by the smoothing term alone.
const VAR_FLOOR: f64 = 1e-7;

#[derive(Debug, Clone)]
pub(crate) struct NbParams {
    /// [normal, abnormal]
    pub ln_prior: [f64; 2],
    pub mean: [Vec<f64>; 2],
    pub var: [Vec<f64>; 2],
}

fn class_index(label: Label) -> usize {
    match label {
        Label::Normal => 0,
        Label::Abnormal => 1,
    }
}

pub(crate) fn fit(train: &Dataset) -> Result<NbParams> {
    let d = train.dim();
    let n = train.len() as f64;
    let mut count = [0usize; 2];
    let mut mean = [vec![0.0; d], vec![0.0; d]];
    for s in &train.samples {
        let c = class_index(s.label);
        count[c] += 1;
        for (m, v) in mean[c].iter_mut().zip(&s.features) {
            *m += v;
        }
    }
    for c in 0..2 {
        for m in mean[c].iter_mut() {
            *m /= count[c] as f64;
        }
    }
    let mut var = [vec![0.0; d], vec![0.0; d]];
    for s in &train.samples {
        let c = class_index(s.label);
        for ((v, m), x) in var[c].iter_mut().zip(&mean[c]).zip(&s.features) {
            let dlt = x - m;
            *v += dlt * dlt;
        }
    }
    for c in 0..2 {
        for v in var[c].iter_mut() {
            *v /= count[c] as f64;
        }
    }

    // Smoothing proportional to the largest total variance over all features,
    // with a tiny floor for the all-constant corner case.
    let mut total_mean = vec![0.0; d];
    for s in &train.samples {
        for (m, x) in total_mean.iter_mut().zip(&s.features) {
            *m += x;
        }
    }
    for m in total_mean.iter_mut() {
        *m /= n;
    }
    let mut max_var: f64 = 0.0;
    for f in 0..d {
        let mut v = 0.0;
        for s in &train.samples {
            let dlt = s.features[f] - total_mean[f];
            v += dlt * dlt;
        }
        max_var = max_var.max(v / n);
    }
    let eps = (VAR_SMOOTHING * max_var).max(VAR_FLOOR);
    for c in 0..2 {
        for v in var[c].iter_mut() {
            *v += eps;
        }
    }

    Ok(NbParams {
        ln_prior: [
            (count[0] as f64 / n).ln(),
            (count[1] as f64 / n).ln(),
        ],
        mean,
        var,
    })
}

impl NbParams {
    fn ln_posterior(&self, c: usize, x: &[f64]) -> f64 {
        let mut lp = self.ln_prior[c];
        for ((m, v), xi) in self.mean[c].iter().zip(&self.var[c]).zip(x) {
            let dlt = xi - m;
            lp += -0.5 * (2.0 * std::f64::consts::PI * v).ln() - dlt * dlt / (2.0 * v);
        }
        lp
    }

    /// log P(Abnormal | x) - log P(Normal | x), up to the shared evidence term.
    pub fn decision_value(&self, x: &[f64]) -> f64 {
        self.ln_posterior(1, x) - self.ln_posterior(0, x)
    }
}
