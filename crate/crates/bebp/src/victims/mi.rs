//! Histogram mutual-information estimation and greedy relevance-redundancy
//! feature selection (the stand-in for flexible MI-based selection in the
//! LSSVM victim).

use crate::data::{Dataset, Label};
use crate::error::{Error, Result};

const BINS: usize = 10;

#[inline]
fn bin_of(v: f64) -> usize {
    // Features are normalized into [0,1]; clamp strays.
    ((v.clamp(0.0, 1.0) * BINS as f64) as usize).min(BINS - 1)
}

fn mi_from_joint(joint: &[Vec<f64>], n: f64) -> f64 {
    let rows = joint.len();
    let cols = joint[0].len();
    let mut px = vec![0.0; rows];
    let mut py = vec![0.0; cols];
    for (i, row) in joint.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            px[i] += c;
            py[j] += c;
        }
    }
    let mut mi = 0.0;
    for (i, row) in joint.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            if c > 0.0 {
                let pxy = c / n;
                mi += pxy * (pxy / (px[i] / n * py[j] / n)).ln();
            }
        }
    }
    mi.max(0.0)
}

/// I(feature_f ; label), feature discretized into 10 equal-width bins.
pub fn mi_with_label(train: &Dataset, f: usize) -> f64 {
    let mut joint = vec![vec![0.0; 2]; BINS];
    for s in &train.samples {
        let b = bin_of(s.features[f]);
        let c = if s.label == Label::Abnormal { 1 } else { 0 };
        joint[b][c] += 1.0;
    }
    mi_from_joint(&joint, train.len() as f64)
}

/// I(feature_f ; feature_g) over the same 10-bin discretization.
pub fn mi_between(train: &Dataset, f: usize, g: usize) -> f64 {
    let mut joint = vec![vec![0.0; BINS]; BINS];
    for s in &train.samples {
        joint[bin_of(s.features[f])][bin_of(s.features[g])] += 1.0;
    }
    mi_from_joint(&joint, train.len() as f64)
}

/// Greedily selects `q` features maximizing relevance to the label minus
/// mean redundancy with the already-selected set. Returns sorted indices.
pub fn mi_feature_select(train: &Dataset, q: usize) -> Result<Vec<usize>> {
    let d = train.dim();
    if q == 0 || q > d {
        return Err(Error::Bound(format!(
            "q = {q} must satisfy 1 <= q <= {d} features"
        )));
    }
    let relevance: Vec<f64> = (0..d).map(|f| mi_with_label(train, f)).collect();
    let mut selected: Vec<usize> = Vec::with_capacity(q);
    let mut redundancy_sum = vec![0.0; d];
    while selected.len() < q {
        let mut best = usize::MAX;
        let mut best_score = f64::NEG_INFINITY;
        for f in 0..d {
            if selected.contains(&f) {
                continue;
            }
            let red = if selected.is_empty() {
                0.0
            } else {
                redundancy_sum[f] / selected.len() as f64
            };
            let score = relevance[f] - red;
            // Ties break to the lower index for determinism.
            if score > best_score {
                best_score = score;
                best = f;
            }
        }
        let pick = best;
        selected.push(pick);
        for f in 0..d {
            if f != pick && !selected.contains(&f) {
                redundancy_sum[f] += mi_between(train, f, pick);
            }
        }
    }
    selected.sort_unstable();
    Ok(selected)
}
