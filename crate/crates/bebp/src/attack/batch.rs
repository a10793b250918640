//! Batched edge-pattern boundary detection and budget enforcement.

use super::{bit_key, bpd, AdvSample, AdversarialBatch, AttackConfig};
use crate::error::{Error, Result};
use crate::geometry::{edge_detect, EdgePattern, PointSet};
use crate::victims::LabelOracle;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;

/// Batch-EPD boundary pattern detection: draw `floor(n/L)` batches of L
/// normal-labelled points, detect each batch's edge patterns, walk every
/// edge point to the boundary and return the deduplicated union.
///
/// Batch-local edge points may be interior points of the full set; the walk
/// still carries them out to the boundary.
pub fn bebp(
    train_normal: &PointSet,
    oracle: &LabelOracle,
    cfg: &AttackConfig,
    seed: u64,
) -> Result<AdversarialBatch> {
    let n = train_normal.len();
    let l = cfg.effective_batch_size(n);
    if n < l {
        return Err(Error::Size(format!(
            "normal pool has {n} points, batch size is {l}"
        )));
    }
    if l <= cfg.epd_k {
        return Err(Error::Size(format!(
            "batch size {l} must exceed epd_k = {}",
            cfg.epd_k
        )));
    }
    let batches = n / l;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut edges: Vec<EdgePattern> = Vec::new();
    for _ in 0..batches {
        // Independent uniform draws without replacement within each batch.
        let draw = rand::seq::index::sample(&mut rng, n, l).into_vec();
        let subset = PointSet::new(
            draw.iter()
                .map(|&i| train_normal.point(i).to_vec())
                .collect(),
        )?;
        for mut ep in edge_detect(&subset, cfg.epd_k, cfg.epd_tau)? {
            ep.source_index = draw[ep.source_index];
            edges.push(ep);
        }
    }

    // Per-round walk cap: a uniform subsample of the walks keeps the round
    // tractable without biasing which boundary segments get hit.
    if let Some(cap) = cfg.max_edge_points {
        if edges.len() > cap {
            let mut keep = rand::seq::index::sample(&mut rng, edges.len(), cap).into_vec();
            keep.sort_unstable();
            edges = keep.into_iter().map(|i| edges[i].clone()).collect();
        }
    }

    let mut samples: Vec<AdvSample> = Vec::new();
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    for edge in &edges {
        let (emitted, _trace) = bpd(edge, oracle, cfg.max_iters, cfg.step, cfg.epsilon);
        for point in emitted {
            if seen.insert(bit_key(&point)) {
                samples.push(AdvSample {
                    features: point,
                    source: Some(edge.clone()),
                });
            }
        }
    }

    Ok(AdversarialBatch {
        samples,
        round: 0,
        warning: None,
    })
}

/// The largest admissible injection: the greatest integer strictly below
/// `eta * train_size`. Products that land within fp-noise of an integer are
/// treated as exactly that integer so the strict inequality survives
/// rounding (0.07 * 100 must cap at 6, not 7).
pub fn strict_budget_cap(eta: f64, train_size: usize) -> usize {
    let raw = eta * train_size as f64;
    let near = raw.round();
    let cap = if (raw - near).abs() < 1e-9 {
        near as i64 - 1
    } else {
        raw.floor() as i64
    };
    cap.max(0) as usize
}

/// Enforces the poisoning budget: batches at or above the cap are uniformly
/// subsampled (preserving generation order) to the cap.
pub fn enforce_budget(
    batch: AdversarialBatch,
    eta: f64,
    train_size: usize,
    seed: u64,
) -> AdversarialBatch {
    let cap = strict_budget_cap(eta, train_size);
    enforce_cap(batch, cap, seed)
}

pub(crate) fn enforce_cap(mut batch: AdversarialBatch, cap: usize, seed: u64) -> AdversarialBatch {
    if cap == 0 {
        log::warn!("poisoning budget cap is 0; dropping {} samples", batch.len());
        batch.samples.clear();
        return batch;
    }
    if batch.len() <= cap {
        return batch;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut keep = rand::seq::index::sample(&mut rng, batch.len(), cap).into_vec();
    keep.sort_unstable();
    batch.samples = keep.into_iter().map(|i| batch.samples[i].clone()).collect();
    batch
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Label;

    #[test]
    fn cap_honours_the_strict_inequality() {
        // Table-1 training size with the default ratio: 0.07 * 6472 = 453.04.
        assert_eq!(strict_budget_cap(0.07, 6472), 453);
        // Exact integer product: strictly-less means one below.
        assert_eq!(strict_budget_cap(0.07, 100), 6);
        assert_eq!(strict_budget_cap(0.5, 10), 4);
        assert_eq!(strict_budget_cap(0.01, 50), 0);
    }

    fn batch_of(n: usize) -> AdversarialBatch {
        AdversarialBatch {
            samples: (0..n)
                .map(|i| AdvSample {
                    features: vec![i as f64],
                    source: None,
                })
                .collect(),
            round: 1,
            warning: None,
        }
    }

    #[test]
    fn under_budget_batches_pass_through_unchanged() {
        let b = enforce_budget(batch_of(10), 0.07, 6472, 3);
        assert_eq!(b.len(), 10);
        let vals: Vec<f64> = b.samples.iter().map(|s| s.features[0]).collect();
        assert_eq!(vals, (0..10).map(|i| i as f64).collect::<Vec<_>>());
    }

    #[test]
    fn over_budget_batches_subsample_to_the_cap() {
        let b = enforce_budget(batch_of(50), 0.07, 100, 3);
        assert_eq!(b.len(), 6);
        // Generation order preserved.
        let vals: Vec<f64> = b.samples.iter().map(|s| s.features[0]).collect();
        let mut sorted = vals.clone();
        sorted.sort_by(f64::total_cmp);
        assert_eq!(vals, sorted);
    }

    #[test]
    fn zero_cap_empties_the_batch() {
        let b = enforce_budget(batch_of(5), 0.01, 50, 3);
        assert!(b.is_empty());
    }

    #[test]
    fn single_batch_bebp_reduces_to_plain_pipeline() {
        // With L = n the batch is the whole pool: one edge detection pass,
        // walks from exactly the full-set edge patterns.
        let pts: Vec<Vec<f64>> = vec![
            vec![0.0, 0.0],
            vec![0.3, 0.0],
            vec![0.0, 0.3],
            vec![0.3, 0.3],
            vec![0.15, 0.15],
            vec![0.1, 0.05],
            vec![0.2, 0.25],
            vec![0.05, 0.2],
            vec![0.25, 0.1],
            vec![0.12, 0.22],
            vec![0.18, 0.08],
            vec![0.22, 0.18],
        ];
        let ps = PointSet::new(pts.clone()).unwrap();
        let oracle = LabelOracle::new(|x: &[f64]| {
            if x[0] + x[1] < 0.9 {
                Label::Normal
            } else {
                Label::Abnormal
            }
        });
        let cfg = AttackConfig {
            batch_size: Some(pts.len()),
            epd_k: 4,
            epd_tau: 0.3,
            max_iters: 12,
            step: 0.1,
            epsilon: 0.1,
            ..AttackConfig::new(5)
        };
        let got = bebp(&ps, &oracle, &cfg, 42).unwrap();

        // Plain pipeline oracle: edge_detect on the full set, then bpd.
        let mut expect: Vec<Vec<f64>> = Vec::new();
        let mut seen = HashSet::new();
        for edge in edge_detect(&ps, 4, 0.3).unwrap() {
            let (emitted, _) = bpd(&edge, &oracle, 12, 0.1, 0.1);
            for p in emitted {
                if seen.insert(bit_key(&p)) {
                    expect.push(p);
                }
            }
        }
        let got_set: HashSet<Vec<u64>> =
            got.samples.iter().map(|s| bit_key(&s.features)).collect();
        let expect_set: HashSet<Vec<u64>> = expect.iter().map(|p| bit_key(p)).collect();
        assert_eq!(got_set, expect_set);
    }

    #[test]
    fn all_abnormal_oracle_yields_an_empty_batch() {
        let pts: Vec<Vec<f64>> = (0..20)
            .map(|i| vec![(i % 5) as f64 * 0.1, (i / 5) as f64 * 0.1])
            .collect();
        let ps = PointSet::new(pts).unwrap();
        let oracle = LabelOracle::new(|_: &[f64]| Label::Abnormal);
        let cfg = AttackConfig {
            batch_size: Some(20),
            epd_k: 4,
            epd_tau: 0.2,
            ..AttackConfig::new(9)
        };
        let batch = bebp(&ps, &oracle, &cfg, 1).unwrap();
        assert!(batch.is_empty());
    }

    #[test]
    fn undersized_pool_is_a_size_error() {
        let ps = PointSet::new(vec![vec![0.0], vec![1.0]]).unwrap();
        let oracle = LabelOracle::new(|_: &[f64]| Label::Normal);
        let cfg = AttackConfig {
            batch_size: Some(12),
            ..AttackConfig::new(0)
        };
        assert!(matches!(
            bebp(&ps, &oracle, &cfg, 0),
            Err(Error::Size(_))
        ));
    }
}
