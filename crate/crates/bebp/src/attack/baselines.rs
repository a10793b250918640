//! BASIC and RANDOM comparison injectors.

use super::{AdvSample, AdversarialBatch};
use crate::data::{Dataset, Label};
use crate::error::{Error, Result};
use crate::victims::LabelOracle;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn normal_rows(train: &Dataset) -> Vec<usize> {
    train
        .samples
        .iter()
        .enumerate()
        .filter(|(_, s)| s.label == Label::Normal)
        .map(|(i, _)| i)
        .collect()
}

/// BASIC: n exact copies of Normal-labelled training rows, drawn uniformly
/// with replacement.
pub fn baseline_basic(train: &Dataset, n: usize, seed: u64) -> Result<AdversarialBatch> {
    if n == 0 {
        return Err(Error::Size("baseline injection needs n >= 1".into()));
    }
    let pool = normal_rows(train);
    if pool.is_empty() {
        return Err(Error::Degenerate("no normal training rows to copy".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = (0..n)
        .map(|_| AdvSample {
            features: train.samples[pool[rng.gen_range(0..pool.len())]]
                .features
                .clone(),
            source: None,
        })
        .collect();
    Ok(AdversarialBatch {
        samples,
        round: 0,
        warning: None,
    })
}

/// RANDOM: feature vectors drawn uniformly from the unit cube and kept when
/// the oracle calls them Normal, until `n` are kept or 100·n candidates are
/// exhausted; n Normal training copies are then appended as well. A cap
/// exhausted with zero keeps yields an empty batch with a warning.
pub fn baseline_random(
    train: &Dataset,
    oracle: &LabelOracle,
    n: usize,
    d: usize,
    seed: u64,
) -> Result<AdversarialBatch> {
    if n == 0 {
        return Err(Error::Size("baseline injection needs n >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut kept: Vec<AdvSample> = Vec::new();
    let cap = 100usize.saturating_mul(n);
    let mut tried = 0usize;
    while kept.len() < n && tried < cap {
        let v: Vec<f64> = (0..d).map(|_| rng.gen::<f64>()).collect();
        tried += 1;
        if oracle.query(&v) == Label::Normal {
            kept.push(AdvSample {
                features: v,
                source: None,
            });
        }
    }
    if kept.is_empty() {
        return Ok(AdversarialBatch {
            samples: Vec::new(),
            round: 0,
            warning: Some(format!(
                "random generation exhausted {cap} candidates with zero keeps"
            )),
        });
    }
    let pool = normal_rows(train);
    if !pool.is_empty() {
        for _ in 0..n {
            kept.push(AdvSample {
                features: train.samples[pool[rng.gen_range(0..pool.len())]]
                    .features
                    .clone(),
                source: None,
            });
        }
    }
    Ok(AdversarialBatch {
        samples: kept,
        round: 0,
        warning: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::victims::test_util::dataset;

    fn train() -> Dataset {
        dataset(&[
            (vec![0.1, 0.1], Label::Normal),
            (vec![0.2, 0.3], Label::Normal),
            (vec![0.9, 0.8], Label::Abnormal),
            (vec![0.8, 0.9], Label::Abnormal),
        ])
    }

    #[test]
    fn basic_copies_existing_normal_rows() {
        let ds = train();
        let b = baseline_basic(&ds, 5, 1).unwrap();
        assert_eq!(b.len(), 5);
        for s in &b.samples {
            assert!(
                s.features == vec![0.1, 0.1] || s.features == vec![0.2, 0.3],
                "not a normal training row: {:?}",
                s.features
            );
        }
    }

    #[test]
    fn random_against_accepting_oracle_keeps_first_candidates() {
        let ds = train();
        let oracle = LabelOracle::new(|_: &[f64]| Label::Normal);
        let b = baseline_random(&ds, &oracle, 4, 2, 2).unwrap();
        // n kept plus n normal training copies.
        assert_eq!(b.len(), 8);
        assert_eq!(oracle.query_count(), 4);
    }

    #[test]
    fn random_against_rejecting_oracle_is_empty_with_warning() {
        let ds = train();
        let oracle = LabelOracle::new(|_: &[f64]| Label::Abnormal);
        let b = baseline_random(&ds, &oracle, 3, 2, 2).unwrap();
        assert!(b.is_empty());
        assert!(b.warning.is_some());
        assert_eq!(oracle.query_count(), 300);
    }
}
