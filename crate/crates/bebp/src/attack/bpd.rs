//! Boundary pattern detection: walk an edge point outwards along its normal
//! against the label oracle until the walk brackets the decision boundary.
//!
//! While the oracle answers Normal the walk advances by the current step;
//! on Abnormal it steps back by the same step and then shrinks it by a
//! factor of three. A visited Normal position is emitted when its
//! boundary-witness probe — the point `epsilon` further out along the
//! normal — is classified Abnormal, which brackets a label flip within
//! `epsilon` of the position.

use super::{bit_key, ShiftStep, ShiftTrace};
use crate::data::Label;
use crate::geometry::EdgePattern;
use crate::victims::LabelOracle;
use std::collections::HashSet;

/// Runs up to `m` iterations of the boundary walk. Returns the emitted
/// boundary points (deduplicated by exact coordinates) and the full trace.
/// An edge point whose whole ray stays Normal returns an empty set.
pub fn bpd(
    edge: &EdgePattern,
    oracle: &LabelOracle,
    m: usize,
    lambda0: f64,
    epsilon: f64,
) -> (Vec<Vec<f64>>, ShiftTrace) {
    let normal = &edge.normal;
    let mut x = edge.point.clone();
    let mut lambda = lambda0;
    let mut emitted: Vec<Vec<f64>> = Vec::new();
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut steps = Vec::with_capacity(m);
    // While lambda == epsilon the witness probe is bit-identical to the next
    // walk position, so its answer can be carried over instead of re-queried.
    let mut carried: Option<Label> = None;

    for _ in 0..m {
        let label = carried
            .take()
            .unwrap_or_else(|| oracle.query(&x));
        if label == Label::Normal {
            let probe: Vec<f64> = x
                .iter()
                .zip(normal)
                .map(|(xi, ni)| xi + epsilon * ni)
                .collect();
            let probe_label = oracle.query(&probe);
            if probe_label == Label::Abnormal && seen.insert(bit_key(&x)) {
                emitted.push(x.clone());
            }
            steps.push(ShiftStep {
                position: x.clone(),
                step: lambda,
                direction: 1,
                label,
            });
            for (xi, ni) in x.iter_mut().zip(normal) {
                *xi += lambda * ni;
            }
            if lambda == epsilon {
                carried = Some(probe_label);
            }
        } else {
            steps.push(ShiftStep {
                position: x.clone(),
                step: lambda,
                direction: -1,
                label,
            });
            for (xi, ni) in x.iter_mut().zip(normal) {
                *xi -= lambda * ni;
            }
            lambda /= 3.0;
        }
    }

    (
        emitted,
        ShiftTrace {
            edge: edge.clone(),
            steps,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half_plane_oracle(threshold: f64) -> LabelOracle<'static> {
        LabelOracle::new(move |x: &[f64]| {
            if x[0] < threshold {
                Label::Normal
            } else {
                Label::Abnormal
            }
        })
    }

    fn edge_at_origin() -> EdgePattern {
        EdgePattern {
            point: vec![0.0, 0.0],
            normal: vec![1.0, 0.0],
            source_index: 0,
        }
    }

    #[test]
    fn hand_simulated_walk_against_a_half_plane() {
        // Threshold 0.45 keeps every visited position well away from the
        // boundary, so the hand simulation is immune to accumulated float
        // error: 0 -> 0.3 -> 0.6 (A) -> back to 0.3 with a third of the
        // step -> 0.4 -> 0.5 (A) -> back to 0.4 -> 0.4333...
        let oracle = half_plane_oracle(0.45);
        let (emitted, trace) = bpd(&edge_at_origin(), &oracle, 8, 0.3, 0.3);

        let xs: Vec<f64> = trace.steps.iter().map(|s| s.position[0]).collect();
        let expect = [0.0, 0.3, 0.6, 0.3, 0.4, 0.5, 0.4, 0.4 + 1.0 / 30.0];
        assert_eq!(xs.len(), expect.len());
        for (got, want) in xs.iter().zip(expect) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }

        let lambdas: Vec<f64> = trace.steps.iter().map(|s| s.step).collect();
        let expect_l = [0.3, 0.3, 0.3, 0.1, 0.1, 0.1, 0.1 / 3.0, 0.1 / 3.0];
        for (got, want) in lambdas.iter().zip(expect_l) {
            assert!((got - want).abs() < 1e-12);
        }

        let dirs: Vec<i8> = trace.steps.iter().map(|s| s.direction).collect();
        assert_eq!(dirs, vec![1, 1, -1, 1, 1, -1, 1, 1]);

        // Emitted: visited Normal positions whose +epsilon probe crosses.
        // Revisited positions may differ by one ulp from their first visit,
        // so compare after collapsing near-duplicates.
        let mut got: Vec<f64> = emitted.iter().map(|p| p[0]).collect();
        got.sort_by(f64::total_cmp);
        got.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        let want = [0.3, 0.4, 0.4 + 1.0 / 30.0];
        assert_eq!(got.len(), want.len(), "distinct emitted points");
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() < 1e-9, "{g} vs {w}");
        }
    }

    #[test]
    fn always_normal_oracle_emits_nothing_and_walks_straight_out() {
        let oracle = LabelOracle::new(|_: &[f64]| Label::Normal);
        let (emitted, trace) = bpd(&edge_at_origin(), &oracle, 5, 0.2, 0.2);
        assert!(emitted.is_empty());
        assert_eq!(trace.steps.len(), 5);
        for (i, s) in trace.steps.iter().enumerate() {
            assert_eq!(s.direction, 1);
            assert!((s.step - 0.2).abs() < 1e-15, "constant step");
            assert!((s.position[0] - 0.2 * i as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn two_abnormal_encounters_shrink_lambda_to_a_ninth() {
        // Oracle flips to Abnormal beyond 0.25; the walk hits the wall twice
        // within 8 iterations.
        let oracle = half_plane_oracle(0.25);
        let (_, trace) = bpd(&edge_at_origin(), &oracle, 8, 0.3, 0.3);
        let abnormal_hits = trace.steps.iter().filter(|s| s.direction < 0).count();
        assert!(abnormal_hits >= 2);
        // After the second hit the step is lambda0 / 9.
        let mut hits = 0;
        let mut lam_after = None;
        for w in trace.steps.windows(2) {
            if w[0].direction < 0 {
                hits += 1;
                if hits == 2 {
                    lam_after = Some(w[1].step);
                }
            }
        }
        assert!((lam_after.unwrap() - 0.3 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn every_emitted_point_satisfies_the_witness_postcondition() {
        // Random tilted half-planes in 3-D.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let w: Vec<f64> = (0..3).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
            let b = rng.gen::<f64>() * 0.5;
            let oracle = LabelOracle::new(move |x: &[f64]| {
                let s: f64 = w.iter().zip(x).map(|(a, v)| a * v).sum();
                if s < b {
                    Label::Normal
                } else {
                    Label::Abnormal
                }
            });
            let mut normal: Vec<f64> = (0..3).map(|_| rng.gen::<f64>() - 0.5).collect();
            let nn: f64 = normal.iter().map(|v| v * v).sum::<f64>().sqrt();
            if nn == 0.0 {
                continue;
            }
            for v in normal.iter_mut() {
                *v /= nn;
            }
            let edge = EdgePattern {
                point: vec![0.1, 0.1, 0.1],
                normal,
                source_index: 0,
            };
            let eps = 0.07;
            let (emitted, _) = bpd(&edge, &oracle, 25, 0.07, eps);
            for p in &emitted {
                assert_eq!(oracle.query(p), Label::Normal);
                let probe: Vec<f64> = p
                    .iter()
                    .zip(&edge.normal)
                    .map(|(xi, ni)| xi + eps * ni)
                    .collect();
                assert_eq!(oracle.query(&probe), Label::Abnormal);
            }
        }
    }

    #[test]
    fn trace_invariants_hold_on_random_walks() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..40 {
            let t = rng.gen::<f64>() * 0.8;
            let oracle = half_plane_oracle(t);
            let lambda0 = 0.02 + rng.gen::<f64>() * 0.2;
            let (_, trace) = bpd(&edge_at_origin(), &oracle, 30, lambda0, lambda0);
            // Steps only take values lambda0 / 3^j, non-increasing.
            let mut prev = f64::INFINITY;
            for s in &trace.steps {
                let ratio = lambda0 / s.step;
                let j = ratio.log(3.0).round();
                assert!((ratio - 3.0f64.powi(j as i32)).abs() < 1e-9 * ratio);
                assert!(s.step <= prev + 1e-15);
                prev = s.step;
            }
            // Consecutive positions differ by exactly lambda_i along the normal.
            for w in trace.steps.windows(2) {
                let dx = w[1].position[0] - w[0].position[0];
                let expect = w[0].step * w[0].direction as f64;
                assert!((dx - expect).abs() < 1e-12);
            }
        }
    }
}
