//! Point-cloud primitives over the normal-labelled training data: brute-force
//! k-nearest neighbours, edge pattern detection and outward normal estimation.
//!
//! An *edge pattern point* sits on the exterior surface of the point cloud.
//! It is detected by averaging the unit vectors from each of its k nearest
//! neighbours towards the point itself: interior points see those directions
//! cancel, surface points see them align. The surviving mean direction is the
//! outward normal along which the attack later shifts the point.

use crate::error::{Error, Result};

/// An immutable cloud of equal-dimension points.
#[derive(Debug, Clone)]
pub struct PointSet {
    points: Vec<Vec<f64>>,
    dim: usize,
}

impl PointSet {
    /// Builds a point set, validating that every vector has the same
    /// dimension `d >= 1`.
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let dim = match points.first() {
            Some(p) => p.len(),
            None => return Err(Error::Size("point set must not be empty".into())),
        };
        if dim == 0 {
            return Err(Error::Dimension { expected: 1, got: 0 });
        }
        for p in &points {
            if p.len() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    got: p.len(),
                });
            }
        }
        Ok(PointSet { points, dim })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }
}

/// An edge point of the cloud together with its unit outward normal.
#[derive(Debug, Clone)]
pub struct EdgePattern {
    /// The edge point itself, a member of the originating point set.
    pub point: Vec<f64>,
    /// Unit vector pointing away from the data mass.
    pub normal: Vec<f64>,
    /// Index of `point` in the originating point set.
    pub source_index: usize,
}

pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum()
}

/// The `k` nearest neighbours of `points[query_index]`, ascending by
/// Euclidean distance, ties broken by lower index. The query point itself is
/// excluded.
pub fn knn(points: &PointSet, query_index: usize, k: usize) -> Result<Vec<usize>> {
    if query_index >= points.len() {
        return Err(Error::Bound(format!(
            "query index {} out of range for {} points",
            query_index,
            points.len()
        )));
    }
    if k == 0 || k >= points.len() {
        return Err(Error::Size(format!(
            "k = {} must satisfy 1 <= k < {} points",
            k,
            points.len()
        )));
    }
    let q = points.point(query_index);
    let mut order: Vec<(f64, usize)> = (0..points.len())
        .filter(|&i| i != query_index)
        .map(|i| (squared_distance(q, points.point(i)), i))
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(order.into_iter().take(k).map(|(_, i)| i).collect())
}

/// Mean of the unit vectors pointing from each neighbour towards `point`.
///
/// Returns the magnitude of that mean and, when it is nonzero, the normalized
/// direction. Zero-distance neighbours contribute nothing; if every neighbour
/// coincides with the point the direction is degenerate.
pub fn mean_direction(point: &[f64], neighbors: &[Vec<f64>]) -> Result<(f64, Option<Vec<f64>>)> {
    let mut sum = vec![0.0; point.len()];
    let mut contributing = 0usize;
    for nb in neighbors {
        if nb.len() != point.len() {
            return Err(Error::Dimension {
                expected: point.len(),
                got: nb.len(),
            });
        }
        let dist = squared_distance(point, nb).sqrt();
        if dist == 0.0 {
            continue;
        }
        for (s, (p, n)) in sum.iter_mut().zip(point.iter().zip(nb.iter())) {
            *s += (p - n) / dist;
        }
        contributing += 1;
    }
    if contributing == 0 {
        return Err(Error::Degenerate(
            "all neighbours coincide with the query point".into(),
        ));
    }
    for s in sum.iter_mut() {
        *s /= contributing as f64;
    }
    let magnitude = sum.iter().map(|v| v * v).sum::<f64>().sqrt();
    if magnitude == 0.0 {
        return Ok((0.0, None));
    }
    let unit: Vec<f64> = sum.iter().map(|v| v / magnitude).collect();
    Ok((magnitude, Some(unit)))
}

/// Detects the edge pattern points of a cloud.
///
/// A point is an edge point when the mean of the unit vectors from its `k`
/// nearest neighbours towards it has magnitude at least `tau`; the normalized
/// mean is the outward normal.
pub fn edge_detect(points: &PointSet, k: usize, tau: f64) -> Result<Vec<EdgePattern>> {
    if points.len() <= k {
        return Err(Error::Size(format!(
            "edge detection needs more than k = {} points, got {}",
            k,
            points.len()
        )));
    }
    if !(tau > 0.0 && tau <= 1.0) {
        return Err(Error::Bound(format!("tau = {tau} outside (0, 1]")));
    }

    // One pass over the squared-distance matrix instead of a per-point scan;
    // ordering matches knn() exactly (same metric, same tie rule).
    let n = points.len();
    let mut dist = vec![0.0f64; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = squared_distance(points.point(i), points.point(j));
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }

    let mut out = Vec::new();
    let mut order: Vec<usize> = Vec::with_capacity(n - 1);
    for i in 0..n {
        order.clear();
        order.extend((0..n).filter(|&j| j != i));
        let row = &dist[i * n..(i + 1) * n];
        order.sort_by(|&a, &b| row[a].total_cmp(&row[b]).then(a.cmp(&b)));
        let neighbors: Vec<Vec<f64>> = order[..k]
            .iter()
            .map(|&j| points.point(j).to_vec())
            .collect();
        match mean_direction(points.point(i), &neighbors) {
            Ok((magnitude, Some(unit))) if magnitude >= tau => out.push(EdgePattern {
                point: points.point(i).to_vec(),
                normal: unit,
                source_index: i,
            }),
            // Cancellation, sub-threshold magnitude or an all-duplicate
            // neighbourhood: not an edge point.
            Ok(_) | Err(Error::Degenerate(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn unit_square_with_center() -> PointSet {
        PointSet::new(vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 1.0],
            vec![0.5, 0.5],
        ])
        .unwrap()
    }

    #[test]
    fn knn_by_inspection() {
        let ps = PointSet::new(vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![5.0, 5.0],
        ])
        .unwrap();
        assert_eq!(knn(&ps, 0, 2).unwrap(), vec![1, 2]);

        let two = PointSet::new(vec![vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(knn(&two, 0, 1).unwrap(), vec![1]);
    }

    #[test]
    fn knn_rejects_oversized_k() {
        let ps = PointSet::new(vec![vec![0.0], vec![1.0]]).unwrap();
        assert!(matches!(knn(&ps, 0, 2), Err(Error::Size(_))));
    }

    #[test]
    fn pointset_rejects_mixed_dims() {
        assert!(matches!(
            PointSet::new(vec![vec![0.0, 1.0], vec![0.0]]),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn knn_matches_exhaustive_sort_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let pts: Vec<Vec<f64>> = (0..100)
            .map(|_| vec![rng.gen::<f64>(), rng.gen::<f64>()])
            .collect();
        let ps = PointSet::new(pts.clone()).unwrap();
        for q in 0..pts.len() {
            // Independent oracle: true Euclidean distances, stable sort.
            let mut all: Vec<(f64, usize)> = pts
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != q)
                .map(|(i, p)| {
                    let d: f64 = p
                        .iter()
                        .zip(&pts[q])
                        .map(|(a, b)| (a - b).powi(2))
                        .sum::<f64>()
                        .sqrt();
                    (d, i)
                })
                .collect();
            all.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let expect: Vec<usize> = all.iter().take(5).map(|&(_, i)| i).collect();
            assert_eq!(knn(&ps, q, 5).unwrap(), expect, "query {q}");
        }
    }

    #[test]
    fn center_of_square_is_not_an_edge_point() {
        let ps = unit_square_with_center();
        let edges = edge_detect(&ps, 4, 0.5).unwrap();
        assert!(edges.iter().all(|e| e.source_index != 4));
    }

    #[test]
    fn square_corners_are_edge_points_with_diagonal_normals() {
        let ps = unit_square_with_center();
        let edges = edge_detect(&ps, 4, 0.5).unwrap();
        let sources: Vec<usize> = edges.iter().map(|e| e.source_index).collect();
        assert_eq!(sources, vec![0, 1, 2, 3]);

        // Hand computation for corner (0,0): contributions (-1,0), (0,-1) and
        // twice (-1,-1)/sqrt(2); the mean has magnitude (1+sqrt(2))/(2*sqrt(2))
        // and normalizes to the diagonal.
        let c = edges.iter().find(|e| e.source_index == 0).unwrap();
        let diag = -(0.5f64).sqrt();
        assert!((c.normal[0] - diag).abs() < 1e-9);
        assert!((c.normal[1] - diag).abs() < 1e-9);
    }

    #[test]
    fn mean_direction_arithmetic() {
        let (mag, unit) =
            mean_direction(&[1.0, 1.0], &[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!((mag - (0.5f64).sqrt()).abs() < 1e-12);
        let unit = unit.unwrap();
        assert!((unit[0] - (0.5f64).sqrt()).abs() < 1e-12);
        assert!((unit[1] - (0.5f64).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn mean_direction_cancellation_is_undefined() {
        let (mag, unit) =
            mean_direction(&[0.0, 0.0], &[vec![1.0, 0.0], vec![-1.0, 0.0]]).unwrap();
        assert_eq!(mag, 0.0);
        assert!(unit.is_none());
    }

    #[test]
    fn mean_direction_all_coincident_is_degenerate() {
        let r = mean_direction(&[1.0, 2.0], &[vec![1.0, 2.0], vec![1.0, 2.0]]);
        assert!(matches!(r, Err(Error::Degenerate(_))));
    }

    #[test]
    fn mean_direction_magnitude_never_exceeds_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let p: Vec<f64> = (0..3).map(|_| rng.gen::<f64>()).collect();
            let nbs: Vec<Vec<f64>> = (0..10)
                .map(|_| (0..3).map(|_| rng.gen::<f64>()).collect())
                .collect();
            let (mag, _) = mean_direction(&p, &nbs).unwrap();
            assert!(mag <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn duplicate_neighbours_are_skipped() {
        // Point duplicated in the cloud: its coincident twin contributes
        // nothing but the remaining neighbours still define a direction.
        let ps = PointSet::new(vec![
            vec![0.0, 0.0],
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
        ])
        .unwrap();
        let edges = edge_detect(&ps, 3, 0.1).unwrap();
        assert!(edges.iter().any(|e| e.source_index == 0));
    }

    /// 2-D convex hull (Andrew monotone chain), used as an independent oracle.
    fn hull_indices(pts: &[Vec<f64>]) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..pts.len()).collect();
        idx.sort_by(|&a, &b| {
            pts[a][0]
                .total_cmp(&pts[b][0])
                .then(pts[a][1].total_cmp(&pts[b][1]))
        });
        let cross = |o: usize, a: usize, b: usize| -> f64 {
            (pts[a][0] - pts[o][0]) * (pts[b][1] - pts[o][1])
                - (pts[a][1] - pts[o][1]) * (pts[b][0] - pts[o][0])
        };
        let mut hull: Vec<usize> = Vec::new();
        for &i in &idx {
            while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], i) <= 0.0 {
                hull.pop();
            }
            hull.push(i);
        }
        let lower_len = hull.len() + 1;
        for &i in idx.iter().rev() {
            while hull.len() >= lower_len
                && cross(hull[hull.len() - 2], hull[hull.len() - 1], i) <= 0.0
            {
                hull.pop();
            }
            hull.push(i);
        }
        hull.pop();
        hull.sort_unstable();
        hull.dedup();
        hull
    }

    #[test]
    fn edge_detection_recalls_convex_hull_vertices() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let pts: Vec<Vec<f64>> = (0..200)
            .map(|_| loop {
                let x = rng.gen::<f64>() * 2.0 - 1.0;
                let y = rng.gen::<f64>() * 2.0 - 1.0;
                if x * x + y * y <= 1.0 {
                    break vec![x, y];
                }
            })
            .collect();
        let hull = hull_indices(&pts);
        let ps = PointSet::new(pts).unwrap();
        let edges = edge_detect(&ps, 10, 0.3).unwrap();
        let flagged: std::collections::HashSet<usize> =
            edges.iter().map(|e| e.source_index).collect();
        let recalled = hull.iter().filter(|i| flagged.contains(i)).count();
        let recall = recalled as f64 / hull.len() as f64;
        assert!(recall >= 0.9, "hull recall {recall} below 0.9");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn emitted_normals_are_unit(seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let pts: Vec<Vec<f64>> = (0..30)
                .map(|_| vec![rng.gen::<f64>(), rng.gen::<f64>(), rng.gen::<f64>()])
                .collect();
            let ps = PointSet::new(pts).unwrap();
            for e in edge_detect(&ps, 5, 0.2).unwrap() {
                let norm: f64 = e.normal.iter().map(|v| v * v).sum::<f64>().sqrt();
                prop_assert!((norm - 1.0).abs() < 1e-9);
            }
        }

        #[test]
        fn lower_tau_detects_a_superset(seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let pts: Vec<Vec<f64>> = (0..40)
                .map(|_| vec![rng.gen::<f64>(), rng.gen::<f64>()])
                .collect();
            let ps = PointSet::new(pts).unwrap();
            let loose: std::collections::HashSet<usize> = edge_detect(&ps, 6, 0.25)
                .unwrap()
                .iter()
                .map(|e| e.source_index)
                .collect();
            let tight: Vec<usize> = edge_detect(&ps, 6, 0.55)
                .unwrap()
                .iter()
                .map(|e| e.source_index)
                .collect();
            for i in tight {
                prop_assert!(loose.contains(&i));
            }
        }
    }
}
