//! Decision-boundary rasters for 2-D models.

use crate::data::{Dataset, Label};
use crate::error::{Error, Result};
use crate::victims::FittedModel;

#[derive(Debug, Clone)]
pub struct RasterCell {
    pub x: f64,
    pub y: f64,
    pub label: Label,
    pub value: f64,
}

#[derive(Debug, Clone)]
pub struct Raster {
    /// Row-major: y varies slowest.
    pub cells: Vec<RasterCell>,
    pub nx: usize,
    pub ny: usize,
    pub bounds: (f64, f64, f64, f64),
}

impl Raster {
    pub fn normal_cell_count(&self) -> usize {
        self.cells
            .iter()
            .filter(|c| c.label == Label::Normal)
            .count()
    }
}

/// Evaluates the model over an inclusive `nx` by `ny` grid spanning
/// `(xmin, xmax, ymin, ymax)`.
pub fn boundary_raster(
    model: &FittedModel,
    bounds: (f64, f64, f64, f64),
    nx: usize,
    ny: usize,
) -> Result<Raster> {
    if model.input_dim() != 2 {
        return Err(Error::Dimension {
            expected: 2,
            got: model.input_dim(),
        });
    }
    if nx < 2 || ny < 2 {
        return Err(Error::Size("raster needs at least a 2x2 grid".into()));
    }
    let (xmin, xmax, ymin, ymax) = bounds;
    let mut cells = Vec::with_capacity(nx * ny);
    for iy in 0..ny {
        let y = ymin + (ymax - ymin) * iy as f64 / (ny - 1) as f64;
        for ix in 0..nx {
            let x = xmin + (xmax - xmin) * ix as f64 / (nx - 1) as f64;
            let value = model.decision_value(&[x, y])?;
            let label = if value > 0.0 {
                Label::Abnormal
            } else {
                Label::Normal
            };
            cells.push(RasterCell { x, y, label, value });
        }
    }
    Ok(Raster {
        cells,
        nx,
        ny,
        bounds,
    })
}

/// The data bounding box of a 2-D dataset, padded by `pad` (fraction of each
/// side length).
pub fn data_bounds_padded(ds: &Dataset, pad: f64) -> Result<(f64, f64, f64, f64)> {
    if ds.dim() != 2 {
        return Err(Error::Dimension {
            expected: 2,
            got: ds.dim(),
        });
    }
    let mut xmin = f64::INFINITY;
    let mut xmax = f64::NEG_INFINITY;
    let mut ymin = f64::INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    for s in &ds.samples {
        xmin = xmin.min(s.features[0]);
        xmax = xmax.max(s.features[0]);
        ymin = ymin.min(s.features[1]);
        ymax = ymax.max(s.features[1]);
    }
    let dx = (xmax - xmin).max(1e-9) * pad;
    let dy = (ymax - ymin).max(1e-9) * pad;
    Ok((xmin - dx, xmax + dx, ymin - dy, ymax + dy))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Label;
    use crate::victims::test_util::dataset;
    use crate::victims::{fit, VictimSpec};

    /// A model whose boundary is the vertical line x = 0.5.
    fn half_plane_model() -> FittedModel {
        let ds = dataset(&[
            (vec![0.1, 0.2], Label::Normal),
            (vec![0.2, 0.8], Label::Normal),
            (vec![0.8, 0.2], Label::Abnormal),
            (vec![0.9, 0.8], Label::Abnormal),
        ]);
        fit(&VictimSpec::logreg(), &ds).unwrap()
    }

    #[test]
    fn three_by_three_grid_splits_along_the_threshold_column() {
        let m = half_plane_model();
        let r = boundary_raster(&m, (0.0, 1.0, 0.0, 1.0), 3, 3).unwrap();
        assert_eq!(r.cells.len(), 9);
        for c in &r.cells {
            if c.x < 0.4 {
                assert_eq!(c.label, Label::Normal, "cell ({}, {})", c.x, c.y);
            }
            if c.x > 0.6 {
                assert_eq!(c.label, Label::Abnormal, "cell ({}, {})", c.x, c.y);
            }
        }
    }

    #[test]
    fn raster_labels_agree_with_predict_everywhere() {
        let m = half_plane_model();
        let r = boundary_raster(&m, (-0.5, 1.5, -0.5, 1.5), 17, 13).unwrap();
        for c in &r.cells {
            assert_eq!(m.predict(&[c.x, c.y]).unwrap(), c.label);
        }
    }

    #[test]
    fn non_2d_model_is_a_dimension_error() {
        let ds = dataset(&[
            (vec![0.1, 0.2, 0.3], Label::Normal),
            (vec![0.8, 0.9, 0.7], Label::Abnormal),
        ]);
        let m = fit(&VictimSpec::gaussian_nb(), &ds).unwrap();
        assert!(matches!(
            boundary_raster(&m, (0.0, 1.0, 0.0, 1.0), 4, 4),
            Err(Error::Dimension { .. })
        ));
    }
}
