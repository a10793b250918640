//! Ordinal category encoding and min-max normalization, fitted on training
//! data only.

use super::{
    Dataset, FeatureKind, LabeledSample, Origin, RawDataset, RawValue,
};
use crate::error::{Error, Result};
use std::io::Write;
use std::path::Path;

/// Per-feature `(min, max)` pairs fitted on training data.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationParams {
    ranges: Vec<(f64, f64)>,
}

impl NormalizationParams {
    pub fn len(&self) -> usize {
        self.ranges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranges.is_empty()
    }

    pub fn range(&self, i: usize) -> (f64, f64) {
        self.ranges[i]
    }

    /// Sidecar format: one `feature,min,max` line per feature, floats in
    /// shortest round-trip form.
    pub fn save(&self, dataset_schema: &super::FeatureSchema, path: &Path) -> Result<()> {
        let mut out = std::io::BufWriter::new(
            std::fs::File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?,
        );
        for (i, (lo, hi)) in self.ranges.iter().enumerate() {
            writeln!(out, "{},{lo},{hi}", dataset_schema.name(i))
                .map_err(|e| Error::io(path.display().to_string(), e))?;
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        let mut ranges = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split(',').collect();
            if parts.len() != 3 {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!("expected `feature,min,max`, got {line:?}"),
                });
            }
            let lo = parts[1].parse::<f64>().map_err(|_| Error::Parse {
                line: idx + 1,
                message: format!("bad min {:?}", parts[1]),
            })?;
            let hi = parts[2].parse::<f64>().map_err(|_| Error::Parse {
                line: idx + 1,
                message: format!("bad max {:?}", parts[2]),
            })?;
            ranges.push((lo, hi));
        }
        Ok(NormalizationParams { ranges })
    }
}

/// Fits per-feature min/max on a training dataset.
pub fn fit_normalize(train: &Dataset) -> NormalizationParams {
    let d = train.dim();
    let mut ranges = vec![(f64::INFINITY, f64::NEG_INFINITY); d];
    for s in &train.samples {
        for (i, v) in s.features.iter().enumerate() {
            if *v < ranges[i].0 {
                ranges[i].0 = *v;
            }
            if *v > ranges[i].1 {
                ranges[i].1 = *v;
            }
        }
    }
    NormalizationParams { ranges }
}

/// Maps every feature to `(x - min) / (max - min)`, clamped to `[0,1]`.
/// Constant training features map to 0.
pub fn apply_normalize(params: &NormalizationParams, dataset: &Dataset) -> Result<Dataset> {
    if params.len() != dataset.dim() {
        return Err(Error::Dimension {
            expected: params.len(),
            got: dataset.dim(),
        });
    }
    let mut out = dataset.clone();
    for s in &mut out.samples {
        for (i, v) in s.features.iter_mut().enumerate() {
            let (lo, hi) = params.ranges[i];
            *v = if hi > lo {
                ((*v - lo) / (hi - lo)).clamp(0.0, 1.0)
            } else {
                0.0
            };
        }
    }
    Ok(out)
}

/// Ordinal encoder for categorical features: each category maps to its index
/// in the sorted vocabulary observed in training data; unseen categories map
/// to the highest training index.
#[derive(Debug, Clone)]
pub struct CategoryEncoder {
    vocabs: Vec<Option<Vec<String>>>,
}

impl CategoryEncoder {
    pub fn fit(train: &RawDataset) -> Self {
        let d = train.schema.len();
        let mut vocabs: Vec<Option<Vec<String>>> = Vec::with_capacity(d);
        for i in 0..d {
            match train.schema.kind(i) {
                FeatureKind::Numeric => vocabs.push(None),
                FeatureKind::Categorical => {
                    let mut seen: Vec<String> = train
                        .rows
                        .iter()
                        .filter_map(|r| match &r.values[i] {
                            RawValue::Cat(c) => Some(c.clone()),
                            RawValue::Num(_) => None,
                        })
                        .collect();
                    seen.sort_unstable();
                    seen.dedup();
                    vocabs.push(Some(seen));
                }
            }
        }
        CategoryEncoder { vocabs }
    }

    /// Encodes raw rows into numeric samples. Rows must have been binarized.
    pub fn apply(&self, raw: &RawDataset) -> Result<Dataset> {
        let d = raw.schema.len();
        if self.vocabs.len() != d {
            return Err(Error::Dimension {
                expected: self.vocabs.len(),
                got: d,
            });
        }
        let mut samples = Vec::with_capacity(raw.len());
        for row in &raw.rows {
            let label = row.label.ok_or_else(|| {
                Error::Config("rows must be binarized before encoding".into())
            })?;
            let mut features = Vec::with_capacity(d);
            for (i, v) in row.values.iter().enumerate() {
                let x = match (v, &self.vocabs[i]) {
                    (RawValue::Num(x), None) => *x,
                    (RawValue::Cat(c), Some(vocab)) => {
                        match vocab.binary_search(c) {
                            Ok(idx) => idx as f64,
                            // Unseen category: highest training index.
                            Err(_) => vocab.len().saturating_sub(1) as f64,
                        }
                    }
                    _ => {
                        return Err(Error::Config(format!(
                            "feature {:?} kind does not match encoder",
                            raw.schema.name(i)
                        )))
                    }
                };
                features.push(x);
            }
            samples.push(LabeledSample {
                features,
                label,
                category: row.category.clone(),
                origin: Origin::Genuine,
            });
        }
        Ok(Dataset {
            samples,
            schema: raw.schema.clone(),
            provenance: raw.provenance.clone(),
        })
    }
}

/// The full preprocessing chain fitted on one training split: category
/// encoding followed by min-max normalization.
#[derive(Debug, Clone)]
pub struct Preprocessor {
    pub encoder: CategoryEncoder,
    pub norm: NormalizationParams,
}

impl Preprocessor {
    /// Fits on binarized training rows and returns the preprocessor together
    /// with the normalized training dataset.
    pub fn fit(train: &RawDataset) -> Result<(Self, Dataset)> {
        let encoder = CategoryEncoder::fit(train);
        let encoded = encoder.apply(train)?;
        let norm = fit_normalize(&encoded);
        let normalized = apply_normalize(&norm, &encoded)?;
        Ok((Preprocessor { encoder, norm }, normalized))
    }

    pub fn apply(&self, raw: &RawDataset) -> Result<Dataset> {
        let encoded = self.encoder.apply(raw)?;
        apply_normalize(&self.norm, &encoded)
    }
}
