//! Dataset generation, ingestion, preprocessing and sampling.
//!
//! Raw KDD-style rows keep their categorical strings and attack tags until a
//! training split has been chosen; the [`Preprocessor`] then fits ordinal
//! category encodings and min-max normalization on training data only and
//! maps every split into the `[0,1]` feature space the rest of the crate
//! works in.

mod loader;
mod normalize;
mod sampling;
mod schema;
mod synth;

pub use loader::{load_kdd_style, load_normalized, save_normalized};
pub use normalize::{
    apply_normalize, fit_normalize, CategoryEncoder, NormalizationParams, Preprocessor,
};
pub use sampling::{
    counts_from_pairs, kdd_attack_group, map_kdd_groups, stratified_sample, stratified_sample_raw,
};
pub use schema::{FeatureDef, FeatureKind, FeatureSchema};
pub use synth::{make_moons, synth_kdd_pool, write_kdd_csv, SynthKddConfig};

use crate::error::Result;
use crate::geometry::PointSet;

/// Binary class label. `Abnormal` is the positive class for TP/FN accounting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Normal,
    Abnormal,
}

impl Label {
    pub fn as_str(&self) -> &'static str {
        match self {
            Label::Normal => "normal",
            Label::Abnormal => "abnormal",
        }
    }
}

/// Whether a sample came from the original data or was injected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Genuine,
    Adversarial,
}

impl Origin {
    pub fn as_str(&self) -> &'static str {
        match self {
            Origin::Genuine => "genuine",
            Origin::Adversarial => "adversarial",
        }
    }
}

/// A fully preprocessed sample: numeric features plus provenance.
#[derive(Debug, Clone)]
pub struct LabeledSample {
    pub features: Vec<f64>,
    pub label: Label,
    /// Free-form tag, e.g. an attack name or category group.
    pub category: String,
    pub origin: Origin,
}

/// An in-memory collection of preprocessed samples sharing one schema.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub samples: Vec<LabeledSample>,
    pub schema: FeatureSchema,
    pub provenance: String,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.schema.len()
    }

    pub fn count_label(&self, label: Label) -> usize {
        self.samples.iter().filter(|s| s.label == label).count()
    }

    /// The feature vectors of all Normal-labelled samples, in dataset order.
    pub fn normal_points(&self) -> Result<PointSet> {
        let pts: Vec<Vec<f64>> = self
            .samples
            .iter()
            .filter(|s| s.label == Label::Normal)
            .map(|s| s.features.clone())
            .collect();
        PointSet::new(pts)
    }

}

/// One raw value as read from a KDD-style file.
#[derive(Debug, Clone, PartialEq)]
pub enum RawValue {
    Num(f64),
    Cat(String),
}

/// A raw row: unencoded values plus the label-column tag.
#[derive(Debug, Clone)]
pub struct RawRow {
    pub values: Vec<RawValue>,
    pub category: String,
    pub label: Option<Label>,
}

/// Rows as loaded from disk, before encoding and normalization.
#[derive(Debug, Clone)]
pub struct RawDataset {
    pub rows: Vec<RawRow>,
    pub schema: FeatureSchema,
    pub provenance: String,
}

impl RawDataset {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Maps label-column tags to binary labels.
#[derive(Debug, Clone)]
pub struct LabelRule {
    pub normal_tags: Vec<String>,
}

impl LabelRule {
    /// KDD convention: the normal tag, with or without the trailing dot.
    pub fn kdd() -> Self {
        LabelRule {
            normal_tags: vec!["normal".into(), "normal.".into()],
        }
    }

    /// Kyoto 2006+ session labels: 1 is normal, -1 (known attack) and -2
    /// (unknown attack) are abnormal.
    pub fn kyoto() -> Self {
        LabelRule {
            normal_tags: vec!["1".into()],
        }
    }

    pub fn is_normal(&self, tag: &str) -> bool {
        self.normal_tags.iter().any(|t| t == tag)
    }
}

/// Assigns binary labels from the category tags. Tags that are neither the
/// normal tag nor a known attack tag map to Abnormal.
pub fn binarize_labels(dataset: &RawDataset, rule: &LabelRule) -> RawDataset {
    let mut out = dataset.clone();
    let mut unknown = 0usize;
    for row in &mut out.rows {
        let label = if rule.is_normal(&row.category) {
            Label::Normal
        } else {
            if kdd_attack_group(&row.category).is_none() {
                unknown += 1;
            }
            Label::Abnormal
        };
        row.label = Some(label);
    }
    if unknown > 0 {
        log::warn!(
            "binarize: {unknown} rows with unknown tags mapped to Abnormal ({})",
            dataset.provenance
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_raw(tags: &[&str]) -> RawDataset {
        let schema = FeatureSchema::new(vec![FeatureDef {
            name: "f0".into(),
            kind: FeatureKind::Numeric,
        }]);
        RawDataset {
            rows: tags
                .iter()
                .map(|t| RawRow {
                    values: vec![RawValue::Num(0.0)],
                    category: (*t).to_string(),
                    label: None,
                })
                .collect(),
            schema,
            provenance: "test".into(),
        }
    }

    #[test]
    fn binarize_maps_attacks_to_abnormal() {
        let raw = tiny_raw(&["normal.", "smurf.", "buffer_overflow."]);
        let out = binarize_labels(&raw, &LabelRule::kdd());
        let labels: Vec<Label> = out.rows.iter().map(|r| r.label.unwrap()).collect();
        assert_eq!(
            labels,
            vec![Label::Normal, Label::Abnormal, Label::Abnormal]
        );
    }

    #[test]
    fn binarize_all_normal_has_no_abnormal() {
        let raw = tiny_raw(&["normal.", "normal."]);
        let out = binarize_labels(&raw, &LabelRule::kdd());
        assert!(out.rows.iter().all(|r| r.label == Some(Label::Normal)));
    }

    #[test]
    fn binarize_unknown_tag_is_abnormal() {
        let raw = tiny_raw(&["mystery_attack."]);
        let out = binarize_labels(&raw, &LabelRule::kdd());
        assert_eq!(out.rows[0].label, Some(Label::Abnormal));
    }
}
