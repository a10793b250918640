//! KDD-convention CSV ingestion and export: comma-separated values, one
//! sample per line, label last, no header.

use super::{
    Dataset, FeatureKind, FeatureSchema, Label, LabelRule, LabeledSample, Origin, RawDataset,
    RawRow, RawValue,
};
use crate::error::{Error, Result};
use std::io::Write;
use std::path::Path;

/// Loads a raw KDD-style file against a schema. Rows must have
/// `schema.len() + 1` fields (features plus label); an NSL-KDD trailing
/// difficulty column is tolerated and dropped. Values stay unencoded and
/// unnormalized; the label column is preserved as the category tag.
pub fn load_kdd_style(path: &Path, schema: &FeatureSchema) -> Result<RawDataset> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let d = schema.len();
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != d + 1 && fields.len() != d + 2 {
            return Err(Error::Parse {
                line: idx + 1,
                message: format!(
                    "expected {} fields ({} features + label), got {}",
                    d + 1,
                    d,
                    fields.len()
                ),
            });
        }
        let mut values = Vec::with_capacity(d);
        for (f, def) in fields[..d].iter().zip(schema.features()) {
            let v = match def.kind {
                FeatureKind::Numeric => {
                    RawValue::Num(f.trim().parse::<f64>().map_err(|_| Error::Parse {
                        line: idx + 1,
                        message: format!("feature {:?}: not a number: {f:?}", def.name),
                    })?)
                }
                FeatureKind::Categorical => RawValue::Cat(f.trim().to_string()),
            };
            values.push(v);
        }
        rows.push(RawRow {
            values,
            category: fields[d].trim().to_string(),
            label: None,
        });
    }
    Ok(RawDataset {
        rows,
        schema: schema.clone(),
        provenance: path.display().to_string(),
    })
}

/// Writes a preprocessed dataset back out in the same CSV convention
/// (features, then the category tag as the label column). Floats are printed
/// in shortest round-trip form, so a reload is bit-exact.
pub fn save_normalized(dataset: &Dataset, path: &Path) -> Result<()> {
    let mut out = std::io::BufWriter::new(
        std::fs::File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?,
    );
    for s in &dataset.samples {
        let mut line = String::new();
        for v in &s.features {
            line.push_str(&format!("{v},"));
        }
        line.push_str(&s.category);
        writeln!(out, "{line}").map_err(|e| Error::io(path.display().to_string(), e))?;
    }
    Ok(())
}

/// Reloads an already-encoded, already-normalized CSV written by
/// [`save_normalized`]. All features must parse as numbers; labels are
/// re-derived from the category column via `rule`.
pub fn load_normalized(path: &Path, schema: &FeatureSchema, rule: &LabelRule) -> Result<Dataset> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let d = schema.len();
    let mut samples = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != d + 1 {
            return Err(Error::Parse {
                line: idx + 1,
                message: format!("expected {} fields, got {}", d + 1, fields.len()),
            });
        }
        let mut features = Vec::with_capacity(d);
        for f in &fields[..d] {
            features.push(f.trim().parse::<f64>().map_err(|_| Error::Parse {
                line: idx + 1,
                message: format!("not a number: {f:?}"),
            })?);
        }
        let category = fields[d].trim().to_string();
        let label = if rule.is_normal(&category) {
            Label::Normal
        } else {
            Label::Abnormal
        };
        samples.push(LabeledSample {
            features,
            label,
            category,
            origin: Origin::Genuine,
        });
    }
    Ok(Dataset {
        samples,
        schema: schema.clone(),
        provenance: path.display().to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_schema() -> FeatureSchema {
        FeatureSchema::new(vec![
            super::super::FeatureDef {
                name: "n0".into(),
                kind: FeatureKind::Numeric,
            },
            super::super::FeatureDef {
                name: "proto".into(),
                kind: FeatureKind::Categorical,
            },
            super::super::FeatureDef {
                name: "n1".into(),
                kind: FeatureKind::Numeric,
            },
        ])
    }

    #[test]
    fn parses_categories_verbatim() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("kdd.csv");
        std::fs::write(&p, "0,tcp,1.5,normal.\n2,udp,0.25,smurf.\n1,icmp,3,satan.\n").unwrap();
        let raw = load_kdd_style(&p, &small_schema()).unwrap();
        assert_eq!(raw.len(), 3);
        let cats: Vec<&str> = raw.rows.iter().map(|r| r.category.as_str()).collect();
        assert_eq!(cats, vec!["normal.", "smurf.", "satan."]);
        assert_eq!(raw.rows[1].values[1], RawValue::Cat("udp".into()));
        assert_eq!(raw.rows[2].values[2], RawValue::Num(3.0));
    }

    #[test]
    fn arity_mismatch_names_the_line() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("kdd.csv");
        std::fs::write(&p, "0,tcp,1.5,normal.\n2,udp,smurf.\n").unwrap();
        match load_kdd_style(&p, &small_schema()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn nsl_kdd_difficulty_column_is_dropped() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("nsl.csv");
        std::fs::write(&p, "0,tcp,1.5,normal,21\n").unwrap();
        let raw = load_kdd_style(&p, &small_schema()).unwrap();
        assert_eq!(raw.rows[0].category, "normal");
        assert_eq!(raw.rows[0].values.len(), 3);
    }

    #[test]
    fn sample_count_equals_line_count() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("many.csv");
        let mut text = String::new();
        let n = 517;
        for i in 0..n {
            text.push_str(&format!("{i},tcp,0.5,normal.\n"));
        }
        std::fs::write(&p, &text).unwrap();
        let raw = load_kdd_style(&p, &small_schema()).unwrap();
        // Line-count oracle.
        assert_eq!(raw.len(), text.lines().count());
        assert_eq!(raw.len(), n);
    }

    #[test]
    fn kyoto_session_labels_binarize() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("kyoto.csv");
        let schema = FeatureSchema::kyoto24();
        // 24 feature fields (12 numeric, 11 categorical, 1 numeric) + label.
        let mk = |label: &str| {
            let mut fields = Vec::new();
            for def in schema.features() {
                match def.kind {
                    FeatureKind::Numeric => fields.push("1.5".to_string()),
                    FeatureKind::Categorical => fields.push("x".to_string()),
                }
            }
            fields.push(label.to_string());
            fields.join(",")
        };
        let text = format!("{}\n{}\n{}\n", mk("1"), mk("-1"), mk("-2"));
        std::fs::write(&p, text).unwrap();
        let raw = load_kdd_style(&p, &schema).unwrap();
        let out = crate::data::binarize_labels(&raw, &crate::data::LabelRule::kyoto());
        let labels: Vec<Label> = out.rows.iter().map(|r| r.label.unwrap()).collect();
        assert_eq!(
            labels,
            vec![Label::Normal, Label::Abnormal, Label::Abnormal]
        );
    }

    #[test]
    fn missing_file_is_io_error() {
        assert!(matches!(
            load_kdd_style(Path::new("/nonexistent/x.csv"), &small_schema()),
            Err(Error::Io { .. })
        ));
    }
}
