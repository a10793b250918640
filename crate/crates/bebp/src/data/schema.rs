//! Feature schemas: ordered feature names with a numeric/categorical kind.

use crate::error::{Error, Result};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureKind {
    Numeric,
    Categorical,
}

#[derive(Debug, Clone)]
pub struct FeatureDef {
    pub name: String,
    pub kind: FeatureKind,
}

#[derive(Debug, Clone)]
pub struct FeatureSchema {
    features: Vec<FeatureDef>,
}

impl FeatureSchema {
    pub fn new(features: Vec<FeatureDef>) -> Self {
        FeatureSchema { features }
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn features(&self) -> &[FeatureDef] {
        &self.features
    }

    pub fn kind(&self, i: usize) -> FeatureKind {
        self.features[i].kind
    }

    pub fn name(&self, i: usize) -> &str {
        &self.features[i].name
    }

    /// A plain numeric schema with generated names, for synthetic data and
    /// reloaded already-encoded files.
    pub fn numeric(names: &[&str]) -> Self {
        FeatureSchema::new(
            names
                .iter()
                .map(|n| FeatureDef {
                    name: (*n).to_string(),
                    kind: FeatureKind::Numeric,
                })
                .collect(),
        )
    }

    /// The 41-feature KDDCUP99 / NSL-KDD schema; features 1-3 (protocol,
    /// service, flag) are categorical.
    pub fn kdd41() -> Self {
        let names: [&str; 41] = [
            "duration",
            "protocol_type",
            "service",
            "flag",
            "src_bytes",
            "dst_bytes",
            "land",
            "wrong_fragment",
            "urgent",
            "hot",
            "num_failed_logins",
            "logged_in",
            "num_compromised",
            "root_shell",
            "su_attempted",
            "num_root",
            "num_file_creations",
            "num_shells",
            "num_access_files",
            "num_outbound_cmds",
            "is_host_login",
            "is_guest_login",
            "count",
            "srv_count",
            "serror_rate",
            "srv_serror_rate",
            "rerror_rate",
            "srv_rerror_rate",
            "same_srv_rate",
            "diff_srv_rate",
            "srv_diff_host_rate",
            "dst_host_count",
            "dst_host_srv_count",
            "dst_host_same_srv_rate",
            "dst_host_diff_srv_rate",
            "dst_host_same_src_port_rate",
            "dst_host_srv_diff_host_rate",
            "dst_host_serror_rate",
            "dst_host_srv_serror_rate",
            "dst_host_rerror_rate",
            "dst_host_srv_rerror_rate",
        ];
        FeatureSchema::new(
            names
                .iter()
                .enumerate()
                .map(|(i, n)| FeatureDef {
                    name: (*n).to_string(),
                    kind: if (1..=3).contains(&i) {
                        FeatureKind::Categorical
                    } else {
                        FeatureKind::Numeric
                    },
                })
                .collect(),
        )
    }

    /// The 24-feature Kyoto 2006+ schema reduced to its feature columns; the
    /// session label (1 / -1 / -2) is carried in the label column.
    pub fn kyoto24() -> Self {
        let mut features = Vec::with_capacity(24);
        let numeric = [
            "duration",
            "source_bytes",
            "destination_bytes",
            "count",
            "same_srv_rate",
            "serror_rate",
            "srv_serror_rate",
            "dst_host_count",
            "dst_host_srv_count",
            "dst_host_same_src_port_rate",
            "dst_host_serror_rate",
            "dst_host_srv_serror_rate",
        ];
        for n in numeric {
            features.push(FeatureDef {
                name: n.to_string(),
                kind: FeatureKind::Numeric,
            });
        }
        let categorical = [
            "service",
            "flag",
            "ids_detection",
            "malware_detection",
            "ashula_detection",
            "source_ip",
            "destination_ip",
            "source_port",
            "destination_port",
            "start_time",
            "protocol",
        ];
        for n in categorical {
            features.push(FeatureDef {
                name: n.to_string(),
                kind: FeatureKind::Categorical,
            });
        }
        features.push(FeatureDef {
            name: "dst_host_srv_diff_host_rate".into(),
            kind: FeatureKind::Numeric,
        });
        FeatureSchema::new(features)
    }

    /// Loads a schema from a text file with one `name,kind` pair per line,
    /// kind being `numeric` or `categorical`.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(path.display().to_string(), e))?;
        let mut features = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (name, kind) = line.split_once(',').ok_or_else(|| Error::Parse {
                line: idx + 1,
                message: format!("expected `name,kind`, got {line:?}"),
            })?;
            let kind = match kind.trim() {
                "numeric" => FeatureKind::Numeric,
                "categorical" => FeatureKind::Categorical,
                other => {
                    return Err(Error::Parse {
                        line: idx + 1,
                        message: format!("unknown feature kind {other:?}"),
                    })
                }
            };
            features.push(FeatureDef {
                name: name.trim().to_string(),
                kind,
            });
        }
        if features.is_empty() {
            return Err(Error::Size(format!("schema file {} is empty", path.display())));
        }
        Ok(FeatureSchema::new(features))
    }
}
