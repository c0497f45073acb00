use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Domain, FeatureSpace, FeatureSpec, Grid};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceDoc {
    features: Vec<FeatureDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    grid: Option<GridDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridDoc {
    rows: usize,
    cols: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct FeatureDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    id: Option<usize>,
    name: String,
    #[serde(flatten)]
    domain: DomainDoc,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum DomainDoc {
    Categorical { values: Vec<String> },
    Ordinal { lo: f64, hi: f64 },
    Boolean,
}

/// Reads a feature-space document (see `schemas/feature-space.json`).
pub fn parse_feature_space(text: &str) -> Result<FeatureSpace> {
    let doc: SpaceDoc =
        serde_json::from_str(text).map_err(|e| Error::parse("feature space", e.to_string()))?;
    let mut specs = Vec::with_capacity(doc.features.len());
    for (pos, f) in doc.features.into_iter().enumerate() {
        if let Some(id) = f.id {
            if id != pos {
                return Err(Error::parse(
                    format!("features[{pos}]"),
                    format!("id {id} does not match position {pos}"),
                ));
            }
        }
        let domain = match f.domain {
            DomainDoc::Categorical { values } => Domain::Categorical(values),
            DomainDoc::Ordinal { lo, hi } => Domain::Ordinal { lo, hi },
            DomainDoc::Boolean => Domain::Boolean,
        };
        specs.push(FeatureSpec {
            id: pos,
            name: f.name,
            domain,
        });
    }
    let space =
        FeatureSpace::new(specs).map_err(|e| Error::parse("feature space", e.to_string()))?;
    match doc.grid {
        Some(g) => space
            .with_grid(Grid {
                rows: g.rows,
                cols: g.cols,
            })
            .map_err(|e| Error::parse("grid", e.to_string())),
        None => Ok(space),
    }
}

pub fn write_feature_space(space: &FeatureSpace) -> String {
    let doc = SpaceDoc {
        features: space
            .features()
            .iter()
            .map(|f| FeatureDoc {
                id: Some(f.id),
                name: f.name.clone(),
                domain: match &f.domain {
                    Domain::Categorical(values) => DomainDoc::Categorical {
                        values: values.clone(),
                    },
                    Domain::Ordinal { lo, hi } => DomainDoc::Ordinal { lo: *lo, hi: *hi },
                    Domain::Boolean => DomainDoc::Boolean,
                },
            })
            .collect(),
        grid: space.grid().map(|g| GridDoc {
            rows: g.rows,
            cols: g.cols,
        }),
    };
    serde_json::to_string_pretty(&doc).expect("feature space serialises") + "\n"
}
