use serde_json::{json, Map, Value as Json};

use crate::attribution::{AttributionVector, ConvergencePoint, Source};
use crate::error::{Error, Result};
use crate::model::{FeatureSpace, Grid};

/// An imported attribution vector and the instance row it explains.
#[derive(Debug, Clone, PartialEq)]
pub struct ExternalAttribution {
    pub row: Option<usize>,
    pub vector: AttributionVector,
}

/// Reads `name,value` lines. `# method: NAME` names the vector and
/// `# row: N` starts a new vector for instance row `N`; other `#` lines are
/// comments. Features without a line get 0.
pub fn read_external_attribution(
    text: &str,
    space: &FeatureSpace,
) -> Result<Vec<ExternalAttribution>> {
    struct Block {
        row: Option<usize>,
        method: String,
        values: Vec<Option<f64>>,
    }
    let fresh = |row, method: &str| Block {
        row,
        method: method.to_string(),
        values: vec![None; space.len()],
    };
    let mut method = "external".to_string();
    let mut blocks: Vec<Block> = Vec::new();
    let mut current: Option<Block> = None;
    for (n, raw) in text.lines().enumerate() {
        let lineno = n + 1;
        let at = || format!("attribution line {lineno}");
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(meta) = line.strip_prefix('#') {
            let meta = meta.trim();
            if let Some(name) = meta.strip_prefix("method:") {
                method = name.trim().to_string();
                if let Some(b) = current.as_mut() {
                    if b.values.iter().all(Option::is_none) {
                        b.method = method.clone();
                    }
                }
            } else if let Some(row) = meta.strip_prefix("row:") {
                let row = row
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| Error::parse(at(), "row must be a non-negative integer"))?;
                blocks.extend(current.take());
                current = Some(fresh(Some(row), &method));
            }
            continue;
        }
        let (name, value) = line
            .split_once(',')
            .ok_or_else(|| Error::parse(at(), "expected `feature,value`"))?;
        let (name, value) = (name.trim(), value.trim());
        if name == "feature" && value == "value" {
            continue;
        }
        let id = space
            .id_of(name)
            .ok_or_else(|| Error::Mismatch(format!("{}: unknown feature `{name}`", at())))?;
        let value: f64 = value
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| Error::parse(at(), format!("`{value}` is not a finite number")))?;
        let block = current.get_or_insert_with(|| fresh(None, &method));
        if block.values[id].replace(value).is_some() {
            return Err(Error::parse(at(), format!("feature `{name}` listed twice")));
        }
    }
    blocks.extend(current);
    Ok(blocks
        .into_iter()
        .map(|b| ExternalAttribution {
            row: b.row,
            vector: AttributionVector::external(
                b.method,
                b.values.into_iter().map(|v| v.unwrap_or(0.0)).collect(),
            ),
        })
        .collect())
}

/// Writes vectors in the format read by [`read_external_attribution`].
pub fn write_attribution_csv(space: &FeatureSpace, vectors: &[(usize, &AttributionVector)]) -> String {
    let mut out = String::new();
    let mut last_method = None;
    for (row, v) in vectors {
        let method = v.source.to_string();
        if last_method.as_ref() != Some(&method) {
            out.push_str(&format!("# method: {method}\n"));
            last_method = Some(method);
        }
        out.push_str(&format!("# row: {row}\n"));
        for f in space.features() {
            out.push_str(&format!("{},{}\n", f.name, v.values[f.id]));
        }
    }
    out
}

/// Row-major matrix of a vector over a grid-shaped feature space.
pub fn write_grid_matrix(vector: &AttributionVector, grid: Grid) -> Result<String> {
    if grid.rows * grid.cols != vector.len() {
        return Err(Error::Mismatch(format!(
            "{} values do not fill a {}x{} grid",
            vector.len(),
            grid.rows,
            grid.cols
        )));
    }
    let mut out = String::new();
    for r in 0..grid.rows {
        let cells: Vec<String> = vector.values[r * grid.cols..(r + 1) * grid.cols]
            .iter()
            .map(|v| v.to_string())
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(out)
}

/// Attribution results for one explained instance.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributionRecord {
    pub row: usize,
    pub class: String,
    pub complete: bool,
    pub stopped_by: Option<String>,
    pub vectors: Vec<AttributionVector>,
    pub convergence: Vec<(Source, Vec<ConvergencePoint>)>,
}

fn named_values(space: &FeatureSpace, v: &AttributionVector) -> Json {
    let map: Map<String, Json> = space
        .features()
        .iter()
        .map(|f| (f.name.clone(), json!(v.values[f.id])))
        .collect();
    Json::Object(map)
}

/// The attribution document (see `schemas/attribution.json`).
pub fn write_attribution_document(space: &FeatureSpace, records: &[AttributionRecord]) -> String {
    let instances: Vec<Json> = records
        .iter()
        .map(|r| {
            let mut obj = Map::new();
            obj.insert("row".into(), json!(r.row));
            obj.insert("class".into(), json!(r.class));
            obj.insert("complete".into(), json!(r.complete));
            obj.insert("stopped_by".into(), json!(r.stopped_by));
            obj.insert("axps".into(), json!(r.vectors.first().map_or(0, |v| v.basis)));
            for v in &r.vectors {
                obj.insert(v.source.to_string(), named_values(space, v));
            }
            if !r.convergence.is_empty() {
                let conv: Map<String, Json> = r
                    .convergence
                    .iter()
                    .map(|(src, points)| {
                        let pts: Vec<Json> = points
                            .iter()
                            .map(|p| json!({ "mark": p.mark, "axps": p.basis, "error": p.error }))
                            .collect();
                        (src.to_string(), Json::Array(pts))
                    })
                    .collect();
                obj.insert("convergence".into(), Json::Object(conv));
            }
            Json::Object(obj)
        })
        .collect();
    let doc = json!({
        "features": space.features().iter().map(|f| f.name.as_str()).collect::<Vec<_>>(),
        "instances": instances,
    });
    serde_json::to_string_pretty(&doc).expect("attribution serialises") + "\n"
}
