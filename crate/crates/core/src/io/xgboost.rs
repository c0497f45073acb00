//! Reader for the XGBoost JSON tree dump (`dump_model(..., dump_format="json")`).
//!
//! XGBoost compares `x < t` in single precision. Thresholds and leaf weights
//! are snapped to `f32` and a numeric test becomes `x ≤ pred(t)`, where
//! `pred` is the next smaller `f64`. Categorical splits list the category
//! codes that follow the `yes` child; code `i` is value `i` of the domain.

use serde_json::{Map, Value as Json};

use crate::error::{Error, Result};
use crate::model::{Domain, FeatureSpace, Split, Tree, TreeEnsemble, TreeNode};

/// What the dump itself does not record.
#[derive(Debug, Clone, PartialEq)]
pub struct DumpOptions {
    pub classes: Vec<String>,
    /// Initial margin of every output (`logit(base_score)` for binary:logistic).
    pub base_margin: f64,
}

impl Default for DumpOptions {
    fn default() -> Self {
        DumpOptions {
            classes: vec!["0".into(), "1".into()],
            base_margin: 0.0,
        }
    }
}

/// Parses a dump and binds it to `space` by feature name. With two classes
/// every tree adds to the class-1 score; with `k > 2` tree `t` belongs to
/// class `t mod k`.
pub fn parse_ensemble_dump(
    text: &str,
    space: &FeatureSpace,
    options: &DumpOptions,
) -> Result<TreeEnsemble> {
    let doc: Json = serde_json::from_str(text).map_err(|e| Error::parse("dump", e.to_string()))?;
    let items = doc
        .as_array()
        .ok_or_else(|| Error::parse("dump", "expected an array of trees"))?;
    if items.is_empty() {
        return Err(Error::parse("dump", "no trees"));
    }
    let k = options.classes.len();
    if k < 2 {
        return Err(Error::parse("dump", "need at least 2 class names"));
    }
    let mut trees = Vec::with_capacity(items.len());
    for (t, item) in items.iter().enumerate() {
        let root = convert(item, space, &format!("tree {t} > node"))?;
        let class = if k == 2 { 1 } else { t % k };
        trees.push(Tree::new(class, root));
    }
    let base = if k == 2 {
        vec![0.0, options.base_margin]
    } else {
        vec![options.base_margin; k]
    };
    TreeEnsemble::new(space, options.classes.clone(), base, trees)
        .map_err(|e| Error::parse("dump", e.to_string()))
}

fn snap(x: f64) -> f64 {
    x as f32 as f64
}

fn node_path(prefix: &str, obj: &Map<String, Json>) -> String {
    match obj.get("nodeid").and_then(Json::as_u64) {
        Some(id) => format!("{prefix} {id}"),
        None => format!("{prefix} ?"),
    }
}

fn child<'a>(obj: &'a Map<String, Json>, key: &str, path: &str) -> Result<&'a Json> {
    let id = obj
        .get(key)
        .and_then(Json::as_u64)
        .ok_or_else(|| Error::parse(path, format!("missing or malformed `{key}`")))?;
    let children = obj
        .get("children")
        .and_then(Json::as_array)
        .ok_or_else(|| Error::parse(path, "split node without `children`"))?;
    children
        .iter()
        .find(|c| c.get("nodeid").and_then(Json::as_u64) == Some(id))
        .ok_or_else(|| Error::parse(path, format!("dangling child id {id}")))
}

enum Decided {
    /// The test does not depend on the value.
    Always(bool),
    Split(Split),
    /// `yes` is taken when the split does not hold.
    Negated(Split),
}

fn convert(v: &Json, space: &FeatureSpace, prefix: &str) -> Result<TreeNode> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::parse(prefix, "malformed node"))?;
    let path = node_path(prefix, obj);
    if let Some(w) = obj.get("leaf") {
        let w = w
            .as_f64()
            .ok_or_else(|| Error::parse(&path, "leaf is not a number"))?;
        return Ok(TreeNode::leaf(snap(w)));
    }
    let name = obj
        .get("split")
        .and_then(Json::as_str)
        .ok_or_else(|| Error::parse(&path, "node has neither `leaf` nor `split`"))?;
    let id = space
        .id_of(name)
        .ok_or_else(|| Error::parse(&path, format!("unknown feature `{name}`")))?;
    let cond = obj
        .get("split_condition")
        .ok_or_else(|| Error::parse(&path, "missing `split_condition`"))?;
    let decided = decide(space, id, cond, &path)?;
    let inner = format!("{path} > node");
    match decided {
        Decided::Always(true) => convert(child(obj, "yes", &path)?, space, &inner),
        Decided::Always(false) => convert(child(obj, "no", &path)?, space, &inner),
        Decided::Split(split) => {
            let yes = convert(child(obj, "yes", &path)?, space, &inner)?;
            let no = convert(child(obj, "no", &path)?, space, &inner)?;
            Ok(TreeNode::split(split, yes, no))
        }
        Decided::Negated(split) => {
            let yes = convert(child(obj, "yes", &path)?, space, &inner)?;
            let no = convert(child(obj, "no", &path)?, space, &inner)?;
            Ok(TreeNode::split(split, no, yes))
        }
    }
}

fn decide(space: &FeatureSpace, id: usize, cond: &Json, path: &str) -> Result<Decided> {
    let spec = space.feature(id);
    match (cond, &spec.domain) {
        (Json::Array(codes), Domain::Categorical(values)) => {
            let mut set = Vec::with_capacity(codes.len());
            for c in codes {
                let c = c
                    .as_u64()
                    .ok_or_else(|| Error::parse(path, "category codes must be integers"))?
                    as usize;
                if c >= values.len() {
                    return Err(Error::parse(
                        path,
                        format!("category code {c} outside the {} values of `{}`", values.len(), spec.name),
                    ));
                }
                set.push(c);
            }
            Ok(member_split(id, set, values.len()))
        }
        (Json::Array(_), _) => Err(Error::parse(
            path,
            format!("category list on {} feature `{}`", spec.kind(), spec.name),
        )),
        (Json::Number(n), domain) => {
            let t = snap(n.as_f64().unwrap_or(f64::NAN));
            if !t.is_finite() {
                return Err(Error::parse(path, "non-finite threshold"));
            }
            Ok(match domain {
                Domain::Ordinal { .. } => Decided::Split(Split::le(id, t.next_down())),
                Domain::Boolean => {
                    if t <= 0.0 {
                        Decided::Always(false)
                    } else if t > 1.0 {
                        Decided::Always(true)
                    } else {
                        // x < t holds exactly for x = 0.
                        Decided::Negated(Split::is_true(id))
                    }
                }
                Domain::Categorical(values) => {
                    let set: Vec<usize> = (0..values.len()).filter(|&c| (c as f64) < t).collect();
                    member_split(id, set, values.len())
                }
            })
        }
        _ => Err(Error::parse(path, "malformed `split_condition`")),
    }
}

fn member_split(id: usize, mut set: Vec<usize>, domain: usize) -> Decided {
    set.sort_unstable();
    set.dedup();
    if set.is_empty() {
        Decided::Always(false)
    } else if set.len() == domain {
        Decided::Always(true)
    } else {
        Decided::Split(Split::member(id, set))
    }
}
