//! The canonical model document: tree ensembles as nested nodes, linear
//! models as named weights. Feature and category references are by name.

use serde_json::{json, Map, Value as Json};

use crate::error::{Error, Result};
use crate::model::{
    Classifier, Domain, FeatureSpace, Link, LinearModel, Split, Test, Tree, TreeEnsemble, TreeNode,
};

fn perr(path: &str, message: impl Into<String>) -> Error {
    Error::parse(path, message)
}

fn field<'a>(obj: &'a Map<String, Json>, key: &str, path: &str) -> Result<&'a Json> {
    obj.get(key)
        .ok_or_else(|| perr(path, format!("missing field `{key}`")))
}

fn as_f64(v: &Json, path: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| perr(path, "expected a number"))
}

fn as_object<'a>(v: &'a Json, path: &str) -> Result<&'a Map<String, Json>> {
    v.as_object().ok_or_else(|| perr(path, "expected an object"))
}

fn class_names(root: &Map<String, Json>, default_count: usize) -> Result<Vec<String>> {
    match root.get("classes") {
        None => Ok((0..default_count).map(|c| c.to_string()).collect()),
        Some(Json::Array(items)) => items
            .iter()
            .enumerate()
            .map(|(i, c)| {
                c.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| perr(&format!("classes[{i}]"), "expected a string"))
            })
            .collect(),
        Some(_) => Err(perr("classes", "expected an array of names")),
    }
}

/// Reads a canonical model document (see `schemas/model.json`).
pub fn parse_model(text: &str, space: &FeatureSpace) -> Result<Classifier> {
    let doc: Json = serde_json::from_str(text).map_err(|e| perr("model", e.to_string()))?;
    let root = as_object(&doc, "model")?;
    let kind = field(root, "kind", "model")?
        .as_str()
        .ok_or_else(|| perr("kind", "expected a string"))?;
    match kind {
        "trees" => parse_trees(root, space).map(Classifier::Trees),
        "linear" => parse_linear(root, space).map(Classifier::Linear),
        other => Err(perr("kind", format!("unknown model kind `{other}`"))),
    }
}

fn parse_trees(root: &Map<String, Json>, space: &FeatureSpace) -> Result<TreeEnsemble> {
    let classes = class_names(root, 2)?;
    let k = classes.len();
    let base_score = match root.get("base_score") {
        None => vec![0.0; k],
        Some(Json::Array(items)) => items
            .iter()
            .enumerate()
            .map(|(i, v)| as_f64(v, &format!("base_score[{i}]")))
            .collect::<Result<_>>()?,
        Some(_) => return Err(perr("base_score", "expected an array of numbers")),
    };
    let items = field(root, "trees", "model")?
        .as_array()
        .ok_or_else(|| perr("trees", "expected an array"))?;
    if items.is_empty() {
        return Err(perr("trees", "no trees"));
    }
    let mut trees = Vec::with_capacity(items.len());
    for (t, item) in items.iter().enumerate() {
        let path = format!("trees[{t}]");
        let obj = as_object(item, &path)?;
        let class = match obj.get("class") {
            Some(c) => c
                .as_u64()
                .map(|c| c as usize)
                .ok_or_else(|| perr(&format!("{path}.class"), "expected a class index"))?,
            None if k > 2 => t % k,
            None => 1,
        };
        let node = parse_node(field(obj, "root", &path)?, space, &format!("{path}.root"))?;
        trees.push(Tree::new(class, node));
    }
    TreeEnsemble::new(space, classes, base_score, trees).map_err(|e| perr("model", e.to_string()))
}

fn parse_node(v: &Json, space: &FeatureSpace, path: &str) -> Result<TreeNode> {
    let obj = as_object(v, path)?;
    if let Some(w) = obj.get("leaf") {
        return Ok(TreeNode::leaf(as_f64(w, &format!("{path}.leaf"))?));
    }
    let name = field(obj, "feature", path)?
        .as_str()
        .ok_or_else(|| perr(&format!("{path}.feature"), "expected a feature name"))?;
    let id = space
        .id_of(name)
        .ok_or_else(|| perr(path, format!("unknown feature `{name}`")))?;
    let spec = space.feature(id);
    let split = match (obj.get("in"), obj.get("le"), &spec.domain) {
        (Some(values), None, Domain::Categorical(_)) => {
            let values = values
                .as_array()
                .ok_or_else(|| perr(&format!("{path}.in"), "expected an array of values"))?;
            let mut ids = Vec::with_capacity(values.len());
            for val in values {
                let s = val
                    .as_str()
                    .ok_or_else(|| perr(&format!("{path}.in"), "expected value names"))?;
                ids.push(spec.category_index(s).ok_or_else(|| {
                    perr(path, format!("`{s}` is not a value of `{name}`"))
                })?);
            }
            Split::member(id, ids)
        }
        (None, Some(t), Domain::Ordinal { .. }) => Split::le(id, as_f64(t, &format!("{path}.le"))?),
        (None, None, Domain::Boolean) => Split::is_true(id),
        _ => {
            return Err(perr(
                path,
                format!("test does not fit {} feature `{name}`", spec.kind()),
            ))
        }
    };
    let yes = parse_node(field(obj, "yes", path)?, space, &format!("{path}.yes"))?;
    let no = parse_node(field(obj, "no", path)?, space, &format!("{path}.no"))?;
    Ok(TreeNode::split(split, yes, no))
}

fn parse_linear(root: &Map<String, Json>, space: &FeatureSpace) -> Result<LinearModel> {
    let classes = class_names(root, 2)?;
    let bias = match root.get("bias") {
        Some(b) => as_f64(b, "bias")?,
        None => 0.0,
    };
    let link = match root.get("link").and_then(Json::as_str) {
        None | Some("identity") => Link::Identity,
        Some("logistic") => Link::Logistic,
        Some(other) => return Err(perr("link", format!("unknown link `{other}`"))),
    };
    let mut weights = vec![0.0; space.len()];
    let given = as_object(field(root, "weights", "model")?, "weights")?;
    for (name, w) in given {
        let id = space
            .id_of(name)
            .ok_or_else(|| perr("weights", format!("unknown feature `{name}`")))?;
        weights[id] = as_f64(w, &format!("weights.{name}"))?;
    }
    LinearModel::with_classes(space, weights, bias, link, classes)
}

/// Serialises a model in the canonical document format.
pub fn write_model(model: &Classifier, space: &FeatureSpace) -> String {
    let doc = match model {
        Classifier::Trees(e) => json!({
            "kind": "trees",
            "classes": e.class_names(),
            "base_score": e.base_score(),
            "trees": e.trees().iter().map(|t| json!({
                "class": t.class,
                "root": write_node(&t.to_nested(), space),
            })).collect::<Vec<_>>(),
        }),
        Classifier::Linear(l) => {
            let weights: Map<String, Json> = space
                .features()
                .iter()
                .map(|f| (f.name.clone(), json!(l.weights()[f.id])))
                .collect();
            json!({
                "kind": "linear",
                "classes": l.class_names(),
                "bias": l.bias(),
                "link": match l.link() { Link::Identity => "identity", Link::Logistic => "logistic" },
                "weights": weights,
            })
        }
    };
    serde_json::to_string_pretty(&doc).expect("model serialises") + "\n"
}

fn write_node(node: &TreeNode, space: &FeatureSpace) -> Json {
    match node {
        TreeNode::Leaf(w) => json!({ "leaf": w }),
        TreeNode::Split { split, yes, no } => {
            let spec = space.feature(split.feature);
            let mut obj = Map::new();
            obj.insert("feature".into(), json!(spec.name));
            match &split.test {
                Test::In(values) => {
                    let Domain::Categorical(names) = &spec.domain else {
                        unreachable!("validated ensemble")
                    };
                    let names: Vec<&str> = values.iter().map(|&v| names[v].as_str()).collect();
                    obj.insert("in".into(), json!(names));
                }
                Test::Le(t) => {
                    obj.insert("le".into(), json!(t));
                }
                Test::IsTrue => {}
            }
            obj.insert("yes".into(), write_node(yes, space));
            obj.insert("no".into(), write_node(no, space));
            Json::Object(obj)
        }
    }
}
