//! Feature spaces, instances and classifiers.

mod linear;
mod space;
mod tree;

pub use linear::{Link, LinearModel};
pub use space::{
    validate_instance, Domain, FeatureKind, FeatureSpace, FeatureSpec, Grid, Instance, Value,
    Violation,
};
pub use tree::{Node, Split, Test, Tree, TreeEnsemble, TreeNode};

use crate::error::Result;

/// Predicted class plus the scores it was derived from.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub class_id: usize,
    /// Per-class margins, or the single score `s` for single-score binary
    /// models (tree ensembles in single-score mode and linear models).
    pub margin: Vec<f64>,
}

/// A classifier the engine can explain.
#[derive(Debug, Clone, PartialEq)]
pub enum Classifier {
    Trees(TreeEnsemble),
    Linear(LinearModel),
}

impl Classifier {
    pub fn class_names(&self) -> &[String] {
        match self {
            Classifier::Trees(t) => t.class_names(),
            Classifier::Linear(l) => l.class_names(),
        }
    }

    pub fn evaluate(&self, space: &FeatureSpace, point: &Instance) -> Result<Prediction> {
        match self {
            Classifier::Trees(t) => evaluate_trees(t, space, point),
            Classifier::Linear(l) => evaluate_linear(l, space, point),
        }
    }
}

impl From<TreeEnsemble> for Classifier {
    fn from(t: TreeEnsemble) -> Self {
        Classifier::Trees(t)
    }
}

impl From<LinearModel> for Classifier {
    fn from(l: LinearModel) -> Self {
        Classifier::Linear(l)
    }
}

pub fn evaluate_trees(
    model: &TreeEnsemble,
    space: &FeatureSpace,
    point: &Instance,
) -> Result<Prediction> {
    space.check(point)?;
    Ok(predict_trees_unchecked(model, point))
}

/// Evaluation without the domain check, for points known to be valid.
pub(crate) fn predict_trees_unchecked(model: &TreeEnsemble, point: &Instance) -> Prediction {
    let m = model.margins(point);
    if model.is_single_score() {
        let s = m[1] - m[0];
        Prediction {
            class_id: usize::from(s >= 0.0),
            margin: vec![s],
        }
    } else {
        Prediction {
            class_id: argmax_lowest(&m),
            margin: m,
        }
    }
}

pub fn evaluate_linear(
    model: &LinearModel,
    space: &FeatureSpace,
    point: &Instance,
) -> Result<Prediction> {
    space.check(point)?;
    let s = model.score(point);
    Ok(Prediction {
        class_id: usize::from(s >= 0.0),
        margin: vec![s],
    })
}

fn argmax_lowest(m: &[f64]) -> usize {
    let mut best = 0;
    for (c, &v) in m.iter().enumerate().skip(1) {
        if v > m[best] {
            best = c;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn adult_example_score() {
        let space = fixtures::adult_space();
        let model = fixtures::adult_ensemble();
        let v = fixtures::adult_instance();
        let p = evaluate_trees(&model, &space, &v).unwrap();
        assert!((p.margin[0] - (-0.4073)).abs() < 1e-9);
        assert_eq!(p.class_id, 0);
        assert_eq!(model.class_names()[p.class_id], "<50k");
    }

    #[test]
    fn zero_leaves_give_class_one() {
        let space = fixtures::boolean_space(2);
        let trees = (0..3)
            .map(|_| Tree::new(1, TreeNode::split(Split::is_true(0), TreeNode::leaf(0.0), TreeNode::leaf(0.0))))
            .collect();
        let model =
            TreeEnsemble::new(&space, vec!["0".into(), "1".into()], vec![0.0, 0.0], trees).unwrap();
        let p = evaluate_trees(&model, &space, &Instance::new(vec![Value::Bool(true); 2])).unwrap();
        assert_eq!(p.margin, vec![0.0]);
        assert_eq!(p.class_id, 1);
    }

    #[test]
    fn multiclass_ties_go_to_lowest_class() {
        let space = fixtures::boolean_space(1);
        let trees = vec![
            Tree::new(1, TreeNode::leaf(0.5)),
            Tree::new(2, TreeNode::leaf(0.5)),
        ];
        let names = vec!["a".into(), "b".into(), "c".into()];
        let model = TreeEnsemble::new(&space, names, vec![0.0; 3], trees).unwrap();
        let p = evaluate_trees(&model, &space, &Instance::new(vec![Value::Bool(false)])).unwrap();
        assert_eq!(p.class_id, 1);
    }

    #[test]
    fn domain_violation_names_feature() {
        let space = fixtures::adult_space();
        let model = fixtures::adult_ensemble();
        let mut v = fixtures::adult_instance();
        let h = space.id_of("Hours/w").unwrap();
        v.values[h] = Value::Real(-5.0);
        let err = evaluate_trees(&model, &space, &v).unwrap_err();
        assert!(err.to_string().contains("Hours/w"), "{err}");
    }

    #[test]
    fn validate_reports_violations() {
        let space = fixtures::adult_space();
        let v = fixtures::adult_instance();
        assert!(validate_instance(&space, &v).is_empty());

        let mut bad = v.clone();
        bad.values[space.id_of("Hours/w").unwrap()] = Value::Real(-5.0);
        let found = validate_instance(&space, &bad);
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].feature.as_deref(), Some("Hours/w"));

        let mut bad = v.clone();
        bad.values[space.id_of("Status").unwrap()] = Value::Category(17);
        let found = validate_instance(&space, &bad);
        assert_eq!(found.len(), 1);
        assert!(found[0].message.contains("17"));

        // Text parsing names the offending value.
        let err = space.parse_value(space.id_of("Status").unwrap(), "Widowed").unwrap_err();
        assert!(err.to_string().contains("Widowed"));
    }

    #[test]
    fn split_kind_must_match_feature() {
        let space = fixtures::adult_space();
        let edu = space.id_of("Education").unwrap();
        let tree = Tree::new(1, TreeNode::split(Split::le(edu, 1.0), TreeNode::leaf(0.0), TreeNode::leaf(1.0)));
        let err = TreeEnsemble::new(&space, vec!["a".into(), "b".into()], vec![0.0; 2], vec![tree]);
        assert!(err.is_err());
    }

    #[test]
    fn linear_rejects_categorical() {
        let space = fixtures::adult_space();
        let err = LinearModel::new(&space, vec![0.0; space.len()], 0.0, Link::Logistic).unwrap_err();
        assert!(matches!(err, crate::Error::Capability(_)));
    }
}
