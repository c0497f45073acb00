//! Small reference models used by tests, examples and the documentation.
//!
//! The adult fixture reproduces a three-tree boosted model over a simplified
//! adult census dataset. Categorical domains hold the values tested by the
//! trees, the instance's own value and one extra `Other` value; `Hours/w` is
//! ordinal on `[0, 99]`.

use crate::model::{
    Domain, FeatureSpace, FeatureSpec, Instance, Split, Tree, TreeEnsemble, TreeNode, Value,
};

fn categorical(id: usize, name: &str, values: &[&str]) -> FeatureSpec {
    FeatureSpec {
        id,
        name: name.to_string(),
        domain: Domain::Categorical(values.iter().map(|s| s.to_string()).collect()),
    }
}

/// Education, Status, Occupation, Relationship, Sex, Hours/w (ids 0..=5).
pub fn adult_space() -> FeatureSpace {
    FeatureSpace::new(vec![
        categorical(0, "Education", &["Bachelors", "Dropout", "Doctorate", "Other"]),
        categorical(1, "Status", &["Married", "Never-Married", "Separated", "Other"]),
        categorical(2, "Occupation", &["Sales", "Other"]),
        categorical(3, "Relationship", &["Not-in-family", "Own-child", "Other"]),
        categorical(4, "Sex", &["Male", "Other"]),
        FeatureSpec {
            id: 5,
            name: "Hours/w".to_string(),
            domain: Domain::Ordinal { lo: 0.0, hi: 99.0 },
        },
    ])
    .expect("adult fixture space is valid")
}

/// The three-tree ensemble; class 0 is `<50k`, class 1 is `>=50k`.
pub fn adult_ensemble() -> TreeEnsemble {
    let space = adult_space();
    let id = |name: &str| space.id_of(name).unwrap();
    let is = |feature: &str, value: &str| {
        let f = id(feature);
        Split::member(f, vec![space.feature(f).category_index(value).unwrap()])
    };
    let leaf = TreeNode::leaf;

    let t1 = TreeNode::split(
        is("Status", "Married"),
        TreeNode::split(is("Education", "Dropout"), leaf(-0.1569), leaf(0.0770)),
        TreeNode::split(is("Relationship", "Not-in-family"), leaf(-0.1089), leaf(-0.3167)),
    );
    let t2 = TreeNode::split(
        Split::le(id("Hours/w"), 40.0),
        TreeNode::split(is("Status", "Married"), leaf(-0.0200), leaf(-0.2404)),
        TreeNode::split(is("Status", "Never-Married"), leaf(-0.1245), leaf(0.0486)),
    );
    // 40 < Hours/w <= 45 is expressed as two threshold tests.
    let in_40_45 = TreeNode::split(
        Split::le(id("Hours/w"), 40.0),
        leaf(0.3890),
        TreeNode::split(Split::le(id("Hours/w"), 45.0), leaf(0.0605), leaf(0.3890)),
    );
    let t3 = TreeNode::split(
        is("Education", "Doctorate"),
        in_40_45,
        TreeNode::split(is("Relationship", "Own-child"), leaf(-0.2892), leaf(-0.0580)),
    );

    TreeEnsemble::new(
        &space,
        vec!["<50k".to_string(), ">=50k".to_string()],
        vec![0.0, 0.0],
        vec![Tree::new(1, t1), Tree::new(1, t2), Tree::new(1, t3)],
    )
    .expect("adult fixture ensemble is valid")
}

/// Education=Bachelors, Status=Separated, Occupation=Sales,
/// Relationship=Not-in-family, Sex=Male, Hours/w=40.
pub fn adult_instance() -> Instance {
    Instance::new(vec![
        Value::Category(0),
        Value::Category(2),
        Value::Category(0),
        Value::Category(0),
        Value::Category(0),
        Value::Real(40.0),
    ])
}

/// `n` boolean features named `x1..xn`.
pub fn boolean_space(n: usize) -> FeatureSpace {
    FeatureSpace::new(
        (0..n)
            .map(|id| FeatureSpec {
                id,
                name: format!("x{}", id + 1),
                domain: Domain::Boolean,
            })
            .collect(),
    )
    .expect("boolean space is valid")
}

fn binary(space: &FeatureSpace, root: TreeNode) -> TreeEnsemble {
    TreeEnsemble::new(
        space,
        vec!["0".to_string(), "1".to_string()],
        vec![0.0, 0.0],
        vec![Tree::new(1, root)],
    )
    .expect("fixture is valid")
}

/// `x1 ∧ x2` as a single tree (score +1 when true, −1 otherwise).
pub fn conjunction() -> (FeatureSpace, TreeEnsemble) {
    let space = boolean_space(2);
    let root = TreeNode::split(
        Split::is_true(0),
        TreeNode::split(Split::is_true(1), TreeNode::leaf(1.0), TreeNode::leaf(-1.0)),
        TreeNode::leaf(-1.0),
    );
    let model = binary(&space, root);
    (space, model)
}

/// `x1 ∨ x2` as a single tree.
pub fn disjunction() -> (FeatureSpace, TreeEnsemble) {
    let space = boolean_space(2);
    let root = TreeNode::split(
        Split::is_true(0),
        TreeNode::leaf(1.0),
        TreeNode::split(Split::is_true(1), TreeNode::leaf(1.0), TreeNode::leaf(-1.0)),
    );
    let model = binary(&space, root);
    (space, model)
}

/// A model over `n` booleans whose prediction is class 1 everywhere.
pub fn constant(n: usize) -> (FeatureSpace, TreeEnsemble) {
    let space = boolean_space(n);
    let root = TreeNode::split(Split::is_true(0), TreeNode::leaf(0.5), TreeNode::leaf(0.25));
    let model = binary(&space, root);
    (space, model)
}

pub fn all_true(n: usize) -> Instance {
    Instance::new(vec![Value::Bool(true); n])
}
