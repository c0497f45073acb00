use super::space::{Domain, FeatureKind, FeatureSpace, Instance, Value};
use crate::error::{Error, Result};

/// The predicate tested at an internal node.
#[derive(Debug, Clone, PartialEq)]
pub enum Test {
    /// `feature ∈ {values}` for a categorical feature (value indices, sorted).
    In(Vec<usize>),
    /// `feature ≤ threshold` for an ordinal feature.
    Le(f64),
    /// `feature = 1` for a boolean feature.
    IsTrue,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    pub feature: usize,
    pub test: Test,
}

impl Split {
    pub fn member(feature: usize, mut values: Vec<usize>) -> Self {
        values.sort_unstable();
        values.dedup();
        Split {
            feature,
            test: Test::In(values),
        }
    }

    pub fn le(feature: usize, threshold: f64) -> Self {
        Split {
            feature,
            test: Test::Le(threshold),
        }
    }

    pub fn is_true(feature: usize) -> Self {
        Split {
            feature,
            test: Test::IsTrue,
        }
    }

    /// Whether `value` takes the "yes" branch. `None` on a kind mismatch.
    pub fn holds(&self, value: &Value) -> Option<bool> {
        match (&self.test, value) {
            (Test::In(values), Value::Category(k)) => Some(values.binary_search(k).is_ok()),
            (Test::Le(t), Value::Real(x)) => Some(x <= t),
            (Test::IsTrue, Value::Bool(b)) => Some(*b),
            _ => None,
        }
    }

    fn kind(&self) -> FeatureKind {
        match self.test {
            Test::In(_) => FeatureKind::Categorical,
            Test::Le(_) => FeatureKind::Ordinal,
            Test::IsTrue => FeatureKind::Boolean,
        }
    }
}

/// Arena node. Children always have larger indices than their parent, which
/// makes every tree finite and acyclic by construction.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Leaf(f64),
    Split { split: Split, yes: usize, no: usize },
}

/// Nested form of a tree, convenient for building and for documents.
#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode {
    Leaf(f64),
    Split {
        split: Split,
        yes: Box<TreeNode>,
        no: Box<TreeNode>,
    },
}

impl TreeNode {
    pub fn leaf(weight: f64) -> Self {
        TreeNode::Leaf(weight)
    }

    pub fn split(split: Split, yes: TreeNode, no: TreeNode) -> Self {
        TreeNode::Split {
            split,
            yes: Box::new(yes),
            no: Box::new(no),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tree {
    pub class: usize,
    nodes: Vec<Node>,
}

impl Tree {
    pub fn new(class: usize, root: TreeNode) -> Self {
        let mut nodes = Vec::new();
        flatten(root, &mut nodes);
        Tree { class, nodes }
    }

    /// Builds a tree from arena nodes (root at index 0).
    pub fn from_nodes(class: usize, nodes: Vec<Node>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::Model("tree has no nodes".into()));
        }
        for (i, n) in nodes.iter().enumerate() {
            if let Node::Split { yes, no, .. } = n {
                for &c in [yes, no] {
                    if c <= i || c >= nodes.len() {
                        return Err(Error::Model(format!(
                            "node {i} has child {c}; children must follow their parent"
                        )));
                    }
                }
            }
        }
        Ok(Tree { class, nodes })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn to_nested(&self) -> TreeNode {
        fn go(nodes: &[Node], i: usize) -> TreeNode {
            match &nodes[i] {
                Node::Leaf(w) => TreeNode::Leaf(*w),
                Node::Split { split, yes, no } => {
                    TreeNode::split(split.clone(), go(nodes, *yes), go(nodes, *no))
                }
            }
        }
        go(&self.nodes, 0)
    }

    /// Leaf weight reached by `point`. Assumes a validated point.
    pub fn leaf_value(&self, point: &Instance) -> f64 {
        let mut i = 0;
        loop {
            match &self.nodes[i] {
                Node::Leaf(w) => return *w,
                Node::Split { split, yes, no } => {
                    let go_yes = split
                        .holds(&point.values[split.feature])
                        .expect("point kind checked against the feature space");
                    i = if go_yes { *yes } else { *no };
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn go(nodes: &[Node], i: usize) -> usize {
            match &nodes[i] {
                Node::Leaf(_) => 0,
                Node::Split { yes, no, .. } => 1 + go(nodes, *yes).max(go(nodes, *no)),
            }
        }
        go(&self.nodes, 0)
    }
}

fn flatten(node: TreeNode, out: &mut Vec<Node>) -> usize {
    let at = out.len();
    match node {
        TreeNode::Leaf(w) => out.push(Node::Leaf(w)),
        TreeNode::Split { split, yes, no } => {
            out.push(Node::Leaf(0.0));
            let y = flatten(*yes, out);
            let n = flatten(*no, out);
            out[at] = Node::Split { split, yes: y, no: n };
        }
    }
    at
}

/// A boosted tree ensemble: per-class sums of leaf weights plus a per-class
/// base score.
///
/// With two classes and every tree tagged class 1, the model is read as a
/// single-score binary classifier: `s = m₁ − m₀` and the class is 1 iff
/// `s ≥ 0`. Otherwise the class is the argmax of the per-class margins, ties
/// going to the lowest class id.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeEnsemble {
    class_names: Vec<String>,
    base_score: Vec<f64>,
    trees: Vec<Tree>,
    feature_count: usize,
}

impl TreeEnsemble {
    pub fn new(
        space: &FeatureSpace,
        class_names: Vec<String>,
        base_score: Vec<f64>,
        trees: Vec<Tree>,
    ) -> Result<Self> {
        let k = class_names.len();
        if k < 2 {
            return Err(Error::Model(format!("need at least 2 classes, got {k}")));
        }
        if base_score.len() != k {
            return Err(Error::Model(format!(
                "base_score has {} entries for {k} classes",
                base_score.len()
            )));
        }
        if trees.is_empty() {
            return Err(Error::Model("no trees".into()));
        }
        for (t, tree) in trees.iter().enumerate() {
            if tree.class >= k {
                return Err(Error::Model(format!(
                    "tree {t} belongs to class {} but there are {k} classes",
                    tree.class
                )));
            }
            for node in &tree.nodes {
                match node {
                    Node::Leaf(w) if !w.is_finite() => {
                        return Err(Error::Model(format!("tree {t} has a non-finite leaf")));
                    }
                    Node::Split { split, .. } => check_split(space, t, split)?,
                    _ => {}
                }
            }
            // Re-run the arena checks for trees assembled by hand.
            Tree::from_nodes(tree.class, tree.nodes.clone())?;
        }
        Ok(TreeEnsemble {
            class_names,
            base_score,
            trees,
            feature_count: space.len(),
        })
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn class_count(&self) -> usize {
        self.class_names.len()
    }

    pub fn base_score(&self) -> &[f64] {
        &self.base_score
    }

    pub fn trees(&self) -> &[Tree] {
        &self.trees
    }

    pub fn feature_count(&self) -> usize {
        self.feature_count
    }

    pub fn is_single_score(&self) -> bool {
        self.class_count() == 2 && self.trees.iter().all(|t| t.class == 1)
    }

    /// Per-class margins, accumulated from the base score in tree order.
    pub fn margins(&self, point: &Instance) -> Vec<f64> {
        let mut m = self.base_score.clone();
        for tree in &self.trees {
            m[tree.class] += tree.leaf_value(point);
        }
        m
    }
}

fn check_split(space: &FeatureSpace, tree: usize, split: &Split) -> Result<()> {
    if split.feature >= space.len() {
        return Err(Error::Model(format!(
            "tree {tree} splits on unknown feature id {}",
            split.feature
        )));
    }
    let spec = space.feature(split.feature);
    if spec.kind() != split.kind() {
        return Err(Error::Model(format!(
            "tree {tree} applies a {} test to {} feature `{}`",
            split.kind(),
            spec.kind(),
            spec.name
        )));
    }
    match (&split.test, &spec.domain) {
        (Test::In(values), Domain::Categorical(domain)) => {
            if let Some(bad) = values.iter().find(|&&v| v >= domain.len()) {
                return Err(Error::Model(format!(
                    "tree {tree} tests value index {bad} of `{}`, which has {} values",
                    spec.name,
                    domain.len()
                )));
            }
        }
        (Test::Le(t), _) if !t.is_finite() => {
            return Err(Error::Model(format!(
                "tree {tree} has a non-finite threshold on `{}`",
                spec.name
            )));
        }
        _ => {}
    }
    Ok(())
}
