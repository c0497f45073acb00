//! Entailment oracles: does fixing a set of features to the instance's values
//! force the prediction over the whole feature space?

pub mod brute;
mod cells;
mod linear;
mod trees;

pub use brute::brute_force_decide;
pub use linear::LinearOracle;
pub use trees::{Objective, PartialAssignment, TreeOracle};

use crate::error::{Error, Result};
use crate::features::FeatureSet;
use crate::model::{Classifier, FeatureSpace, Instance, LinearModel, TreeEnsemble};

#[derive(Debug, Clone, PartialEq)]
pub enum Sufficiency {
    Sufficient,
    /// A completion that agrees with the instance on the fixed features and
    /// is classified differently.
    Insufficient(Instance),
}

impl Sufficiency {
    pub fn is_sufficient(&self) -> bool {
        matches!(self, Sufficiency::Sufficient)
    }
}

/// Proven lower and upper bounds of a score expression over a box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreBounds {
    pub lo: f64,
    pub hi: f64,
}

/// The extreme attainable value of the deciding score under a fixed set,
/// e.g. `max score = -0.001` for a negative prediction.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub label: String,
    pub value: f64,
}

/// Decision procedure for one explained instance.
pub trait Entailment: Send + Sync {
    fn feature_count(&self) -> usize;

    fn instance(&self) -> &Instance;

    /// The predicted class of [`Entailment::instance`].
    fn class(&self) -> usize;

    fn class_names(&self) -> &[String];

    /// A completion agreeing with the instance on `fixed` that changes the
    /// class, or `None` if `fixed` is sufficient.
    fn counterexample(&self, fixed: &FeatureSet) -> Option<Instance>;

    fn is_sufficient(&self, fixed: &FeatureSet) -> bool {
        self.counterexample(fixed).is_none()
    }

    /// The extreme deciding score reachable with `fixed` pinned.
    fn certificate(&self, fixed: &FeatureSet) -> Certificate;
}

/// Builds the oracle matching the classifier family.
pub fn oracle_for(
    model: &Classifier,
    space: &FeatureSpace,
    v: &Instance,
) -> Result<Box<dyn Entailment>> {
    Ok(match model {
        Classifier::Trees(t) => Box::new(TreeOracle::new(t, space, v)?),
        Classifier::Linear(l) => Box::new(LinearOracle::new(l, space, v)?),
    })
}

fn expect_class(oracle: &dyn Entailment, c: usize) -> Result<()> {
    if oracle.class() != c {
        return Err(Error::Contract(format!(
            "class {c} is not the prediction ({}) for this instance",
            oracle.class()
        )));
    }
    Ok(())
}

fn check_subset(space: &FeatureSpace, set: &FeatureSet) -> Result<()> {
    match set.iter().find(|&i| i >= space.len()) {
        Some(i) => Err(Error::Contract(format!("feature id {i} out of range"))),
        None => Ok(()),
    }
}

/// Whether fixing `fixed` to `v` entails class `c`.
pub fn decide_sufficiency(
    model: &Classifier,
    space: &FeatureSpace,
    v: &Instance,
    c: usize,
    fixed: &FeatureSet,
) -> Result<Sufficiency> {
    check_subset(space, fixed)?;
    let oracle = oracle_for(model, space, v)?;
    expect_class(oracle.as_ref(), c)?;
    Ok(match oracle.counterexample(fixed) {
        Some(w) => Sufficiency::Insufficient(w),
        None => Sufficiency::Sufficient,
    })
}

/// A completion changing the class while only the features of `freed` vary.
pub fn find_counterexample(
    model: &Classifier,
    space: &FeatureSpace,
    v: &Instance,
    c: usize,
    freed: &FeatureSet,
) -> Result<Option<Instance>> {
    check_subset(space, freed)?;
    let fixed = FeatureSet::from_ids(space.len(), freed.iter()).complement();
    let oracle = oracle_for(model, space, v)?;
    expect_class(oracle.as_ref(), c)?;
    Ok(oracle.counterexample(&fixed))
}

/// Linear-model form of [`decide_sufficiency`].
pub fn decide_sufficiency_linear(
    model: &LinearModel,
    space: &FeatureSpace,
    v: &Instance,
    c: usize,
    fixed: &FeatureSet,
) -> Result<Sufficiency> {
    check_subset(space, fixed)?;
    let oracle = LinearOracle::new(model, space, v)?;
    expect_class(&oracle, c)?;
    Ok(match oracle.counterexample(fixed) {
        Some(w) => Sufficiency::Insufficient(w),
        None => Sufficiency::Sufficient,
    })
}

/// Exact bounds of `objective` with the features of `fixed` pinned to `v`.
pub fn score_bounds(
    model: &TreeEnsemble,
    space: &FeatureSpace,
    v: &Instance,
    fixed: &FeatureSet,
    objective: Objective,
) -> Result<ScoreBounds> {
    let oracle = TreeOracle::new(model, space, v)?;
    oracle.score_bounds(&oracle.assignment(fixed), objective)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::Value;

    fn ids(space: &FeatureSpace, names: &[&str]) -> FeatureSet {
        FeatureSet::from_ids(space.len(), names.iter().map(|n| space.id_of(n).unwrap()))
    }

    #[test]
    fn adult_education_hours_is_sufficient_with_bound() {
        let space = fixtures::adult_space();
        let model = fixtures::adult_ensemble();
        let v = fixtures::adult_instance();
        let s = ids(&space, &["Education", "Hours/w"]);
        let oracle = TreeOracle::new(&model, &space, &v).unwrap();
        assert!(oracle.is_sufficient(&s));
        let b = oracle.score_bounds(&oracle.assignment(&s), Objective::Score).unwrap();
        assert!((b.hi - (-0.0010)).abs() < 1e-9, "{b:?}");
        let cert = oracle.certificate(&s);
        assert_eq!(cert.label, "max score");
        assert!((cert.value - (-0.0010)).abs() < 1e-9);
    }

    #[test]
    fn fully_fixed_is_sufficient_and_bounds_collapse() {
        let space = fixtures::adult_space();
        let model = fixtures::adult_ensemble();
        let v = fixtures::adult_instance();
        let all = FeatureSet::full(space.len());
        let c = Classifier::Trees(model.clone());
        assert!(decide_sufficiency(&c, &space, &v, 0, &all).unwrap().is_sufficient());
        let b = score_bounds(&model, &space, &v, &all, Objective::Score).unwrap();
        assert_eq!(b.lo, b.hi);
        assert!((b.hi + 0.4073).abs() < 1e-9);
    }

    #[test]
    fn education_alone_is_insufficient() {
        let space = fixtures::adult_space();
        let model = Classifier::Trees(fixtures::adult_ensemble());
        let v = fixtures::adult_instance();
        let s = ids(&space, &["Education"]);
        match decide_sufficiency(&model, &space, &v, 0, &s).unwrap() {
            Sufficiency::Insufficient(w) => {
                let p = model.evaluate(&space, &w).unwrap();
                assert_eq!(p.class_id, 1);
                assert!(p.margin[0] > 0.0);
                assert_eq!(w.values[0], v.values[0]);
            }
            Sufficiency::Sufficient => panic!("expected a witness"),
        }
    }

    #[test]
    fn freeing_education_reaches_doctorate() {
        let space = fixtures::adult_space();
        let model = Classifier::Trees(fixtures::adult_ensemble());
        let v = fixtures::adult_instance();
        let w = find_counterexample(&model, &space, &v, 0, &ids(&space, &["Education"]))
            .unwrap()
            .expect("witness");
        assert_eq!(w.values[0], Value::Category(2));
        for i in 1..space.len() {
            assert_eq!(w.values[i], v.values[i]);
        }
        assert_eq!(model.evaluate(&space, &w).unwrap().class_id, 1);
        assert!(find_counterexample(&model, &space, &v, 0, &FeatureSet::empty(6))
            .unwrap()
            .is_none());
    }

    #[test]
    fn conjunction_flip_one_conjunct() {
        let (space, model) = fixtures::conjunction();
        let model = Classifier::Trees(model);
        let v = fixtures::all_true(2);
        let w = find_counterexample(&model, &space, &v, 1, &FeatureSet::from_ids(2, [0]))
            .unwrap()
            .unwrap();
        assert_eq!(w.values, vec![Value::Bool(false), Value::Bool(true)]);
        let r = brute_force_decide(&model, &space, &v, 1, &FeatureSet::from_ids(2, [0])).unwrap();
        assert!(!r.is_sufficient());
        assert!(brute_force_decide(&model, &space, &v, 1, &FeatureSet::full(2))
            .unwrap()
            .is_sufficient());
    }

    #[test]
    fn single_boolean_split_bounds() {
        let (space, model) = fixtures::constant(1);
        let v = fixtures::all_true(1);
        let b = score_bounds(&model, &space, &v, &FeatureSet::empty(1), Objective::Score).unwrap();
        assert_eq!((b.lo, b.hi), (0.25, 0.5));
    }

    #[test]
    fn wrong_class_is_a_contract_error() {
        let space = fixtures::adult_space();
        let model = Classifier::Trees(fixtures::adult_ensemble());
        let v = fixtures::adult_instance();
        let err = decide_sufficiency(&model, &space, &v, 1, &FeatureSet::empty(6)).unwrap_err();
        assert!(matches!(err, Error::Contract(_)));
    }

    #[test]
    fn linear_closed_form() {
        let space = FeatureSpace::new(
            (0..2)
                .map(|id| crate::model::FeatureSpec {
                    id,
                    name: format!("x{}", id + 1),
                    domain: crate::model::Domain::Ordinal { lo: 0.0, hi: 1.0 },
                })
                .collect(),
        )
        .unwrap();
        let model = LinearModel::new(&space, vec![1.0, 1.0], -1.5, crate::model::Link::Logistic).unwrap();
        let v = Instance::new(vec![Value::Real(1.0), Value::Real(1.0)]);
        match decide_sufficiency_linear(&model, &space, &v, 1, &FeatureSet::from_ids(2, [0])).unwrap() {
            Sufficiency::Insufficient(w) => {
                assert_eq!(w.values, vec![Value::Real(1.0), Value::Real(0.0)]);
                assert_eq!(model.score(&w), -0.5);
            }
            Sufficiency::Sufficient => panic!("expected witness"),
        }
        assert!(decide_sufficiency_linear(&model, &space, &v, 1, &FeatureSet::full(2))
            .unwrap()
            .is_sufficient());
    }

    #[test]
    fn brute_force_capacity_error() {
        let space = fixtures::boolean_space(30);
        let trees = vec![crate::model::Tree::new(
            1,
            crate::model::TreeNode::split(
                crate::model::Split::is_true(0),
                crate::model::TreeNode::leaf(1.0),
                crate::model::TreeNode::leaf(-1.0),
            ),
        )];
        let model = Classifier::Trees(
            TreeEnsemble::new(&space, vec!["0".into(), "1".into()], vec![0.0; 2], trees).unwrap(),
        );
        let v = fixtures::all_true(30);
        let err = brute_force_decide(&model, &space, &v, 1, &FeatureSet::empty(30)).unwrap_err();
        assert!(matches!(err, Error::Capacity { size, .. } if size == 1 << 30));
    }
}
