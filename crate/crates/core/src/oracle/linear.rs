//! Closed-form entailment for monotone linear models: the score is monotone
//! in every feature, so the worst completion sets each free feature to the
//! domain endpoint that pushes the score towards the other class.

use super::{Certificate, Entailment};
use crate::error::Result;
use crate::features::FeatureSet;
use crate::model::{evaluate_linear, Domain, FeatureSpace, Instance, LinearModel, Value};

#[derive(Debug, Clone)]
pub struct LinearOracle {
    model: LinearModel,
    /// `(lo, hi)` endpoints as values of the right kind.
    ends: Vec<(Value, Value)>,
    instance: Instance,
    class: usize,
}

impl LinearOracle {
    pub fn new(model: &LinearModel, space: &FeatureSpace, instance: &Instance) -> Result<Self> {
        let class = evaluate_linear(model, space, instance)?.class_id;
        let ends = space
            .features()
            .iter()
            .map(|f| match f.domain {
                Domain::Ordinal { lo, hi } => (Value::Real(lo), Value::Real(hi)),
                Domain::Boolean => (Value::Bool(false), Value::Bool(true)),
                Domain::Categorical(_) => unreachable!("rejected by LinearModel::new"),
            })
            .collect();
        Ok(LinearOracle {
            model: model.clone(),
            ends,
            instance: instance.clone(),
            class,
        })
    }

    /// The completion of `fixed` that moves the score furthest from the
    /// predicted class.
    pub fn worst_case(&self, fixed: &FeatureSet) -> Instance {
        let lower = self.class == 1;
        let values = self
            .model
            .weights()
            .iter()
            .enumerate()
            .map(|(i, &w)| {
                if fixed.contains(i) || w == 0.0 {
                    self.instance.values[i]
                } else {
                    let (lo, hi) = self.ends[i];
                    if (w > 0.0) == lower {
                        lo
                    } else {
                        hi
                    }
                }
            })
            .collect();
        Instance::new(values)
    }
}

impl Entailment for LinearOracle {
    fn feature_count(&self) -> usize {
        self.ends.len()
    }

    fn instance(&self) -> &Instance {
        &self.instance
    }

    fn class(&self) -> usize {
        self.class
    }

    fn class_names(&self) -> &[String] {
        self.model.class_names()
    }

    fn counterexample(&self, fixed: &FeatureSet) -> Option<Instance> {
        let x = self.worst_case(fixed);
        let s = self.model.score(&x);
        (usize::from(s >= 0.0) != self.class).then_some(x)
    }

    fn certificate(&self, fixed: &FeatureSet) -> Certificate {
        let s = self.model.score(&self.worst_case(fixed));
        Certificate {
            label: if self.class == 1 { "min score" } else { "max score" }.into(),
            value: s,
        }
    }
}
