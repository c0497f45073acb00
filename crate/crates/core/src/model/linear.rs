use super::space::{FeatureKind, FeatureSpace, Instance};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Link {
    Identity,
    Logistic,
}

/// `s = bias + Σ wᵢ·xᵢ` over ordinal and boolean features (booleans as 0/1).
/// Class 1 iff `s ≥ 0`; the link only affects probability rendering.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    weights: Vec<f64>,
    bias: f64,
    link: Link,
    class_names: Vec<String>,
}

impl LinearModel {
    pub fn new(space: &FeatureSpace, weights: Vec<f64>, bias: f64, link: Link) -> Result<Self> {
        Self::with_classes(space, weights, bias, link, vec!["0".into(), "1".into()])
    }

    pub fn with_classes(
        space: &FeatureSpace,
        weights: Vec<f64>,
        bias: f64,
        link: Link,
        class_names: Vec<String>,
    ) -> Result<Self> {
        if weights.len() != space.len() {
            return Err(Error::Model(format!(
                "linear model has {} weights for {} features",
                weights.len(),
                space.len()
            )));
        }
        if class_names.len() != 2 {
            return Err(Error::Model("linear models are binary".into()));
        }
        if let Some(f) = space
            .features()
            .iter()
            .find(|f| f.kind() == FeatureKind::Categorical)
        {
            return Err(Error::Capability(format!(
                "linear models need ordinal or boolean features; `{}` is categorical",
                f.name
            )));
        }
        if !bias.is_finite() || weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::Model("linear model has non-finite coefficients".into()));
        }
        Ok(LinearModel {
            weights,
            bias,
            link,
            class_names,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    pub fn link(&self) -> Link {
        self.link
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn score(&self, point: &Instance) -> f64 {
        let mut s = self.bias;
        for (w, v) in self.weights.iter().zip(&point.values) {
            s += w * v.as_real().expect("linear model over numeric features");
        }
        s
    }

    pub fn probability(&self, score: f64) -> f64 {
        match self.link {
            Link::Identity => score,
            Link::Logistic => 1.0 / (1.0 + (-score).exp()),
        }
    }
}
