//! Threshold-cell discretisation of a feature space with respect to one
//! tree ensemble.
//!
//! Every ordinal domain `[lo, hi]` is cut by the distinct split thresholds
//! `t₁ < … < t_r` that fall inside `[lo, hi)`, giving the cells
//! `[lo, t₁], (t₁, t₂], …, (t_r, hi]`. The ensemble is constant on each cell, so a
//! feature's reachable behaviour is captured by a set of cell indices.
//! Categorical features have one cell per value and booleans two (false, true).

use fixedbitset::FixedBitSet;

use crate::model::{Domain, FeatureSpace, Node, Test, TreeEnsemble, Value};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum FeatureCells {
    Categorical { count: usize },
    Boolean,
    Ordinal { lo: f64, hi: f64, cuts: Vec<f64> },
}

impl FeatureCells {
    pub fn count(&self) -> usize {
        match self {
            FeatureCells::Categorical { count } => *count,
            FeatureCells::Boolean => 2,
            FeatureCells::Ordinal { cuts, .. } => cuts.len() + 1,
        }
    }

    pub fn cell_of(&self, value: &Value) -> usize {
        match (self, value) {
            (FeatureCells::Categorical { .. }, Value::Category(k)) => *k,
            (FeatureCells::Boolean, Value::Bool(b)) => usize::from(*b),
            (FeatureCells::Ordinal { cuts, .. }, Value::Real(x)) => cuts.partition_point(|t| t < x),
            _ => unreachable!("value kind checked against the feature space"),
        }
    }

    /// A concrete value inside `cell`.
    pub fn representative(&self, cell: usize) -> Value {
        match self {
            FeatureCells::Categorical { .. } => Value::Category(cell),
            FeatureCells::Boolean => Value::Bool(cell == 1),
            FeatureCells::Ordinal { lo, hi, cuts } => {
                let r = cuts.len();
                let x = if r == 0 {
                    lo + (hi - lo) / 2.0
                } else if cell == 0 {
                    (cuts[0] - 0.5).max(*lo)
                } else if cell == r {
                    let x = (cuts[r - 1] + 0.5).min(*hi);
                    if x > cuts[r - 1] {
                        x
                    } else {
                        *hi
                    }
                } else {
                    let (a, b) = (cuts[cell - 1], cuts[cell]);
                    let mid = a + (b - a) / 2.0;
                    if mid > a && mid <= b {
                        mid
                    } else {
                        b
                    }
                };
                Value::Real(x)
            }
        }
    }

    /// Cells on which `test` holds.
    pub fn yes_cells(&self, test: &Test) -> FixedBitSet {
        let mut set = FixedBitSet::with_capacity(self.count());
        match (self, test) {
            (FeatureCells::Categorical { .. }, Test::In(values)) => {
                for &v in values {
                    set.insert(v);
                }
            }
            (FeatureCells::Boolean, Test::IsTrue) => set.insert(1),
            (FeatureCells::Ordinal { lo, hi, cuts }, Test::Le(t)) => {
                if t >= hi {
                    set.insert_range(..);
                } else if t >= lo {
                    // `t` is one of the cuts: cells 0..=position hold.
                    let pos = cuts.partition_point(|c| c < t);
                    debug_assert_eq!(cuts[pos], *t);
                    set.insert_range(..pos + 1);
                }
            }
            _ => unreachable!("split kind checked against the feature space"),
        }
        set
    }
}

pub(crate) fn discretise(model: &TreeEnsemble, space: &FeatureSpace) -> Vec<FeatureCells> {
    let mut cuts: Vec<Vec<f64>> = vec![Vec::new(); space.len()];
    for tree in model.trees() {
        for node in tree.nodes() {
            if let Node::Split { split, .. } = node {
                if let Test::Le(t) = split.test {
                    cuts[split.feature].push(t);
                }
            }
        }
    }
    space
        .features()
        .iter()
        .zip(cuts)
        .map(|(spec, mut ts)| match &spec.domain {
            Domain::Categorical(values) => FeatureCells::Categorical {
                count: values.len(),
            },
            Domain::Boolean => FeatureCells::Boolean,
            Domain::Ordinal { lo, hi } => {
                ts.retain(|t| lo <= t && t < hi);
                ts.sort_by(f64::total_cmp);
                ts.dedup();
                FeatureCells::Ordinal {
                    lo: *lo,
                    hi: *hi,
                    cuts: ts,
                }
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn adult_hours_cells() {
        let cells = discretise(&fixtures::adult_ensemble(), &fixtures::adult_space());
        let hours = &cells[5];
        assert_eq!(hours.count(), 3);
        assert_eq!(hours.cell_of(&Value::Real(40.0)), 0);
        assert_eq!(hours.cell_of(&Value::Real(40.5)), 1);
        assert_eq!(hours.cell_of(&Value::Real(45.0)), 1);
        assert_eq!(hours.cell_of(&Value::Real(45.01)), 2);
        for c in 0..3 {
            assert_eq!(hours.cell_of(&hours.representative(c)), c);
        }
        let yes = hours.yes_cells(&Test::Le(40.0));
        assert_eq!(yes.ones().collect::<Vec<_>>(), vec![0]);
        let yes = hours.yes_cells(&Test::Le(45.0));
        assert_eq!(yes.ones().collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn thresholds_outside_domain() {
        let cells = FeatureCells::Ordinal {
            lo: 0.0,
            hi: 1.0,
            cuts: vec![],
        };
        assert_eq!(cells.yes_cells(&Test::Le(-1.0)).count_ones(..), 0);
        assert_eq!(cells.yes_cells(&Test::Le(1.0)).count_ones(..), 1);
        let cut_at_lo = FeatureCells::Ordinal {
            lo: 0.0,
            hi: 1.0,
            cuts: vec![0.0],
        };
        assert_eq!(cut_at_lo.representative(0), Value::Real(0.0));
        assert_eq!(cut_at_lo.cell_of(&cut_at_lo.representative(1)), 1);
    }
}
