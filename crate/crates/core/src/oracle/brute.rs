//! Exhaustive reference decision procedure, used as a test oracle.
//!
//! It walks the raw model (not the compiled boxes of the branch-and-bound
//! oracle) over a grid with one point per threshold cell: for cuts
//! `t₁ < … < t_r` inside `[lo, hi)` the points are `lo, t₂, …, t_r, hi`, each the
//! closed end of its cell. Linear models are checked at the domain corners.

use std::ops::ControlFlow;

use super::Sufficiency;
use crate::error::{Error, Result};
use crate::features::FeatureSet;
use crate::model::{Classifier, Domain, FeatureSpace, Instance, Node, Test, Value};

/// Largest grid the brute-force oracle will enumerate.
pub const GRID_LIMIT: u128 = 10_000_000;

/// Candidate values of every feature.
pub fn grid_axes(model: &Classifier, space: &FeatureSpace) -> Vec<Vec<Value>> {
    let mut cuts: Vec<Vec<f64>> = vec![Vec::new(); space.len()];
    if let Classifier::Trees(t) = model {
        for tree in t.trees() {
            for node in tree.nodes() {
                if let Node::Split { split, .. } = node {
                    if let Test::Le(x) = split.test {
                        cuts[split.feature].push(x);
                    }
                }
            }
        }
    }
    let corners_only = matches!(model, Classifier::Linear(_));
    space
        .features()
        .iter()
        .zip(cuts)
        .map(|(spec, mut ts)| match &spec.domain {
            Domain::Categorical(values) => (0..values.len()).map(Value::Category).collect(),
            Domain::Boolean => vec![Value::Bool(false), Value::Bool(true)],
            Domain::Ordinal { lo, hi } => {
                if corners_only {
                    return vec![Value::Real(*lo), Value::Real(*hi)];
                }
                ts.retain(|t| lo <= t && t < hi);
                ts.sort_by(f64::total_cmp);
                ts.dedup();
                let mut pts = vec![*lo];
                pts.extend(ts.iter().skip(1).copied());
                if !ts.is_empty() {
                    pts.push(*hi);
                }
                pts.dedup();
                pts.into_iter().map(Value::Real).collect()
            }
        })
        .collect()
}

/// Number of grid points with the features of `fixed` pinned.
pub fn grid_size(axes: &[Vec<Value>], fixed: &FeatureSet) -> u128 {
    axes.iter()
        .enumerate()
        .filter(|(i, _)| !fixed.contains(*i))
        .map(|(_, a)| a.len() as u128)
        .fold(1u128, |acc, n| acc.saturating_mul(n))
}

/// Visits every grid point that agrees with `v` on `fixed`.
pub fn for_each_point<F>(
    axes: &[Vec<Value>],
    v: &Instance,
    fixed: &FeatureSet,
    mut visit: F,
) -> Result<Option<Instance>>
where
    F: FnMut(&Instance) -> ControlFlow<()>,
{
    let size = grid_size(axes, fixed);
    if size > GRID_LIMIT {
        return Err(Error::Capacity {
            what: "brute-force grid".into(),
            size,
            limit: GRID_LIMIT,
        });
    }
    let free: Vec<usize> = (0..axes.len()).filter(|i| !fixed.contains(*i)).collect();
    let mut point = v.clone();
    point.label = None;
    let mut digits = vec![0usize; free.len()];
    for (&f, _) in free.iter().zip(&digits) {
        point.values[f] = axes[f][0];
    }
    loop {
        if visit(&point).is_break() {
            return Ok(Some(point));
        }
        // Odometer increment over the free features.
        let mut k = 0;
        loop {
            if k == free.len() {
                return Ok(None);
            }
            let f = free[k];
            digits[k] += 1;
            if digits[k] < axes[f].len() {
                point.values[f] = axes[f][digits[k]];
                break;
            }
            digits[k] = 0;
            point.values[f] = axes[f][0];
            k += 1;
        }
    }
}

fn class_of(model: &Classifier, point: &Instance) -> usize {
    match model {
        Classifier::Trees(t) => crate::model::predict_trees_unchecked(t, point).class_id,
        Classifier::Linear(l) => usize::from(l.score(point) >= 0.0),
    }
}

/// Decides sufficiency of `fixed` by exhaustive enumeration.
pub fn brute_force_decide(
    model: &Classifier,
    space: &FeatureSpace,
    v: &Instance,
    c: usize,
    fixed: &FeatureSet,
) -> Result<Sufficiency> {
    let actual = model.evaluate(space, v)?.class_id;
    if actual != c {
        return Err(Error::Contract(format!(
            "class {c} is not the prediction ({actual}) for this instance"
        )));
    }
    let axes = grid_axes(model, space);
    let found = for_each_point(&axes, v, fixed, |x| {
        if class_of(model, x) != c {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(match found {
        Some(w) => Sufficiency::Insufficient(w),
        None => Sufficiency::Sufficient,
    })
}

/// Brute-force sufficiency table over all `2^m` subsets, indexed by bit mask.
///
/// Subsets are visited by increasing cardinality; a subset containing a
/// sufficient subset is sufficient without enumeration (more fixed features
/// admit fewer completions).
pub fn sufficiency_table(
    model: &Classifier,
    space: &FeatureSpace,
    v: &Instance,
    c: usize,
) -> Result<Vec<bool>> {
    let m = space.len();
    if m > 20 {
        return Err(Error::Capacity {
            what: "subset scan".into(),
            size: 1u128 << m.min(127),
            limit: 1 << 20,
        });
    }
    let actual = model.evaluate(space, v)?.class_id;
    if actual != c {
        return Err(Error::Contract(format!(
            "class {c} is not the prediction ({actual}) for this instance"
        )));
    }
    let axes = grid_axes(model, space);
    let size = grid_size(&axes, &FeatureSet::empty(m));
    if size > GRID_LIMIT {
        return Err(Error::Capacity {
            what: "brute-force grid".into(),
            size,
            limit: GRID_LIMIT,
        });
    }
    let mut masks: Vec<u32> = (0..(1u32 << m)).collect();
    masks.sort_by_key(|x| x.count_ones());
    let mut table = vec![false; 1 << m];
    for mask in masks {
        let inherited = (0..m).any(|i| mask & (1 << i) != 0 && table[(mask & !(1 << i)) as usize]);
        table[mask as usize] = inherited || {
            let fixed = FeatureSet::from_ids(m, (0..m).filter(|i| mask & (1 << i) != 0));
            for_each_point(&axes, v, &fixed, |x| {
                if class_of(model, x) != c {
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            })?
            .is_none()
        };
    }
    Ok(table)
}
