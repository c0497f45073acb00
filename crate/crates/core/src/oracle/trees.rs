//! Exact entailment for tree ensembles by best-first branch and bound over
//! threshold-cell boxes.
//!
//! A box assigns every feature a non-empty set of cells. For a box, each tree
//! can reach a set of leaves; summing per-tree minima and maxima (in tree order,
//! from the base score) bounds every class margin over all completions. Because
//! rounded addition and subtraction are monotone, these float bounds are valid
//! for the float scores that evaluation computes, so decisions need no epsilon.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use fixedbitset::FixedBitSet;

use super::cells::{discretise, FeatureCells};
use super::{Certificate, Entailment, ScoreBounds};
use crate::error::{Error, Result};
use crate::features::FeatureSet;
use crate::model::{predict_trees_unchecked, FeatureSpace, Instance, Node, TreeEnsemble, Value};

#[derive(Debug, Clone)]
enum CNode {
    Leaf(f64),
    Split {
        feature: usize,
        yes_cells: FixedBitSet,
        yes: usize,
        no: usize,
    },
}

#[derive(Debug, Clone)]
struct CTree {
    nodes: Vec<CNode>,
}

/// What one tree can still do inside a box.
#[derive(Debug, Clone, Copy)]
struct Reach {
    min: f64,
    max: f64,
    /// Topmost reachable split whose outcome is not yet decided by the box.
    open: Option<(usize, usize)>,
}

impl CTree {
    fn reach(&self, domains: &[FixedBitSet]) -> Reach {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        let mut open = None;
        let mut stack = vec![0usize];
        while let Some(i) = stack.pop() {
            match &self.nodes[i] {
                CNode::Leaf(w) => {
                    min = min.min(*w);
                    max = max.max(*w);
                }
                CNode::Split {
                    feature,
                    yes_cells,
                    yes,
                    no,
                } => {
                    let dom = &domains[*feature];
                    let can_yes = !dom.is_disjoint(yes_cells);
                    let can_no = dom.difference(yes_cells).next().is_some();
                    if can_yes && can_no && open.is_none() {
                        open = Some((*feature, i));
                    }
                    if can_no {
                        stack.push(*no);
                    }
                    if can_yes {
                        stack.push(*yes);
                    }
                }
            }
        }
        Reach { min, max, open }
    }

    fn yes_cells(&self, node: usize) -> &FixedBitSet {
        match &self.nodes[node] {
            CNode::Split { yes_cells, .. } => yes_cells,
            CNode::Leaf(_) => unreachable!("open nodes are splits"),
        }
    }
}

/// A class-score expression over which bounds are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// The single score `s = m₁ − m₀` of a single-score binary model.
    Score,
    /// The margin `m_class` of one class.
    Margin(usize),
    /// `m_challenger − m_incumbent`.
    Gap { challenger: usize, incumbent: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Form {
    plus: usize,
    minus: Option<usize>,
}

/// A box: the current cell sets of every feature, together with the set of
/// features fixed to the instance.
#[derive(Debug, Clone)]
pub struct PartialAssignment {
    fixed: FeatureSet,
    domains: Vec<FixedBitSet>,
}

impl PartialAssignment {
    pub fn fixed(&self) -> &FeatureSet {
        &self.fixed
    }

    /// Cell indices currently allowed for `feature`.
    pub fn cells(&self, feature: usize) -> Vec<usize> {
        self.domains[feature].ones().collect()
    }

    /// Narrows a free feature to the given cells. Fails if the feature is
    /// fixed or the result would be empty.
    pub fn restrict(&mut self, feature: usize, cells: &[usize]) -> Result<()> {
        if self.fixed.contains(feature) {
            return Err(Error::Contract(format!("feature {feature} is fixed")));
        }
        let dom = &mut self.domains[feature];
        let mut keep = FixedBitSet::with_capacity(dom.len());
        for &c in cells {
            if c < dom.len() {
                keep.insert(c);
            }
        }
        keep.intersect_with(dom);
        if keep.is_clear() {
            return Err(Error::Contract(format!(
                "restriction leaves feature {feature} with no values"
            )));
        }
        *dom = keep;
        Ok(())
    }
}

struct Frontier {
    key: f64,
    pessimistic: f64,
    seq: u64,
    domains: Vec<FixedBitSet>,
}

impl PartialEq for Frontier {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Frontier {}
impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key
            .total_cmp(&other.key)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// The challenger must reach `gap > 0` (strict) or `gap ≥ 0`.
#[derive(Debug, Clone, Copy)]
struct Contest {
    challenger: usize,
    incumbent: usize,
    strict: bool,
}

impl Contest {
    fn wins(&self, gap: f64) -> bool {
        if self.strict {
            gap > 0.0
        } else {
            gap >= 0.0
        }
    }
}

/// Branch-and-bound entailment oracle for one instance of a tree ensemble.
#[derive(Debug, Clone)]
pub struct TreeOracle {
    cells: Vec<FeatureCells>,
    trees: Vec<CTree>,
    tree_class: Vec<usize>,
    base: Vec<f64>,
    single_score: bool,
    class_names: Vec<String>,
    model: TreeEnsemble,
    instance: Instance,
    instance_cells: Vec<usize>,
    class: usize,
}

impl TreeOracle {
    pub fn new(model: &TreeEnsemble, space: &FeatureSpace, instance: &Instance) -> Result<Self> {
        if model.feature_count() != space.len() {
            return Err(Error::Mismatch(format!(
                "model was built for {} features, feature space has {}",
                model.feature_count(),
                space.len()
            )));
        }
        space.check(instance)?;
        let cells = discretise(model, space);
        let trees = model
            .trees()
            .iter()
            .map(|t| CTree {
                nodes: t
                    .nodes()
                    .iter()
                    .map(|n| match n {
                        Node::Leaf(w) => CNode::Leaf(*w),
                        Node::Split { split, yes, no } => CNode::Split {
                            feature: split.feature,
                            yes_cells: cells[split.feature].yes_cells(&split.test),
                            yes: *yes,
                            no: *no,
                        },
                    })
                    .collect(),
            })
            .collect();
        let instance_cells = cells
            .iter()
            .zip(&instance.values)
            .map(|(c, v)| c.cell_of(v))
            .collect();
        let class = predict_trees_unchecked(model, instance).class_id;
        Ok(TreeOracle {
            trees,
            tree_class: model.trees().iter().map(|t| t.class).collect(),
            base: model.base_score().to_vec(),
            single_score: model.is_single_score(),
            class_names: model.class_names().to_vec(),
            model: model.clone(),
            cells,
            instance: instance.clone(),
            instance_cells,
            class,
        })
    }

    /// Number of cells of each feature.
    pub fn cell_counts(&self) -> Vec<usize> {
        self.cells.iter().map(FeatureCells::count).collect()
    }

    /// The box that fixes `fixed` to the instance and frees everything else.
    pub fn assignment(&self, fixed: &FeatureSet) -> PartialAssignment {
        let domains = self
            .cells
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let mut d = FixedBitSet::with_capacity(c.count());
                if fixed.contains(i) {
                    d.insert(self.instance_cells[i]);
                } else {
                    d.insert_range(..);
                }
                d
            })
            .collect();
        PartialAssignment {
            fixed: FeatureSet::from_ids(self.cells.len(), fixed.iter()),
            domains,
        }
    }

    fn form(&self, objective: Objective) -> Result<Form> {
        let k = self.base.len();
        let check = |c: usize| {
            if c < k {
                Ok(c)
            } else {
                Err(Error::Contract(format!("class {c} out of range")))
            }
        };
        match objective {
            Objective::Score if self.single_score => Ok(Form {
                plus: 1,
                minus: Some(0),
            }),
            Objective::Score => Err(Error::Capability(
                "the score objective needs a single-score binary model".into(),
            )),
            Objective::Margin(c) => Ok(Form {
                plus: check(c)?,
                minus: None,
            }),
            Objective::Gap {
                challenger,
                incumbent,
            } => Ok(Form {
                plus: check(challenger)?,
                minus: Some(check(incumbent)?),
            }),
        }
    }

    /// Exact extrema of `objective` over all completions of the box.
    pub fn score_bounds(&self, pa: &PartialAssignment, objective: Objective) -> Result<ScoreBounds> {
        let form = self.form(objective)?;
        let hi = self.maximize(pa.domains.clone(), form, false);
        let lo = -self.maximize(pa.domains.clone(), form, true);
        Ok(ScoreBounds { lo, hi })
    }

    /// Bounds `(lb, ub)` of the form over a box, plus the branching choice.
    fn bounds(&self, domains: &[FixedBitSet], form: Form) -> (f64, f64, Option<(usize, usize)>) {
        let mut plus_lo = self.base[form.plus];
        let mut plus_hi = plus_lo;
        let mut minus = form.minus.map(|c| (self.base[c], self.base[c]));
        let mut widest: Option<(f64, usize, usize)> = None;
        for (t, tree) in self.trees.iter().enumerate() {
            let class = self.tree_class[t];
            let relevant = class == form.plus || Some(class) == form.minus;
            if !relevant {
                continue;
            }
            let r = tree.reach(domains);
            if class == form.plus {
                plus_lo += r.min;
                plus_hi += r.max;
            } else if let Some((lo, hi)) = minus.as_mut() {
                *lo += r.min;
                *hi += r.max;
            }
            if let Some((_, node)) = r.open {
                let gap = r.max - r.min;
                if widest.is_none_or(|(g, _, _)| gap > g) {
                    widest = Some((gap, t, node));
                }
            }
        }
        let (lb, ub) = match minus {
            Some((m_lo, m_hi)) => (plus_lo - m_hi, plus_hi - m_lo),
            None => (plus_lo, plus_hi),
        };
        (lb, ub, widest.map(|(_, t, n)| (t, n)))
    }

    fn split_box(&self, domains: &[FixedBitSet], tree: usize, node: usize) -> [Vec<FixedBitSet>; 2] {
        let feature = match &self.trees[tree].nodes[node] {
            CNode::Split { feature, .. } => *feature,
            CNode::Leaf(_) => unreachable!(),
        };
        let yes_cells = self.trees[tree].yes_cells(node);
        let mut with = domains.to_vec();
        with[feature].intersect_with(yes_cells);
        let mut without = domains.to_vec();
        without[feature].difference_with(yes_cells);
        [with, without]
    }

    /// Maximum of the form (or of its negation when `negate`) over a box.
    fn maximize(&self, root: Vec<FixedBitSet>, form: Form, negate: bool) -> f64 {
        let orient = |lb: f64, ub: f64| if negate { (-ub, -lb) } else { (lb, ub) };
        let mut heap = BinaryHeap::new();
        let mut seq = 0;
        let (lb, ub, _) = self.bounds(&root, form);
        let (lb, ub) = orient(lb, ub);
        let mut best = lb;
        heap.push(Frontier {
            key: ub,
            pessimistic: lb,
            seq,
            domains: root,
        });
        while let Some(node) = heap.pop() {
            if node.key == node.pessimistic {
                return node.key;
            }
            let (_, _, branch) = self.bounds(&node.domains, form);
            let (tree, split) = branch.expect("bounds differ, so some tree is open");
            for child in self.split_box(&node.domains, tree, split) {
                let (lb, ub, _) = self.bounds(&child, form);
                let (lb, ub) = orient(lb, ub);
                if ub < best {
                    continue;
                }
                best = best.max(lb);
                seq += 1;
                heap.push(Frontier {
                    key: ub,
                    pessimistic: lb,
                    seq,
                    domains: child,
                });
            }
        }
        unreachable!("the frontier always holds the box attaining the maximum")
    }

    /// A box in which the challenger wins everywhere, if one exists.
    fn find_win(&self, root: Vec<FixedBitSet>, contest: Contest) -> Option<Vec<FixedBitSet>> {
        let form = Form {
            plus: contest.challenger,
            minus: Some(contest.incumbent),
        };
        let mut heap = BinaryHeap::new();
        let (lb, ub, _) = self.bounds(&root, form);
        if !contest.wins(ub) {
            return None;
        }
        let mut seq = 0;
        heap.push(Frontier {
            key: ub,
            pessimistic: lb,
            seq,
            domains: root,
        });
        while let Some(node) = heap.pop() {
            if !contest.wins(node.key) {
                return None;
            }
            if contest.wins(node.pessimistic) {
                return Some(node.domains);
            }
            let (_, _, branch) = self.bounds(&node.domains, form);
            let (tree, split) = branch.expect("bounds differ, so some tree is open");
            for child in self.split_box(&node.domains, tree, split) {
                let (lb, ub, _) = self.bounds(&child, form);
                if contest.wins(ub) {
                    seq += 1;
                    heap.push(Frontier {
                        key: ub,
                        pessimistic: lb,
                        seq,
                        domains: child,
                    });
                }
            }
        }
        None
    }

    fn contests(&self) -> Vec<Contest> {
        let c = self.class;
        if self.single_score {
            // Class 1 iff s ≥ 0: class 0 must push s strictly below zero.
            vec![Contest {
                challenger: 1 - c,
                incumbent: c,
                strict: c == 1,
            }]
        } else {
            (0..self.base.len())
                .filter(|&o| o != c)
                .map(|o| Contest {
                    challenger: o,
                    incumbent: c,
                    strict: o > c,
                })
                .collect()
        }
    }

    fn witness(&self, fixed: &FeatureSet, domains: &[FixedBitSet]) -> Instance {
        let values = (0..self.cells.len())
            .map(|i| {
                let own = self.instance_cells[i];
                if fixed.contains(i) || domains[i].contains(own) {
                    self.instance.values[i]
                } else {
                    let cell = domains[i].ones().next().expect("boxes are non-empty");
                    self.cells[i].representative(cell)
                }
            })
            .collect::<Vec<Value>>();
        Instance::new(values)
    }
}

impl Entailment for TreeOracle {
    fn feature_count(&self) -> usize {
        self.cells.len()
    }

    fn instance(&self) -> &Instance {
        &self.instance
    }

    fn class(&self) -> usize {
        self.class
    }

    fn class_names(&self) -> &[String] {
        &self.class_names
    }

    fn counterexample(&self, fixed: &FeatureSet) -> Option<Instance> {
        let root = self.assignment(fixed).domains;
        for contest in self.contests() {
            if let Some(found) = self.find_win(root.clone(), contest) {
                let w = self.witness(fixed, &found);
                debug_assert_ne!(predict_trees_unchecked(&self.model, &w).class_id, self.class);
                return Some(w);
            }
        }
        None
    }

    fn certificate(&self, fixed: &FeatureSet) -> Certificate {
        let root = self.assignment(fixed).domains;
        if self.single_score {
            let form = Form {
                plus: 1,
                minus: Some(0),
            };
            if self.class == 0 {
                Certificate {
                    label: "max score".into(),
                    value: self.maximize(root, form, false),
                }
            } else {
                Certificate {
                    label: "min score".into(),
                    value: -self.maximize(root, form, true),
                }
            }
        } else {
            let mut best: Option<(f64, usize)> = None;
            for contest in self.contests() {
                let form = Form {
                    plus: contest.challenger,
                    minus: Some(contest.incumbent),
                };
                let v = self.maximize(root.clone(), form, false);
                if best.is_none_or(|(b, _)| v > b) {
                    best = Some((v, contest.challenger));
                }
            }
            let (value, rival) = best.expect("at least two classes");
            Certificate {
                label: format!(
                    "max margin {} - {}",
                    self.class_names[rival], self.class_names[self.class]
                ),
                value,
            }
        }
    }
}
