#![allow(dead_code)]

use std::ops::RangeInclusive;

use ffa_core::model::{
    Domain, FeatureSpace, FeatureSpec, Instance, Link, LinearModel, Split, Tree, TreeEnsemble,
    TreeNode, Value,
};
use ffa_core::FeatureSet;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone)]
pub struct GenConfig {
    pub features: RangeInclusive<usize>,
    pub trees: RangeInclusive<usize>,
    pub max_depth: usize,
    /// Largest categorical domain.
    pub max_categories: usize,
    /// Distinct thresholds available per ordinal feature.
    pub thresholds: usize,
    /// Probability of a three-class model.
    pub multiclass: f64,
}

impl GenConfig {
    /// Small enough for exhaustive checking.
    pub fn small() -> Self {
        GenConfig {
            features: 3..=12,
            trees: 1..=8,
            max_depth: 3,
            max_categories: 3,
            thresholds: 2,
            multiclass: 0.25,
        }
    }
}

/// An ordinal feature has domain `[0, 10]` and a pool of half-integer
/// thresholds shared by all its splits.
pub struct Generated {
    pub space: FeatureSpace,
    pub ensemble: TreeEnsemble,
    pools: Vec<Vec<f64>>,
}

pub fn random_space(rng: &mut TestRng, m: usize, cfg: &GenConfig) -> (FeatureSpace, Vec<Vec<f64>>) {
    let mut specs = Vec::with_capacity(m);
    let mut pools = Vec::with_capacity(m);
    for id in 0..m {
        let (domain, pool) = match rng.gen_range(0..3) {
            0 => (Domain::Boolean, Vec::new()),
            1 => {
                let k = rng.gen_range(2..=cfg.max_categories.max(2));
                (Domain::Categorical((0..k).map(|v| format!("v{v}")).collect()), Vec::new())
            }
            _ => {
                let mut all: Vec<f64> = (0..10).map(|t| t as f64 + 0.5).collect();
                all.shuffle(rng);
                all.truncate(cfg.thresholds.max(1));
                (Domain::Ordinal { lo: 0.0, hi: 10.0 }, all)
            }
        };
        specs.push(FeatureSpec { id, name: format!("f{id}"), domain });
        pools.push(pool);
    }
    (FeatureSpace::new(specs).unwrap(), pools)
}

fn random_split(rng: &mut TestRng, space: &FeatureSpace, pools: &[Vec<f64>]) -> Split {
    let f = rng.gen_range(0..space.len());
    match &space.feature(f).domain {
        Domain::Boolean => Split::is_true(f),
        Domain::Categorical(values) => {
            let k = values.len();
            let size = rng.gen_range(1..k);
            let mut ids: Vec<usize> = (0..k).collect();
            ids.shuffle(rng);
            ids.truncate(size);
            Split::member(f, ids)
        }
        Domain::Ordinal { .. } => Split::le(f, *pools[f].choose(rng).unwrap()),
    }
}

fn random_node(
    rng: &mut TestRng,
    space: &FeatureSpace,
    pools: &[Vec<f64>],
    depth: usize,
) -> TreeNode {
    if depth == 0 || rng.gen_bool(0.15) {
        return TreeNode::leaf(rng.gen_range(-1.0..1.0));
    }
    let split = random_split(rng, space, pools);
    let yes = random_node(rng, space, pools, depth - 1);
    let no = random_node(rng, space, pools, depth - 1);
    TreeNode::split(split, yes, no)
}

pub fn random_ensemble_on(
    rng: &mut TestRng,
    space: &FeatureSpace,
    pools: &[Vec<f64>],
    cfg: &GenConfig,
) -> TreeEnsemble {
    let k = if rng.gen_bool(cfg.multiclass) { 3 } else { 2 };
    let n = rng.gen_range(cfg.trees.clone());
    let trees = (0..n)
        .map(|t| {
            let class = if k == 2 { 1 } else { t % k };
            let root = TreeNode::split(
                random_split(rng, space, pools),
                random_node(rng, space, pools, cfg.max_depth - 1),
                random_node(rng, space, pools, cfg.max_depth - 1),
            );
            Tree::new(class, root)
        })
        .collect();
    let classes = (0..k).map(|c| format!("c{c}")).collect();
    let base = (0..k).map(|_| rng.gen_range(-0.2..0.2)).collect();
    TreeEnsemble::new(space, classes, base, trees).unwrap()
}

pub fn random_model(rng: &mut TestRng, cfg: &GenConfig) -> Generated {
    let m = rng.gen_range(cfg.features.clone());
    let (space, pools) = random_space(rng, m, cfg);
    let ensemble = random_ensemble_on(rng, &space, &pools, cfg);
    Generated { space, ensemble, pools }
}

impl Generated {
    pub fn instance(&self, rng: &mut TestRng) -> Instance {
        random_instance(rng, &self.space, &self.pools)
    }
}

/// Ordinal values are integers or, now and then, exactly a threshold.
pub fn random_instance(rng: &mut TestRng, space: &FeatureSpace, pools: &[Vec<f64>]) -> Instance {
    let values = space
        .features()
        .iter()
        .map(|f| match &f.domain {
            Domain::Boolean => Value::Bool(rng.gen_bool(0.5)),
            Domain::Categorical(values) => Value::Category(rng.gen_range(0..values.len())),
            Domain::Ordinal { lo, hi } => {
                if !pools[f.id].is_empty() && rng.gen_bool(0.2) {
                    Value::Real(*pools[f.id].choose(rng).unwrap())
                } else {
                    Value::Real(rng.gen_range(*lo as i64..=*hi as i64) as f64)
                }
            }
        })
        .collect();
    Instance::new(values)
}

pub fn random_subset(rng: &mut TestRng, m: usize) -> FeatureSet {
    let p = rng.gen_range(0.0..1.0);
    FeatureSet::from_ids(m, (0..m).filter(|_| rng.gen_bool(p)))
}

/// A linear model over ordinal and boolean features with a random instance.
pub fn random_linear(rng: &mut TestRng) -> (FeatureSpace, LinearModel, Instance) {
    let m = rng.gen_range(1..=10);
    let specs: Vec<FeatureSpec> = (0..m)
        .map(|id| {
            let domain = if rng.gen_bool(0.5) {
                Domain::Boolean
            } else {
                let lo = rng.gen_range(-5..=2) as f64;
                Domain::Ordinal { lo, hi: lo + rng.gen_range(0..=6) as f64 }
            };
            FeatureSpec { id, name: format!("f{id}"), domain }
        })
        .collect();
    let space = FeatureSpace::new(specs).unwrap();
    let weights: Vec<f64> = (0..m)
        .map(|_| if rng.gen_bool(0.1) { 0.0 } else { rng.gen_range(-1.0..1.0) })
        .collect();
    let bias = rng.gen_range(-1.0..1.0);
    let model = LinearModel::new(&space, weights, bias, Link::Identity).unwrap();
    let values = space
        .features()
        .iter()
        .map(|f| match f.domain {
            Domain::Boolean => Value::Bool(rng.gen_bool(0.5)),
            Domain::Ordinal { lo, hi } => Value::Real(if lo == hi { lo } else { rng.gen_range(lo..=hi) }),
            Domain::Categorical(_) => unreachable!(),
        })
        .collect();
    (space, model, Instance::new(values))
}

/// Kendall's tau-b by counting all pairs.
pub fn reference_tau(a: &[f64], b: &[f64]) -> Option<f64> {
    let n = a.len();
    let (mut conc, mut disc, mut tie_a, mut tie_b) = (0i64, 0i64, 0i64, 0i64);
    for i in 0..n {
        for j in i + 1..n {
            let da = a[i].partial_cmp(&a[j]).unwrap();
            let db = b[i].partial_cmp(&b[j]).unwrap();
            use std::cmp::Ordering::Equal;
            if da == Equal {
                tie_a += 1;
            }
            if db == Equal {
                tie_b += 1;
            }
            if da != Equal && db != Equal {
                if da == db {
                    conc += 1;
                } else {
                    disc += 1;
                }
            }
        }
    }
    let pairs = (n * n.saturating_sub(1) / 2) as i64;
    let (pa, pb) = (pairs - tie_a, pairs - tie_b);
    if pa == 0 || pb == 0 {
        return None;
    }
    Some((conc - disc) as f64 / ((pa as f64) * (pb as f64)).sqrt())
}

/// Feature ids by decreasing value, ties by increasing id, via a stable sort.
pub fn reference_ranking(v: &[f64]) -> Vec<usize> {
    let mut ids: Vec<usize> = (0..v.len()).collect();
    ids.sort_by(|&i, &j| v[j].partial_cmp(&v[i]).unwrap());
    ids
}

/// Extrapolated RBO summed directly from prefix-set intersections.
pub fn reference_rbo(a: &[f64], b: &[f64], p: f64) -> f64 {
    use std::collections::HashSet;
    let s = reference_ranking(a);
    let t = reference_ranking(b);
    let k = s.len();
    let overlap = |d: usize| {
        let x: HashSet<usize> = s[..d].iter().copied().collect();
        t[..d].iter().filter(|i| x.contains(i)).count() as f64
    };
    let mut sum = 0.0;
    for d in 1..=k {
        sum += overlap(d) / d as f64 * p.powi(d as i32);
    }
    overlap(k) / k as f64 * p.powi(k as i32) + (1.0 - p) / p * sum
}
