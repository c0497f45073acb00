mod common;

use common::*;
use ffa_core::attribution::{conversion_check, ffa, wffa, AttributionVector};
use ffa_core::metrics::{kendall_tau, manhattan_error, normalize_abs, rbo, Ranking};
use ffa_core::model::Classifier;
use ffa_core::oracle::{brute_force_decide, oracle_for};
use ffa_core::xp::{
    brute_force_all_xps, check_duality, enumerate, minimal_hs, Budget, EnumerateOptions, Target,
};
use ffa_core::FeatureSet;
use proptest::prelude::*;

fn sets(m: usize) -> impl Strategy<Value = Vec<FeatureSet>> {
    prop::collection::vec(prop::collection::btree_set(0..m, 1..=m), 1..8)
        .prop_map(move |v| v.into_iter().map(|s| FeatureSet::from_ids(m, s)).collect())
}

fn vector(m: usize) -> impl Strategy<Value = Vec<f64>> {
    // Few distinct levels, so ties are common.
    prop::collection::vec(prop_oneof![Just(0.0), Just(0.5), Just(1.0), -2.0..2.0f64], m)
}

fn ext(v: &[f64]) -> AttributionVector {
    AttributionVector::external("v", v.to_vec())
}

proptest! {
    #[test]
    fn wffa_sums_to_one(axps in sets(7)) {
        let w = wffa(&axps, 7).unwrap();
        prop_assert!((w.sum() - 1.0).abs() < 1e-12);
        let f = ffa(&axps, 7).unwrap();
        prop_assert!(conversion_check(&f, &w, &axps).is_ok());
        for i in 0..7 {
            prop_assert_eq!(f.values[i] > 0.0, axps.iter().any(|x| x.contains(i)));
            prop_assert!((0.0..=1.0).contains(&f.values[i]));
        }
    }

    #[test]
    fn attribution_ignores_order_and_duplicates(axps in sets(6), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut shuffled = axps.clone();
        shuffled.push(axps[0].clone());
        shuffled.shuffle(&mut rng(seed));
        prop_assert_eq!(ffa(&axps, 6).unwrap().values, ffa(&shuffled, 6).unwrap().values);
        prop_assert_eq!(wffa(&axps, 6).unwrap().values, wffa(&shuffled, 6).unwrap().values);
    }

    #[test]
    fn normalisation_is_idempotent_and_scale_free(a in vector(8), r in vector(8), c in 0.01..100.0f64) {
        let n = normalize_abs(&ext(&a));
        prop_assert_eq!(&normalize_abs(&n).values, &n.values);
        let scaled = ext(&a.iter().map(|x| x * c).collect::<Vec<_>>());
        let (n1, n2) = (normalize_abs(&ext(&a)), normalize_abs(&scaled));
        prop_assert_eq!(Ranking::new(&n1.values).order, Ranking::new(&n2.values).order);
        let reference = ext(&r);
        let e1 = manhattan_error(&reference, &n1).unwrap();
        let e2 = manhattan_error(&reference, &n2).unwrap();
        prop_assert!((e1 - e2).abs() < 1e-12);
        prop_assert_eq!(kendall_tau(&reference, &n1).ok(), kendall_tau(&reference, &n2).ok());
        prop_assert_eq!(rbo(&reference, &n1, 0.9).unwrap(), rbo(&reference, &n2, 0.9).unwrap());
    }

    #[test]
    fn manhattan_is_a_metric(a in vector(6), b in vector(6), c in vector(6)) {
        let (a, b, c) = (ext(&a), ext(&b), ext(&c));
        prop_assert_eq!(manhattan_error(&a, &a).unwrap(), 0.0);
        prop_assert_eq!(manhattan_error(&a, &b).unwrap(), manhattan_error(&b, &a).unwrap());
        let direct = manhattan_error(&a, &c).unwrap();
        let via = manhattan_error(&a, &b).unwrap() + manhattan_error(&b, &c).unwrap();
        prop_assert!(direct <= via + 1e-12);
    }

    #[test]
    fn tau_is_symmetric_and_matches_pair_counting(a in vector(9), b in vector(9)) {
        let (va, vb) = (ext(&a), ext(&b));
        let t = kendall_tau(&va, &vb).ok();
        prop_assert_eq!(t, kendall_tau(&vb, &va).ok());
        match (t, reference_tau(&a, &b)) {
            (Some(x), Some(y)) => prop_assert!((x - y).abs() <= 1e-12),
            (None, None) => {}
            other => prop_assert!(false, "{:?}", other),
        }
        if let Ok(s) = kendall_tau(&va, &va) {
            prop_assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rbo_is_symmetric_and_one_iff_same_ranking(a in vector(7), b in vector(7), p in 0.05..0.95f64) {
        let (va, vb) = (ext(&a), ext(&b));
        let x = rbo(&va, &vb, p).unwrap();
        prop_assert!((x - rbo(&vb, &va, p).unwrap()).abs() < 1e-15);
        prop_assert!((x - reference_rbo(&a, &b, p)).abs() <= 1e-12);
        let same = Ranking::new(&a).order == Ranking::new(&b).order;
        prop_assert_eq!(same, (x - 1.0).abs() < 1e-12, "rbo {}", x);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&x));
    }

    #[test]
    fn hitting_sets_are_minimal(targets in sets(8), blocked in sets(8)) {
        if let Some(h) = minimal_hs(&targets, &blocked, 8) {
            prop_assert!(targets.iter().all(|t| t.intersects(&h)));
            prop_assert!(blocked.iter().all(|b| !b.is_subset(&h)));
            for i in h.iter() {
                let smaller = h.without(i);
                prop_assert!(targets.iter().any(|t| !t.intersects(&smaller)));
            }
        } else {
            // No hitting set avoids every blocked superset: check all subsets.
            for mask in 0u32..256 {
                let h = FeatureSet::from_ids(8, (0..8).filter(|i| mask & (1 << i) != 0));
                let hits = targets.iter().all(|t| t.intersects(&h));
                prop_assert!(!hits || blocked.iter().any(|b| b.is_subset(&h)));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn explanations_are_minimal_and_dual(seed in any::<u64>(), axp_first in any::<bool>()) {
        let mut r = rng(seed);
        let cfg = GenConfig { features: 2..=7, ..GenConfig::small() };
        let g = random_model(&mut r, &cfg);
        let v = g.instance(&mut r);
        let model = Classifier::Trees(g.ensemble.clone());
        let oracle = oracle_for(&model, &g.space, &v).unwrap();
        let opts = EnumerateOptions {
            target: if axp_first { Target::AxpFirst } else { Target::CxpFirst },
            order: None,
        };
        let report = enumerate(oracle.as_ref(), &Budget::unbounded(), &opts).unwrap();
        prop_assert!(report.complete);
        let c = report.class;
        for x in &report.axps {
            prop_assert!(brute_force_decide(&model, &g.space, &v, c, x).unwrap().is_sufficient());
            for i in x.iter() {
                prop_assert!(!brute_force_decide(&model, &g.space, &v, c, &x.without(i)).unwrap().is_sufficient());
            }
        }
        prop_assert!(check_duality(&report.axps, &report.cxps).is_ok());
        let (mut a, mut b) = (report.axps.clone(), report.cxps.clone());
        a.sort();
        b.sort();
        prop_assert_eq!((a, b), brute_force_all_xps(&model, &g.space, &v).unwrap());
    }

    #[test]
    fn partial_runs_are_prefixes(seed in any::<u64>(), limit in 1usize..4) {
        let mut r = rng(seed);
        let g = random_model(&mut r, &GenConfig::small());
        let v = g.instance(&mut r);
        let model = Classifier::Trees(g.ensemble.clone());
        let oracle = oracle_for(&model, &g.space, &v).unwrap();
        let opts = EnumerateOptions::default();
        let full = enumerate(oracle.as_ref(), &Budget::unbounded(), &opts).unwrap();
        let budget = Budget { max_axps: Some(limit), ..Budget::default() };
        let part = enumerate(oracle.as_ref(), &budget, &opts).unwrap();
        prop_assert!(part.axps.len() <= limit);
        prop_assert!(part.timeline.len() <= full.timeline.len());
        for (p, f) in part.timeline.iter().zip(&full.timeline) {
            prop_assert_eq!((p.kind, &p.features), (f.kind, &f.features));
        }
        prop_assert_eq!(part.complete, part.timeline.len() == full.timeline.len() && full.axps.len() <= limit);
    }
}
