use std::time::Instant;

use super::hitting::minimal_hs;
use super::{Budget, EnumerationReport, Explanation, StopReason, Target, XpKind};
use crate::error::{Error, Result};
use crate::features::FeatureSet;
use crate::oracle::Entailment;

/// Scan order for deletion-based extraction.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EnumerateOptions {
    pub target: Target,
    /// A permutation of the feature ids; ascending ids when `None`.
    pub order: Option<Vec<usize>>,
}

fn scan_order(order: Option<&[usize]>, m: usize) -> Result<Vec<usize>> {
    match order {
        None => Ok((0..m).collect()),
        Some(o) => {
            let mut seen = vec![false; m];
            for &i in o {
                if i >= m || std::mem::replace(&mut seen[i], true) {
                    return Err(Error::Contract(format!(
                        "scan order must be a permutation of 0..{m}"
                    )));
                }
            }
            if o.len() != m {
                return Err(Error::Contract(format!(
                    "scan order must be a permutation of 0..{m}"
                )));
            }
            Ok(o.to_vec())
        }
    }
}

/// Oracle access metered against a budget.
struct Session<'a> {
    oracle: &'a dyn Entailment,
    budget: Budget,
    start: Instant,
    calls: u64,
}

impl<'a> Session<'a> {
    fn new(oracle: &'a dyn Entailment, budget: Budget) -> Self {
        Session {
            oracle,
            budget,
            start: Instant::now(),
            calls: 0,
        }
    }

    fn elapsed(&self) -> f64 {
        self.start.elapsed().as_secs_f64()
    }

    fn counterexample(&mut self, fixed: &FeatureSet) -> Result<bool, StopReason> {
        if let Some(limit) = self.budget.seconds {
            if self.elapsed() >= limit {
                return Err(StopReason::Time);
            }
        }
        if let Some(limit) = self.budget.max_oracle_calls {
            if self.calls >= limit {
                return Err(StopReason::OracleCalls);
            }
        }
        self.calls += 1;
        Ok(self.oracle.counterexample(fixed).is_some())
    }

    /// Deletion-based AXp extraction from a sufficient seed.
    fn shrink_axp(&mut self, seed: &FeatureSet, order: &[usize]) -> Result<FeatureSet, StopReason> {
        let mut fixed = seed.clone();
        for &i in order.iter().filter(|&&i| seed.contains(i)) {
            let candidate = fixed.without(i);
            if !self.counterexample(&candidate)? {
                fixed = candidate;
            }
        }
        Ok(fixed)
    }

    /// Deletion-based CXp extraction from a set whose freeing changes the
    /// prediction: members are re-fixed while a counterexample survives.
    fn shrink_cxp(&mut self, freed: &FeatureSet, order: &[usize]) -> Result<FeatureSet, StopReason> {
        let mut free = freed.clone();
        for &i in order.iter().filter(|&&i| freed.contains(i)) {
            let candidate = free.without(i);
            if self.counterexample(&candidate.complement())? {
                free = candidate;
            }
        }
        Ok(free)
    }
}

/// Shrinks a sufficient `seed` to an AXp by dropping features in scan order.
pub fn extract_axp(
    oracle: &dyn Entailment,
    seed: &FeatureSet,
    order: Option<&[usize]>,
) -> Result<FeatureSet> {
    let m = oracle.feature_count();
    let order = scan_order(order, m)?;
    let seed = FeatureSet::from_ids(m, seed.iter());
    if oracle.counterexample(&seed).is_some() {
        return Err(Error::Contract("the seed does not entail the prediction".into()));
    }
    let mut session = Session::new(oracle, Budget::unbounded());
    Ok(session
        .shrink_axp(&seed, &order)
        .expect("unbounded sessions never stop"))
}

/// Shrinks `freed` (whose release admits a class change) to a CXp.
pub fn extract_cxp(
    oracle: &dyn Entailment,
    freed: &FeatureSet,
    order: Option<&[usize]>,
) -> Result<FeatureSet> {
    let m = oracle.feature_count();
    let order = scan_order(order, m)?;
    let freed = FeatureSet::from_ids(m, freed.iter());
    if oracle.counterexample(&freed.complement()).is_none() {
        return Err(Error::Contract(
            "freeing the given features cannot change the prediction".into(),
        ));
    }
    let mut session = Session::new(oracle, Budget::unbounded());
    Ok(session
        .shrink_cxp(&freed, &order)
        .expect("unbounded sessions never stop"))
}

/// Anytime enumeration of AXp's and CXp's by minimal hitting-set duality.
///
/// In the default CXp-first mode each candidate is a minimal hitting set of
/// the AXp's found so far that contains no known CXp. If freeing it can change
/// the prediction it is recorded as a CXp (it is minimal: any proper subset
/// misses some AXp, whose features then stay fixed). Otherwise its complement
/// is sufficient and is shrunk to a new AXp. The loop ends when no candidate
/// remains, at which point both collections are complete.
pub fn enumerate(
    oracle: &dyn Entailment,
    budget: &Budget,
    options: &EnumerateOptions,
) -> Result<EnumerationReport> {
    let m = oracle.feature_count();
    let order = scan_order(options.order.as_deref(), m)?;
    let mut session = Session::new(oracle, *budget);
    let mut axps: Vec<FeatureSet> = Vec::new();
    let mut cxps: Vec<FeatureSet> = Vec::new();
    let mut timeline: Vec<Explanation> = Vec::new();
    let mut complete = false;
    let mut stopped_by = None;

    let mut record = |kind: XpKind,
                      features: FeatureSet,
                      session: &Session,
                      axps: &mut Vec<FeatureSet>,
                      cxps: &mut Vec<FeatureSet>| {
        timeline.push(Explanation {
            kind,
            features: features.clone(),
            index: timeline.len(),
            seconds: session.elapsed(),
            oracle_calls: session.calls,
        });
        match kind {
            XpKind::Axp => axps.push(features),
            XpKind::Cxp => cxps.push(features),
        }
    };

    loop {
        let candidate = match options.target {
            Target::CxpFirst => minimal_hs(&axps, &cxps, m),
            Target::AxpFirst => minimal_hs(&cxps, &axps, m),
        };
        let Some(candidate) = candidate else {
            complete = true;
            break;
        };
        if budget.max_axps.is_some_and(|n| axps.len() >= n) {
            stopped_by = Some(StopReason::AxpLimit);
            break;
        }
        if budget.max_cxps.is_some_and(|n| cxps.len() >= n) {
            stopped_by = Some(StopReason::CxpLimit);
            break;
        }
        let step = match options.target {
            Target::CxpFirst => {
                let fixed = candidate.complement();
                session.counterexample(&fixed).and_then(|flips| {
                    if flips {
                        Ok((XpKind::Cxp, candidate))
                    } else {
                        session
                            .shrink_axp(&fixed, &order)
                            .map(|axp| (XpKind::Axp, axp))
                    }
                })
            }
            Target::AxpFirst => session.counterexample(&candidate).and_then(|flips| {
                if flips {
                    session
                        .shrink_cxp(&candidate.complement(), &order)
                        .map(|cxp| (XpKind::Cxp, cxp))
                } else {
                    Ok((XpKind::Axp, candidate))
                }
            }),
        };
        match step {
            Ok((kind, set)) => record(kind, set, &session, &mut axps, &mut cxps),
            Err(reason) => {
                stopped_by = Some(reason);
                break;
            }
        }
    }

    Ok(EnumerationReport {
        instance: oracle.instance().clone(),
        class: oracle.class(),
        target: options.target,
        axps,
        cxps,
        timeline,
        complete,
        stopped_by,
        oracle_calls: session.calls,
        elapsed_seconds: session.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::oracle::TreeOracle;

    fn named(space: &crate::model::FeatureSpace, names: &[&str]) -> FeatureSet {
        FeatureSet::from_ids(space.len(), names.iter().map(|n| space.id_of(n).unwrap()))
    }

    #[test]
    fn adult_extract_from_full_seed() {
        let space = fixtures::adult_space();
        let oracle = TreeOracle::new(&fixtures::adult_ensemble(), &space, &fixtures::adult_instance()).unwrap();
        let axp = extract_axp(&oracle, &FeatureSet::full(6), None).unwrap();
        assert_eq!(axp, named(&space, &["Education", "Hours/w"]));
        // Scanning Hours/w first lands on the other AXp.
        let axp = extract_axp(&oracle, &FeatureSet::full(6), Some(&[5, 0, 1, 2, 3, 4])).unwrap();
        assert_eq!(axp, named(&space, &["Education", "Status"]));
    }

    #[test]
    fn extract_requires_sufficient_seed() {
        let space = fixtures::adult_space();
        let oracle = TreeOracle::new(&fixtures::adult_ensemble(), &space, &fixtures::adult_instance()).unwrap();
        let err = extract_axp(&oracle, &named(&space, &["Education"]), None).unwrap_err();
        assert!(matches!(err, Error::Contract(_)));
    }

    #[test]
    fn conjunction_and_disjunction_extraction() {
        let (space, model) = fixtures::conjunction();
        let oracle = TreeOracle::new(&model, &space, &fixtures::all_true(2)).unwrap();
        assert_eq!(extract_axp(&oracle, &FeatureSet::full(2), None).unwrap().to_vec(), vec![0, 1]);
        let (space, model) = fixtures::disjunction();
        let oracle = TreeOracle::new(&model, &space, &fixtures::all_true(2)).unwrap();
        assert_eq!(extract_axp(&oracle, &FeatureSet::full(2), None).unwrap().to_vec(), vec![1]);
    }

    #[test]
    fn adult_enumeration_trace() {
        let space = fixtures::adult_space();
        let oracle = TreeOracle::new(&fixtures::adult_ensemble(), &space, &fixtures::adult_instance()).unwrap();
        let r = enumerate(&oracle, &Budget::unbounded(), &EnumerateOptions::default()).unwrap();
        assert!(r.complete);
        let kinds: Vec<XpKind> = r.timeline.iter().map(|e| e.kind).collect();
        assert_eq!(kinds, vec![XpKind::Axp, XpKind::Cxp, XpKind::Axp, XpKind::Cxp]);
        assert_eq!(r.axps, vec![named(&space, &["Education", "Hours/w"]), named(&space, &["Education", "Status"])]);
        assert_eq!(r.cxps, vec![named(&space, &["Education"]), named(&space, &["Status", "Hours/w"])]);
    }

    #[test]
    fn axp_first_finds_the_same_sets() {
        let space = fixtures::adult_space();
        let oracle = TreeOracle::new(&fixtures::adult_ensemble(), &space, &fixtures::adult_instance()).unwrap();
        let opts = EnumerateOptions {
            target: Target::AxpFirst,
            order: None,
        };
        let r = enumerate(&oracle, &Budget::unbounded(), &opts).unwrap();
        assert!(r.complete);
        let mut a = r.axps.clone();
        a.sort();
        let mut c = r.cxps.clone();
        c.sort();
        assert_eq!(a, vec![named(&space, &["Education", "Status"]), named(&space, &["Education", "Hours/w"])]);
        assert_eq!(c, vec![named(&space, &["Education"]), named(&space, &["Status", "Hours/w"])]);
    }

    #[test]
    fn constant_prediction() {
        let (space, model) = fixtures::constant(3);
        let oracle = TreeOracle::new(&model, &space, &fixtures::all_true(3)).unwrap();
        let r = enumerate(&oracle, &Budget::unbounded(), &EnumerateOptions::default()).unwrap();
        assert!(r.complete);
        assert!(r.is_constant_prediction());
        assert!(r.cxps.is_empty());
    }

    #[test]
    fn budgets_trip() {
        let space = fixtures::adult_space();
        let oracle = TreeOracle::new(&fixtures::adult_ensemble(), &space, &fixtures::adult_instance()).unwrap();
        let b = Budget {
            max_axps: Some(1),
            ..Budget::default()
        };
        let r = enumerate(&oracle, &b, &EnumerateOptions::default()).unwrap();
        assert!(!r.complete);
        assert_eq!(r.axps.len(), 1);
        assert_eq!(r.stopped_by, Some(StopReason::AxpLimit));

        let r = enumerate(&oracle, &Budget::seconds(0.0), &EnumerateOptions::default()).unwrap();
        assert!(!r.complete);
        assert!(r.timeline.is_empty());
        assert_eq!(r.oracle_calls, 0);

        let b = Budget {
            max_oracle_calls: Some(3),
            ..Budget::default()
        };
        let r = enumerate(&oracle, &b, &EnumerateOptions::default()).unwrap();
        assert_eq!(r.oracle_calls, 3);
        assert_eq!(r.stopped_by, Some(StopReason::OracleCalls));
        // The first AXp needs 1 + 6 calls, so nothing is recorded.
        assert!(r.timeline.is_empty());
    }

    #[test]
    fn bad_scan_order() {
        let space = fixtures::adult_space();
        let oracle = TreeOracle::new(&fixtures::adult_ensemble(), &space, &fixtures::adult_instance()).unwrap();
        let opts = EnumerateOptions {
            target: Target::CxpFirst,
            order: Some(vec![0, 0, 1, 2, 3, 4]),
        };
        assert!(enumerate(&oracle, &Budget::unbounded(), &opts).is_err());
    }
}
