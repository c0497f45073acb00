use std::fmt;

use super::XpKind;
use crate::features::FeatureSet;

/// Why a pair of explanation collections is not hitting-set dual.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DualityViolation {
    /// `set` (of kind `kind`) misses `missed` from the other collection.
    NotHit {
        kind: XpKind,
        set: FeatureSet,
        missed: FeatureSet,
    },
    /// `set` still hits the other collection without `redundant`.
    NotMinimal {
        kind: XpKind,
        set: FeatureSet,
        redundant: usize,
    },
}

impl fmt::Display for DualityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DualityViolation::NotHit { kind, set, missed } => {
                let other = match kind {
                    XpKind::Axp => XpKind::Cxp,
                    XpKind::Cxp => XpKind::Axp,
                };
                write!(f, "{kind} {set} does not intersect {other} {missed}")
            }
            DualityViolation::NotMinimal {
                kind,
                set,
                redundant,
            } => write!(f, "{kind} {set} is not a minimal hitting set (drop {redundant})"),
        }
    }
}

fn check_side(kind: XpKind, sets: &[FeatureSet], others: &[FeatureSet]) -> Result<(), DualityViolation> {
    for set in sets {
        if let Some(missed) = others.iter().find(|o| !o.intersects(set)) {
            return Err(DualityViolation::NotHit {
                kind,
                set: set.clone(),
                missed: missed.clone(),
            });
        }
        for i in set.iter() {
            let smaller = set.without(i);
            if others.iter().all(|o| o.intersects(&smaller)) {
                return Err(DualityViolation::NotMinimal {
                    kind,
                    set: set.clone(),
                    redundant: i,
                });
            }
        }
    }
    Ok(())
}

/// Checks that every AXp is a minimal hitting set of the CXp's and every CXp
/// a minimal hitting set of the AXp's.
pub fn check_duality(axps: &[FeatureSet], cxps: &[FeatureSet]) -> Result<(), DualityViolation> {
    check_side(XpKind::Axp, axps, cxps)?;
    check_side(XpKind::Cxp, cxps, axps)
}
