//! Abductive (AXp) and contrastive (CXp) explanations: single extraction,
//! anytime enumeration, and the exhaustive reference used to check it.

mod brute;
mod duality;
mod enumerate;
mod hitting;

pub use brute::brute_force_all_xps;
pub use duality::{check_duality, DualityViolation};
pub use enumerate::{enumerate, extract_axp, extract_cxp, EnumerateOptions};
pub use hitting::minimal_hs;

use std::fmt;

use crate::features::FeatureSet;
use crate::model::Instance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum XpKind {
    Axp,
    Cxp,
}

impl fmt::Display for XpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            XpKind::Axp => "axp",
            XpKind::Cxp => "cxp",
        })
    }
}

/// One discovered explanation, as recorded on the enumeration timeline.
#[derive(Debug, Clone, PartialEq)]
pub struct Explanation {
    pub kind: XpKind,
    pub features: FeatureSet,
    /// Position on the timeline (0-based).
    pub index: usize,
    /// Seconds since the enumeration started.
    pub seconds: f64,
    /// Oracle calls spent when the explanation was recorded.
    pub oracle_calls: u64,
}

/// Which explanation kind the hitting-set loop targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Target {
    /// Candidates are hitting sets of the AXp's; AXp's arrive as duals.
    #[default]
    CxpFirst,
    /// Candidates are hitting sets of the CXp's; CXp's arrive as duals.
    AxpFirst,
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::CxpFirst => "cxp-first",
            Target::AxpFirst => "axp-first",
        })
    }
}

/// Limits for an anytime enumeration. A run stops as soon as any limit is
/// reached; wall time and oracle calls are checked before each oracle call.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Budget {
    pub seconds: Option<f64>,
    pub max_axps: Option<usize>,
    pub max_cxps: Option<usize>,
    pub max_oracle_calls: Option<u64>,
}

impl Budget {
    pub fn unbounded() -> Self {
        Budget::default()
    }

    pub fn seconds(seconds: f64) -> Self {
        Budget {
            seconds: Some(seconds),
            ..Budget::default()
        }
    }

    pub fn is_unbounded(&self) -> bool {
        *self == Budget::default()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    Time,
    AxpLimit,
    CxpLimit,
    OracleCalls,
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StopReason::Time => "time",
            StopReason::AxpLimit => "max-axps",
            StopReason::CxpLimit => "max-cxps",
            StopReason::OracleCalls => "max-oracle-calls",
        })
    }
}

/// Everything an enumeration collected.
#[derive(Debug, Clone, PartialEq)]
pub struct EnumerationReport {
    pub instance: Instance,
    pub class: usize,
    pub target: Target,
    pub axps: Vec<FeatureSet>,
    pub cxps: Vec<FeatureSet>,
    /// Discovery events in order; `axps` and `cxps` follow the same order.
    pub timeline: Vec<Explanation>,
    /// True iff the hitting-set loop ran dry before any limit tripped.
    pub complete: bool,
    pub stopped_by: Option<StopReason>,
    pub oracle_calls: u64,
    pub elapsed_seconds: f64,
}

impl EnumerationReport {
    /// The prediction does not depend on any feature: the empty set is the
    /// only AXp.
    pub fn is_constant_prediction(&self) -> bool {
        self.axps.len() == 1 && self.axps[0].is_empty()
    }

    /// AXp's discovered no later than `seconds`.
    pub fn axps_until(&self, seconds: f64) -> Vec<FeatureSet> {
        self.timeline
            .iter()
            .filter(|e| e.kind == XpKind::Axp && e.seconds <= seconds)
            .map(|e| e.features.clone())
            .collect()
    }
}
