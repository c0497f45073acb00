//! Formal feature attribution from a collection of AXp's.
//!
//! `ffa[i]` is the fraction of AXp's containing feature `i`; `wffa[i]` weights
//! each AXp by the inverse of its size, so that the WFFA values sum to one.

use std::fmt;

use crate::error::{Error, Result};
use crate::features::FeatureSet;
use crate::metrics::manhattan_error;
use crate::xp::EnumerationReport;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    Ffa,
    Wffa,
    External(String),
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Ffa => f.write_str("ffa"),
            Source::Wffa => f.write_str("wffa"),
            Source::External(name) => f.write_str(name),
        }
    }
}

/// One real weight per feature id.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributionVector {
    pub values: Vec<f64>,
    pub source: Source,
    /// Number of AXp's the values were computed from (0 for external vectors).
    pub basis: usize,
    /// Whether the AXp collection was complete.
    pub complete: bool,
}

impl AttributionVector {
    pub fn external(name: impl Into<String>, values: Vec<f64>) -> Self {
        AttributionVector {
            values,
            source: Source::External(name.into()),
            basis: 0,
            complete: false,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn with_complete(mut self, complete: bool) -> Self {
        self.complete = complete;
        self
    }
}

/// Sorted, de-duplicated copy: attribution has set semantics, and a fixed
/// order makes the floating-point sums independent of discovery order.
fn canonical(axps: &[FeatureSet]) -> Vec<FeatureSet> {
    let mut v = axps.to_vec();
    v.sort();
    v.dedup();
    v
}

pub fn ffa(axps: &[FeatureSet], m: usize) -> Result<AttributionVector> {
    let axps = canonical(axps);
    if axps.is_empty() {
        return Err(Error::UndefinedAttribution);
    }
    let mut counts = vec![0usize; m];
    for x in &axps {
        for i in x.iter() {
            counts[i] += 1;
        }
    }
    let n = axps.len() as f64;
    Ok(AttributionVector {
        values: counts.into_iter().map(|c| c as f64 / n).collect(),
        source: Source::Ffa,
        basis: axps.len(),
        complete: false,
    })
}

pub fn wffa(axps: &[FeatureSet], m: usize) -> Result<AttributionVector> {
    let axps = canonical(axps);
    if axps.is_empty() {
        return Err(Error::UndefinedAttribution);
    }
    if axps.iter().any(FeatureSet::is_empty) {
        return Err(Error::DegenerateExplanation);
    }
    let mut sums = vec![0.0f64; m];
    for x in &axps {
        let w = 1.0 / x.len() as f64;
        for i in x.iter() {
            sums[i] += w;
        }
    }
    let n = axps.len() as f64;
    Ok(AttributionVector {
        values: sums.into_iter().map(|s| s / n).collect(),
        source: Source::Wffa,
        basis: axps.len(),
        complete: false,
    })
}

/// Both sides of `Σ ffa = mean|X| · Σ wffa` when they disagree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConversionMismatch {
    pub ffa_sum: f64,
    pub scaled_wffa_sum: f64,
}

pub const CONVERSION_TOLERANCE: f64 = 1e-9;

/// Checks that the FFA and WFFA vectors of the same AXp collection are
/// related by the mean explanation size.
pub fn conversion_check(
    ffa_vec: &AttributionVector,
    wffa_vec: &AttributionVector,
    axps: &[FeatureSet],
) -> Result<(), ConversionMismatch> {
    let axps = canonical(axps);
    let mean_len = if axps.is_empty() {
        0.0
    } else {
        axps.iter().map(FeatureSet::len).sum::<usize>() as f64 / axps.len() as f64
    };
    let lhs = ffa_vec.sum();
    let rhs = mean_len * wffa_vec.sum();
    if (lhs - rhs).abs() <= CONVERSION_TOLERANCE {
        Ok(())
    } else {
        Err(ConversionMismatch {
            ffa_sum: lhs,
            scaled_wffa_sum: rhs,
        })
    }
}

/// Attribution error at one budget mark.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergencePoint {
    pub mark: f64,
    /// AXp's discovered by the mark.
    pub basis: usize,
    /// Manhattan distance to the reference; `None` while no AXp is known.
    pub error: Option<f64>,
}

/// Recomputes the attribution (of the reference's kind) from the AXp's known
/// at each mark and measures its distance to `exact`.
pub fn convergence_series(
    report: &EnumerationReport,
    exact: &AttributionVector,
    marks: &[f64],
) -> Result<Vec<ConvergencePoint>> {
    let m = exact.len();
    marks
        .iter()
        .map(|&mark| {
            let prefix = report.axps_until(mark);
            let approx = match exact.source {
                Source::Wffa => wffa(&prefix, m),
                _ => ffa(&prefix, m),
            };
            let error = match approx {
                Ok(v) => Some(manhattan_error(&v, exact)?),
                Err(Error::UndefinedAttribution) => None,
                Err(e) => return Err(e),
            };
            Ok(ConvergencePoint {
                mark,
                basis: prefix.len(),
                error,
            })
        })
        .collect()
}
