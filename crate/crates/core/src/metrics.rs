//! Comparing attribution vectors: max-abs normalisation, Manhattan error,
//! Kendall's tau-b and extrapolated rank-biased overlap.

use std::collections::BTreeMap;

use crate::attribution::AttributionVector;
use crate::error::{Error, Result};

pub const DEFAULT_PERSISTENCE: f64 = 0.9;

/// `|vᵢ| / maxⱼ |vⱼ|`; an all-zero vector stays all-zero.
pub fn normalize_abs(vec: &AttributionVector) -> AttributionVector {
    let max = vec.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let values = if max > 0.0 {
        vec.values.iter().map(|v| v.abs() / max).collect()
    } else {
        vec![0.0; vec.len()]
    };
    AttributionVector {
        values,
        ..vec.clone()
    }
}

fn same_length(a: &AttributionVector, b: &AttributionVector) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::Mismatch(format!(
            "attribution vectors have {} and {} entries",
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

/// `Σᵢ |aᵢ − bᵢ|`.
pub fn manhattan_error(a: &AttributionVector, b: &AttributionVector) -> Result<f64> {
    same_length(a, b)?;
    Ok(a.values.iter().zip(&b.values).map(|(x, y)| (x - y).abs()).sum())
}

/// Feature ids by decreasing value, equal values by increasing id.
#[derive(Debug, Clone, PartialEq)]
pub struct Ranking {
    pub order: Vec<usize>,
    pub values: Vec<f64>,
}

impl Ranking {
    pub fn new(values: &[f64]) -> Self {
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&i, &j| values[j].total_cmp(&values[i]).then(i.cmp(&j)));
        Ranking {
            order,
            values: values.to_vec(),
        }
    }
}

fn tied_pairs(sorted: &[f64]) -> u64 {
    let mut total = 0u64;
    let mut run = 1u64;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            total += run * (run - 1) / 2;
            run = 1;
        }
    }
    total + run * (run - 1) / 2
}

/// Counts inversions of `v` while merge-sorting it.
fn count_inversions(v: &mut [f64], buf: &mut Vec<f64>) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut inv = count_inversions(&mut v[..mid], buf) + count_inversions(&mut v[mid..], buf);
    buf.clear();
    let (mut i, mut j) = (0, mid);
    while i < mid && j < n {
        if v[j] < v[i] {
            inv += (mid - i) as u64;
            buf.push(v[j]);
            j += 1;
        } else {
            buf.push(v[i]);
            i += 1;
        }
    }
    buf.extend_from_slice(&v[i..mid]);
    buf.extend_from_slice(&v[j..n]);
    v.copy_from_slice(buf);
    inv
}

/// Tie-corrected Kendall's tau-b, by Knight's `O(m log m)` method.
pub fn kendall_tau(a: &AttributionVector, b: &AttributionVector) -> Result<f64> {
    same_length(a, b)?;
    let n = a.len();
    if n < 2 {
        return Err(Error::UndefinedMetric("Kendall's tau needs at least 2 features".into()));
    }
    let mut pairs: Vec<(f64, f64)> = a.values.iter().copied().zip(b.values.iter().copied()).collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));

    let total = (n as u64) * (n as u64 - 1) / 2;
    let a_sorted: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let ties_a = tied_pairs(&a_sorted);
    let mut ties_joint = 0u64;
    let mut run = 1u64;
    for w in pairs.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            ties_joint += run * (run - 1) / 2;
            run = 1;
        }
    }
    ties_joint += run * (run - 1) / 2;

    let mut bs: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let discordant = count_inversions(&mut bs, &mut Vec::with_capacity(n));
    let ties_b = tied_pairs(&bs);

    let denom_a = total - ties_a;
    let denom_b = total - ties_b;
    if denom_a == 0 || denom_b == 0 {
        return Err(Error::UndefinedMetric(
            "Kendall's tau is undefined for a constant vector".into(),
        ));
    }
    let numerator = total as i64 - ties_a as i64 - ties_b as i64 + ties_joint as i64
        - 2 * discordant as i64;
    Ok(numerator as f64 / ((denom_a as f64) * (denom_b as f64)).sqrt())
}

/// Extrapolated rank-biased overlap of the two full-depth rankings.
pub fn rbo(a: &AttributionVector, b: &AttributionVector, p: f64) -> Result<f64> {
    same_length(a, b)?;
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Contract(format!("RBO persistence {p} is not in (0, 1)")));
    }
    let k = a.len();
    if k == 0 {
        return Err(Error::UndefinedMetric("RBO of empty rankings".into()));
    }
    let s = Ranking::new(&a.values).order;
    let t = Ranking::new(&b.values).order;
    let mut seen_s = vec![false; k];
    let mut seen_t = vec![false; k];
    let mut overlap = 0usize;
    let mut weight = 1.0;
    let mut sum = 0.0;
    for d in 1..=k {
        let (x, y) = (s[d - 1], t[d - 1]);
        seen_s[x] = true;
        seen_t[y] = true;
        if x == y {
            overlap += 1;
        } else {
            overlap += usize::from(seen_t[x]) + usize::from(seen_s[y]);
        }
        weight *= p;
        sum += overlap as f64 / d as f64 * weight;
    }
    Ok(overlap as f64 / k as f64 * weight + (1.0 - p) / p * sum)
}

/// One (instance, method) line of a comparison table.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub instance: usize,
    pub name: String,
    pub error: f64,
    /// `None` when tau is undefined (a constant vector).
    pub tau: Option<f64>,
    pub rbo: f64,
}

/// Per-method means over instances.
#[derive(Debug, Clone, PartialEq)]
pub struct AverageRow {
    pub name: String,
    pub instances: usize,
    pub error: f64,
    /// Mean over the instances where tau is defined.
    pub tau: Option<f64>,
    pub tau_undefined: usize,
    pub rbo: f64,
}

/// Compares each candidate (after [`normalize_abs`]) with the reference.
pub fn compare_report(
    instance: usize,
    reference: &AttributionVector,
    candidates: &[AttributionVector],
    persistence: f64,
) -> Result<Vec<ComparisonRow>> {
    candidates
        .iter()
        .map(|cand| {
            let cand = normalize_abs(cand);
            let tau = match kendall_tau(reference, &cand) {
                Ok(t) => Some(t),
                Err(Error::UndefinedMetric(_)) => None,
                Err(e) => return Err(e),
            };
            Ok(ComparisonRow {
                instance,
                name: cand.source.to_string(),
                error: manhattan_error(reference, &cand)?,
                tau,
                rbo: rbo(reference, &cand, persistence)?,
            })
        })
        .collect()
}

/// Arithmetic means per method, in first-appearance order.
pub fn average_rows(rows: &[ComparisonRow]) -> Vec<AverageRow> {
    let mut order: Vec<&str> = Vec::new();
    let mut groups: BTreeMap<&str, Vec<&ComparisonRow>> = BTreeMap::new();
    for r in rows {
        if !groups.contains_key(r.name.as_str()) {
            order.push(&r.name);
        }
        groups.entry(&r.name).or_default().push(r);
    }
    order
        .into_iter()
        .map(|name| {
            let g = &groups[name];
            let n = g.len() as f64;
            let taus: Vec<f64> = g.iter().filter_map(|r| r.tau).collect();
            AverageRow {
                name: name.to_string(),
                instances: g.len(),
                error: g.iter().map(|r| r.error).sum::<f64>() / n,
                tau: (!taus.is_empty()).then(|| taus.iter().sum::<f64>() / taus.len() as f64),
                tau_undefined: g.len() - taus.len(),
                rbo: g.iter().map(|r| r.rbo).sum::<f64>() / n,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(values: &[f64]) -> AttributionVector {
        AttributionVector::external("t", values.to_vec())
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize_abs(&v(&[-2.0, 1.0, 0.0])).values, vec![1.0, 0.5, 0.0]);
        assert_eq!(normalize_abs(&v(&[0.0, 0.0])).values, vec![0.0, 0.0]);
        let ffa = v(&[1.0, 0.5, 0.0, 0.0, 0.0, 0.5]);
        assert_eq!(normalize_abs(&ffa).values, ffa.values);
    }

    #[test]
    fn manhattan_examples() {
        let a = v(&[1.0, 0.5, 0.5, 0.0]);
        assert_eq!(manhattan_error(&a, &a).unwrap(), 0.0);
        assert_eq!(manhattan_error(&a, &v(&[1.0, 0.0, 0.5, 0.0])).unwrap(), 0.5);
        assert!(matches!(manhattan_error(&a, &v(&[1.0])), Err(Error::Mismatch(_))));
    }

    #[test]
    fn tau_extremes() {
        let a = v(&[0.1, 0.4, 0.3, 0.9]);
        assert_eq!(kendall_tau(&a, &a).unwrap(), 1.0);
        let rev = v(&[-0.1, -0.4, -0.3, -0.9]);
        assert_eq!(kendall_tau(&a, &rev).unwrap(), -1.0);
        assert!(matches!(kendall_tau(&a, &v(&[1.0; 4])), Err(Error::UndefinedMetric(_))));
    }

    #[test]
    fn rbo_basics() {
        let a = v(&[0.1, 0.4, 0.3, 0.9]);
        assert!((rbo(&a, &a, 0.9).unwrap() - 1.0).abs() < 1e-15);
        assert!((rbo(&a, &a, 0.3).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(rbo(&v(&[3.0]), &v(&[1.0]), 0.9).unwrap(), 1.0);
        assert!(rbo(&a, &a, 1.0).is_err());
        assert!(rbo(&a, &a, 0.0).is_err());
    }

    #[test]
    fn ranking_ties_by_id() {
        assert_eq!(Ranking::new(&[0.5, 1.0, 0.5, 0.0]).order, vec![1, 0, 2, 3]);
    }

    #[test]
    fn identical_candidate() {
        let r = v(&[1.0, 0.5, 0.0, 0.5]);
        let rows = compare_report(0, &r, std::slice::from_ref(&r), DEFAULT_PERSISTENCE).unwrap();
        assert_eq!(rows[0].error, 0.0);
        assert_eq!(rows[0].tau, Some(1.0));
        assert!((rows[0].rbo - 1.0).abs() < 1e-15);
    }

    #[test]
    fn averaging_is_arithmetic() {
        let rows = vec![
            ComparisonRow { instance: 0, name: "lime".into(), error: 1.0, tau: Some(0.5), rbo: 0.8 },
            ComparisonRow { instance: 1, name: "lime".into(), error: 3.0, tau: None, rbo: 0.6 },
        ];
        let avg = average_rows(&rows);
        assert_eq!(avg.len(), 1);
        assert_eq!(avg[0].error, 2.0);
        assert_eq!(avg[0].tau, Some(0.5));
        assert_eq!(avg[0].tau_undefined, 1);
        assert!((avg[0].rbo - 0.7).abs() < 1e-15);
    }
}
