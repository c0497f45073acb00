use serde_json::{json, Value as Json};

use crate::metrics::{AverageRow, ComparisonRow};

/// The comparison document (see `schemas/comparison.json`).
pub fn write_comparison(
    reference: &str,
    persistence: f64,
    rows: &[ComparisonRow],
    averages: &[AverageRow],
) -> String {
    let notes: Vec<String> = averages
        .iter()
        .filter(|a| a.tau_undefined > 0)
        .map(|a| {
            format!(
                "tau undefined for {} of {} instance(s) of `{}`; excluded from its average",
                a.tau_undefined, a.instances, a.name
            )
        })
        .collect();
    let doc = json!({
        "reference": reference,
        "persistence": persistence,
        "rows": rows.iter().map(|r| json!({
            "row": r.instance,
            "name": r.name,
            "error": r.error,
            "tau": r.tau,
            "rbo": r.rbo,
        })).collect::<Vec<Json>>(),
        "averages": averages.iter().map(|a| json!({
            "name": a.name,
            "instances": a.instances,
            "error": a.error,
            "tau": a.tau,
            "tau_undefined": a.tau_undefined,
            "rbo": a.rbo,
        })).collect::<Vec<Json>>(),
        "notes": notes,
    });
    serde_json::to_string_pretty(&doc).expect("comparison serialises") + "\n"
}
