//! Reading and writing the documents used on the command line.

mod attribution;
mod compare;
mod instances;
mod model;
mod report;
mod space;
mod xgboost;

pub use attribution::{
    read_external_attribution, write_attribution_csv, write_attribution_document,
    write_grid_matrix, AttributionRecord, ExternalAttribution,
};
pub use compare::write_comparison;
pub use instances::{parse_instances, write_instances, LABEL_COLUMN};
pub use model::{parse_model, write_model};
pub use report::{read_report, write_report, ReportEntry, REPORT_FORMAT};
pub use space::{parse_feature_space, write_feature_space};
pub use xgboost::{parse_ensemble_dump, DumpOptions};

use crate::error::Result;
use crate::model::{Classifier, FeatureSpace};

/// Reads either model format: a JSON array is an XGBoost dump, an object
/// the canonical document.
pub fn load_model(text: &str, space: &FeatureSpace, dump: &DumpOptions) -> Result<Classifier> {
    if text.trim_start().starts_with('[') {
        parse_ensemble_dump(text, space, dump).map(Classifier::Trees)
    } else {
        parse_model(text, space)
    }
}

/// Names and contents of the shipped format descriptions.
pub const SCHEMAS: &[(&str, &str)] = &[
    ("feature-space", include_str!("../../schemas/feature-space.json")),
    ("model", include_str!("../../schemas/model.json")),
    ("instances", include_str!("../../schemas/instances.txt")),
    ("external-attribution", include_str!("../../schemas/external-attribution.txt")),
    ("report", include_str!("../../schemas/report.json")),
    ("attribution", include_str!("../../schemas/attribution.json")),
    ("comparison", include_str!("../../schemas/comparison.json")),
];

pub fn schema(name: &str) -> Option<&'static str> {
    SCHEMAS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}
