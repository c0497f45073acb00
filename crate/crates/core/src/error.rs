use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised across the engine.
///
/// The variants are grouped so that a front end can map each onto a distinct
/// exit status (see [`Error::category`]).
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid value for feature `{feature}`: {detail}")]
    Domain { feature: String, detail: String },

    #[error("invalid model: {0}")]
    Model(String),

    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },

    #[error("{}", format_row_errors(.0))]
    Rows(Vec<RowError>),

    #[error("unsupported: {0}")]
    Capability(String),

    #[error("search space too large: {what} has {size} points (limit {limit})")]
    Capacity { what: String, size: u128, limit: u128 },

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("mismatch: {0}")]
    Mismatch(String),

    #[error("attribution undefined: no abductive explanations collected")]
    UndefinedAttribution,

    #[error("weighted attribution undefined: the empty set is among the explanations")]
    DegenerateExplanation,

    #[error("metric undefined: {0}")]
    UndefinedMetric(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A validation failure attached to one data row.
#[derive(Debug, Clone, PartialEq)]
pub struct RowError {
    /// 1-based data row number; the header is not counted.
    pub row: usize,
    pub message: String,
}

fn format_row_errors(rows: &[RowError]) -> String {
    let mut out = format!("{} invalid row(s)", rows.len());
    for r in rows {
        out.push_str(&format!("\n  row {}: {}", r.row, r.message));
    }
    out
}

/// Coarse classification of an [`Error`], used for exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    Input,
    Capability,
    EmptyAttribution,
    Mismatch,
    Capacity,
}

impl Error {
    pub fn parse(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn category(&self) -> Category {
        match self {
            Error::Domain { .. }
            | Error::Model(_)
            | Error::Parse { .. }
            | Error::Rows(_)
            | Error::Contract(_)
            | Error::Io(_) => Category::Input,
            Error::Capability(_) => Category::Capability,
            Error::UndefinedAttribution | Error::DegenerateExplanation => {
                Category::EmptyAttribution
            }
            Error::Mismatch(_) | Error::UndefinedMetric(_) => Category::Mismatch,
            Error::Capacity { .. } => Category::Capacity,
        }
    }
}
