//! Formal feature attribution (FFA) for tree ensembles and monotone linear
//! classifiers.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`] holds feature spaces, instances and the two classifier families,
//!   with exact evaluation.
//! * [`oracle`] decides whether a set of fixed features entails the prediction
//!   (and produces counterexamples when it does not).
//! * [`xp`] extracts abductive explanations and enumerates abductive and
//!   contrastive explanations with an anytime hitting-set loop.
//! * [`attribution`] turns a collection of abductive explanations into FFA and
//!   WFFA vectors.
//! * [`metrics`] compares attribution vectors (Manhattan error, Kendall's tau-b,
//!   rank-biased overlap).
//! * [`io`] reads and writes every document format used by the command line.

pub mod attribution;
pub mod error;
pub mod features;
pub mod fixtures;
pub mod io;
pub mod metrics;
pub mod model;
pub mod oracle;
pub mod xp;

pub use error::{Error, Result};
pub use features::FeatureSet;
