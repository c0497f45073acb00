use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "ffa", version, about = "Formal feature attribution for tree ensembles and linear models")]
#[command(args_conflicts_with_subcommands = true)]
pub struct Cli {
    /// Print the description of a document format; without NAME, list the formats.
    #[arg(long, value_name = "NAME", num_args = 0..=1, default_missing_value = "")]
    pub schema: Option<String>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extract one abductive explanation per instance.
    Explain(RunArgs),
    /// Enumerate abductive and contrastive explanations under a budget.
    Enumerate(RunArgs),
    /// Compute formal feature attribution from the enumerated explanations.
    Attribute(AttributeArgs),
    /// Compare external attribution vectors with formal feature attribution.
    Compare(CompareArgs),
    /// Check enumeration results against exhaustive search.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Model document (canonical JSON, or an XGBoost JSON dump).
    #[arg(long, value_name = "PATH")]
    pub model: Option<PathBuf>,

    /// Feature-space document.
    #[arg(long = "features", value_name = "PATH")]
    pub features: PathBuf,

    /// Instances CSV.
    #[arg(long, value_name = "PATH")]
    pub instances: Option<PathBuf>,

    /// Instance rows to process (0-based; repeat or separate by commas). Default: all.
    #[arg(long = "row", value_name = "N", value_delimiter = ',')]
    pub rows: Vec<usize>,

    /// Class names for an XGBoost dump.
    #[arg(long, value_name = "NAMES", value_delimiter = ',')]
    pub classes: Vec<String>,

    /// Initial margin for an XGBoost dump.
    #[arg(long, value_name = "MARGIN", default_value_t = 0.0, allow_negative_numbers = true)]
    pub base_margin: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    CxpFirst,
    AxpFirst,
}

#[derive(Debug, Clone, Args)]
pub struct BudgetArgs {
    /// Which explanation kind the hitting-set loop targets.
    #[arg(long, value_enum, default_value_t = Mode::CxpFirst)]
    pub mode: Mode,

    /// Wall-clock limit per instance.
    #[arg(long, value_name = "SECONDS")]
    pub seconds: Option<f64>,

    #[arg(long, value_name = "N")]
    pub max_axps: Option<usize>,

    #[arg(long, value_name = "N")]
    pub max_cxps: Option<usize>,

    #[arg(long, value_name = "N")]
    pub max_oracle_calls: Option<u64>,

    /// Ignore any limit given above.
    #[arg(long)]
    pub unbounded: bool,

    /// Scan order for extraction: a permutation of feature ids or names.
    #[arg(long, value_name = "LIST", value_delimiter = ',')]
    pub order: Vec<String>,

    /// Process instances on all cores.
    #[arg(long)]
    pub parallel: bool,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub input: InputArgs,

    #[command(flatten)]
    pub budget: BudgetArgs,

    /// Write the document here instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Ffa,
    Wffa,
    Both,
}

#[derive(Debug, Clone, Args)]
pub struct AttributeArgs {
    #[command(flatten)]
    pub run: RunArgs,

    #[arg(long, value_enum, default_value_t = Kind::Ffa)]
    pub kind: Kind,

    /// Budget marks (seconds) at which to report the attribution error.
    #[arg(long, value_name = "LIST", value_delimiter = ',')]
    pub checkpoints: Vec<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub run: RunArgs,

    /// Reference attribution kind, when computed from the model.
    #[arg(long, value_enum, default_value_t = Kind::Ffa)]
    pub kind: Kind,

    /// External attribution file (repeatable).
    #[arg(long = "candidate", value_name = "PATH", required = true)]
    pub candidates: Vec<PathBuf>,

    /// Reference vectors in the external attribution format, instead of
    /// enumerating.
    #[arg(long, value_name = "PATH")]
    pub reference: Option<PathBuf>,

    /// Persistence of rank-biased overlap.
    #[arg(long, value_name = "P", default_value_t = ffa_core::metrics::DEFAULT_PERSISTENCE)]
    pub rbo_p: f64,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub run: RunArgs,

    /// Check this report instead of enumerating.
    #[arg(long, value_name = "PATH")]
    pub report: Option<PathBuf>,
}
