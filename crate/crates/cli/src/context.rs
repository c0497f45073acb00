use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context as _, Result};
use ffa_core::io::{self, DumpOptions, ReportEntry};
use ffa_core::model::{Classifier, FeatureSpace, Instance};
use ffa_core::oracle::oracle_for;
use ffa_core::xp::{enumerate, Budget, EnumerateOptions, Target};
use rayon::prelude::*;

use crate::args::{BudgetArgs, InputArgs, Mode, RunArgs};

pub fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// Writes `text` to `path`, or to standard output.
pub fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

pub struct Inputs {
    pub space: FeatureSpace,
    pub model: Classifier,
    /// Selected `(row, instance)` pairs in file order.
    pub rows: Vec<(usize, Instance)>,
}

pub fn load_space(args: &InputArgs) -> Result<FeatureSpace> {
    let text = read(&args.features)?;
    Ok(io::parse_feature_space(&text)?)
}

pub fn load_model(args: &InputArgs, space: &FeatureSpace) -> Result<Classifier> {
    let Some(path) = &args.model else { bail!(ffa_core::Error::Contract("--model is required".into())) };
    let text = read(path)?;
    let mut dump = DumpOptions {
        base_margin: args.base_margin,
        ..DumpOptions::default()
    };
    if !args.classes.is_empty() {
        dump.classes = args.classes.clone();
    }
    io::load_model(&text, space, &dump).with_context(|| format!("in {}", path.display()))
}

pub fn load_rows(
    args: &InputArgs,
    space: &FeatureSpace,
    classes: &[String],
) -> Result<Vec<(usize, Instance)>> {
    let Some(path) = &args.instances else {
        bail!(ffa_core::Error::Contract("--instances is required".into()))
    };
    let text = read(path)?;
    let all = io::parse_instances(&text, space, Some(classes))
        .with_context(|| format!("in {}", path.display()))?;
    if args.rows.is_empty() {
        return Ok(all.into_iter().enumerate().collect());
    }
    args.rows
        .iter()
        .map(|&r| match all.get(r) {
            Some(v) => Ok((r, v.clone())),
            None => bail!(ffa_core::Error::Contract(format!(
                "row {r} does not exist ({} instance(s) in {})",
                all.len(),
                path.display()
            ))),
        })
        .collect()
}

pub fn load(args: &InputArgs) -> Result<Inputs> {
    let space = load_space(args)?;
    let model = load_model(args, &space)?;
    let rows = load_rows(args, &space, model.class_names())?;
    Ok(Inputs { space, model, rows })
}

pub fn budget(args: &BudgetArgs) -> Result<Budget> {
    if args.unbounded {
        return Ok(Budget::unbounded());
    }
    if let Some(s) = args.seconds {
        if !(s >= 0.0) {
            bail!(ffa_core::Error::Contract(format!("--seconds must be non-negative, got {s}")));
        }
    }
    Ok(Budget {
        seconds: args.seconds,
        max_axps: args.max_axps,
        max_cxps: args.max_cxps,
        max_oracle_calls: args.max_oracle_calls,
    })
}

pub fn options(args: &BudgetArgs, space: &FeatureSpace) -> Result<EnumerateOptions> {
    let order = if args.order.is_empty() {
        None
    } else {
        let ids = args
            .order
            .iter()
            .map(|s| {
                let s = s.trim();
                space
                    .id_of(s)
                    .or_else(|| s.parse::<usize>().ok().filter(|&i| i < space.len()))
                    .ok_or_else(|| {
                        ffa_core::Error::Contract(format!("--order: unknown feature `{s}`"))
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Some(ids)
    };
    Ok(EnumerateOptions {
        target: match args.mode {
            Mode::CxpFirst => Target::CxpFirst,
            Mode::AxpFirst => Target::AxpFirst,
        },
        order,
    })
}

/// Maps `f` over the selected rows, on all cores when `parallel` is set.
/// Results keep the row order either way.
pub fn per_row<T, F>(rows: &[(usize, Instance)], parallel: bool, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize, &Instance) -> Result<T> + Sync,
{
    if parallel {
        rows.par_iter().map(|(r, v)| f(*r, v)).collect()
    } else {
        rows.iter().map(|(r, v)| f(*r, v)).collect()
    }
}

/// Enumerates every selected row.
pub fn enumerate_rows(inputs: &Inputs, run: &RunArgs) -> Result<Vec<ReportEntry>> {
    let budget = budget(&run.budget)?;
    let opts = options(&run.budget, &inputs.space)?;
    per_row(&inputs.rows, run.budget.parallel, |row, v| {
        let oracle = oracle_for(&inputs.model, &inputs.space, v)
            .with_context(|| format!("row {row}"))?;
        let report = enumerate(oracle.as_ref(), &budget, &opts)?;
        Ok(ReportEntry { row, report })
    })
}
