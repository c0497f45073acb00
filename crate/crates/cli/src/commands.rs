use std::path::{Path, PathBuf};

use anyhow::{bail, Context as _, Result};
use ffa_core::attribution::{convergence_series, ffa, wffa, AttributionVector, Source};
use ffa_core::io::{self, AttributionRecord, ExternalAttribution, ReportEntry};
use ffa_core::metrics::{average_rows, compare_report, ComparisonRow};
use ffa_core::model::FeatureSpace;
use ffa_core::oracle::oracle_for;
use ffa_core::xp::{brute_force_all_xps, check_duality, extract_axp, EnumerationReport};
use ffa_core::{Error, FeatureSet};

use crate::args::{AttributeArgs, CompareArgs, Kind, RunArgs, VerifyArgs};
use crate::context::{self, emit, enumerate_rows, load, per_row, Inputs};

fn names(space: &FeatureSpace, set: &FeatureSet) -> String {
    if set.is_empty() {
        return "∅".into();
    }
    let parts: Vec<&str> = set.iter().map(|i| space.name(i)).collect();
    format!("{{{}}}", parts.join(", "))
}

pub fn explain(args: &RunArgs) -> Result<()> {
    let inputs = load(&args.input)?;
    let opts = context::options(&args.budget, &inputs.space)?;
    let lines = per_row(&inputs.rows, args.budget.parallel, |row, v| {
        let oracle = oracle_for(&inputs.model, &inputs.space, v).with_context(|| format!("row {row}"))?;
        let full = FeatureSet::full(inputs.space.len());
        let axp = extract_axp(oracle.as_ref(), &full, opts.order.as_deref())?;
        let class = &oracle.class_names()[oracle.class()];
        if axp.is_empty() {
            return Ok(format!("row {row}: {class} because ∅ (prediction is domain-constant)\n"));
        }
        let cert = oracle.certificate(&axp);
        Ok(format!(
            "row {row}: {class} because {} with {}; {} {:.4}\n",
            names(&inputs.space, &axp),
            inputs.space.describe(v, axp.iter()),
            cert.label,
            cert.value
        ))
    })?;
    emit(args.output.as_deref(), &lines.concat())
}

fn summary(row: usize, r: &EnumerationReport) -> String {
    let state = match r.stopped_by {
        _ if r.complete => "complete".to_string(),
        Some(reason) => format!("partial (stopped by {reason})"),
        None => "partial".to_string(),
    };
    format!("row {row}: {state}, {} AXp(s), {} CXp(s), {} oracle call(s)", r.axps.len(), r.cxps.len(), r.oracle_calls)
}

pub fn enumerate(args: &RunArgs) -> Result<()> {
    let inputs = load(&args.input)?;
    let entries = enumerate_rows(&inputs, args)?;
    for e in &entries {
        eprintln!("{}", summary(e.row, &e.report));
    }
    let text = io::write_report(&inputs.space, inputs.model.class_names(), &entries);
    emit(args.output.as_deref(), &text)
}

fn kinds(kind: Kind) -> Vec<Source> {
    match kind {
        Kind::Ffa => vec![Source::Ffa],
        Kind::Wffa => vec![Source::Wffa],
        Kind::Both => vec![Source::Ffa, Source::Wffa],
    }
}

fn attribution_of(source: &Source, report: &EnumerationReport, m: usize) -> ffa_core::Result<AttributionVector> {
    let v = match source {
        Source::Wffa => wffa(&report.axps, m)?,
        _ => ffa(&report.axps, m)?,
    };
    Ok(v.with_complete(report.complete))
}

fn vectors_for(entry: &ReportEntry, sources: &[Source], m: usize) -> Result<Vec<AttributionVector>> {
    if entry.report.axps.is_empty() {
        return Err(anyhow::Error::new(Error::UndefinedAttribution))
            .with_context(|| format!("row {}: no explanations within budget", entry.row));
    }
    sources
        .iter()
        .map(|s| attribution_of(s, &entry.report, m).with_context(|| format!("row {}", entry.row)))
        .collect()
}

fn nonzero(space: &FeatureSpace, v: &AttributionVector) -> String {
    let parts: Vec<String> = space
        .features()
        .iter()
        .filter(|f| v.values[f.id] != 0.0)
        .map(|f| format!("{}={}", f.name, v.values[f.id]))
        .collect();
    parts.join(", ")
}

fn matrix_path(output: &Path, row: usize, source: &Source) -> PathBuf {
    let stem = output.file_stem().and_then(|s| s.to_str()).unwrap_or("attribution");
    output.with_file_name(format!("{stem}.row{row}.{source}.csv"))
}

pub fn attribute(args: &AttributeArgs) -> Result<()> {
    let run = &args.run;
    let inputs = load(&run.input)?;
    let entries = enumerate_rows(&inputs, run)?;
    let sources = kinds(args.kind);
    let m = inputs.space.len();
    let mut records = Vec::with_capacity(entries.len());
    for e in &entries {
        eprintln!("{}", summary(e.row, &e.report));
        let vectors = vectors_for(e, &sources, m)?;
        let mut convergence = Vec::new();
        if !args.checkpoints.is_empty() {
            for v in &vectors {
                convergence.push((v.source.clone(), convergence_series(&e.report, v, &args.checkpoints)?));
            }
        }
        for v in &vectors {
            eprintln!("row {} {}: {}", e.row, v.source, nonzero(&inputs.space, v));
        }
        if let Some(grid) = inputs.space.grid() {
            match &run.output {
                Some(out) => {
                    for v in &vectors {
                        let path = matrix_path(out, e.row, &v.source);
                        let text = io::write_grid_matrix(v, grid)?;
                        emit(Some(&path), &text)?;
                        eprintln!("wrote {}", path.display());
                    }
                }
                None => eprintln!("note: pass --output to also write the {}x{} matrices", grid.rows, grid.cols),
            }
        }
        records.push(AttributionRecord {
            row: e.row,
            class: inputs.model.class_names()[e.report.class].clone(),
            complete: e.report.complete,
            stopped_by: e.report.stopped_by.map(|s| s.to_string()),
            vectors,
            convergence,
        });
    }
    emit(run.output.as_deref(), &io::write_attribution_document(&inputs.space, &records))
}

fn for_row(blocks: &[ExternalAttribution], row: usize) -> Vec<AttributionVector> {
    blocks
        .iter()
        .filter(|b| b.row.is_none_or(|r| r == row))
        .map(|b| b.vector.clone())
        .collect()
}

pub fn compare(args: &CompareArgs) -> Result<()> {
    let run = &args.run;
    let space = context::load_space(&run.input)?;
    let mut candidates = Vec::new();
    for path in &args.candidates {
        let text = context::read(path)?;
        candidates.extend(
            io::read_external_attribution(&text, &space).with_context(|| format!("in {}", path.display()))?,
        );
    }

    let (reference_name, references): (String, Vec<(usize, AttributionVector)>) = match &args.reference {
        Some(path) => {
            let text = context::read(path)?;
            let blocks = io::read_external_attribution(&text, &space)
                .with_context(|| format!("in {}", path.display()))?;
            let name = blocks.first().map(|b| b.vector.source.to_string()).unwrap_or_default();
            let refs = blocks.into_iter().map(|b| (b.row.unwrap_or(0), b.vector)).collect();
            (name, refs)
        }
        None => {
            let source = match args.kind {
                Kind::Ffa => Source::Ffa,
                Kind::Wffa => Source::Wffa,
                Kind::Both => bail!(Error::Contract("compare takes one reference kind".into())),
            };
            let inputs = load(&run.input)?;
            let entries = enumerate_rows(&inputs, run)?;
            let mut refs = Vec::with_capacity(entries.len());
            for e in &entries {
                eprintln!("{}", summary(e.row, &e.report));
                let v = vectors_for(e, std::slice::from_ref(&source), space.len())?.remove(0);
                refs.push((e.row, v));
            }
            (source.to_string(), refs)
        }
    };

    let mut rows: Vec<ComparisonRow> = Vec::new();
    for (row, reference) in &references {
        let cands = for_row(&candidates, *row);
        if cands.is_empty() {
            bail!(Error::Mismatch(format!("no candidate vector for row {row}")));
        }
        rows.extend(compare_report(*row, reference, &cands, args.rbo_p)?);
    }
    let averages = average_rows(&rows);
    print_table(&rows, &averages);
    emit(run.output.as_deref(), &io::write_comparison(&reference_name, args.rbo_p, &rows, &averages))
}

fn fmt_tau(t: Option<f64>) -> String {
    t.map_or("undefined".into(), |t| format!("{t:.4}"))
}

fn print_table(rows: &[ComparisonRow], averages: &[ffa_core::metrics::AverageRow]) {
    eprintln!("{:>5}  {:<12} {:>10} {:>10} {:>10}", "row", "method", "error", "tau", "rbo");
    for r in rows {
        eprintln!("{:>5}  {:<12} {:>10.4} {:>10} {:>10.4}", r.instance, r.name, r.error, fmt_tau(r.tau), r.rbo);
    }
    for a in averages {
        let note = if a.tau_undefined > 0 { format!("  ({} undefined tau excluded)", a.tau_undefined) } else { String::new() };
        eprintln!("{:>5}  {:<12} {:>10.4} {:>10} {:>10.4}{note}", "mean", a.name, a.error, fmt_tau(a.tau), a.rbo);
    }
}

fn sorted(sets: &[FeatureSet]) -> Vec<FeatureSet> {
    let mut v = sets.to_vec();
    v.sort();
    v.dedup();
    v
}

fn diff(space: &FeatureSpace, got: &[FeatureSet], want: &[FeatureSet]) -> String {
    let extra: Vec<String> = got.iter().filter(|s| !want.contains(s)).map(|s| names(space, s)).collect();
    let missing: Vec<String> = want.iter().filter(|s| !got.contains(s)).map(|s| names(space, s)).collect();
    let mut parts = Vec::new();
    if !missing.is_empty() {
        parts.push(format!("missing {}", missing.join(" ")));
    }
    if !extra.is_empty() {
        parts.push(format!("unexpected {}", extra.join(" ")));
    }
    if parts.is_empty() {
        "duplicates".into()
    } else {
        parts.join("; ")
    }
}

/// Returns whether every check passed.
pub fn verify(args: &VerifyArgs) -> Result<bool> {
    let run = &args.run;
    let inputs: Inputs = load(&run.input)?;
    let entries = match &args.report {
        Some(path) => {
            let text = context::read(path)?;
            let all = io::read_report(&text, &inputs.space).with_context(|| format!("in {}", path.display()))?;
            inputs
                .rows
                .iter()
                .map(|(row, _)| {
                    all.iter()
                        .find(|e| e.row == *row)
                        .cloned()
                        .ok_or_else(|| anyhow::Error::new(Error::Mismatch(format!("report has no entry for row {row}"))))
                })
                .collect::<Result<Vec<_>>>()?
        }
        None => enumerate_rows(&inputs, run)?,
    };
    let space = &inputs.space;
    let mut ok = true;
    let mut out = String::new();
    for ((row, v), entry) in inputs.rows.iter().zip(&entries) {
        let (axps, cxps) = brute_force_all_xps(&inputs.model, space, v).with_context(|| format!("row {row}"))?;
        let r = &entry.report;
        let mut checks: Vec<(&str, Option<String>)> = Vec::new();
        if args.report.is_some() {
            checks.push((
                "report instance matches row",
                (r.instance.values != v.values).then(|| "values differ".to_string()),
            ));
        }
        let (got_a, got_c) = (sorted(&r.axps), sorted(&r.cxps));
        let dup = got_a.len() != r.axps.len() || got_c.len() != r.cxps.len();
        checks.push((
            "AXp's match exhaustive search",
            (got_a != axps || dup).then(|| diff(space, &r.axps, &axps)),
        ));
        checks.push((
            "CXp's match exhaustive search",
            (got_c != cxps || dup).then(|| diff(space, &r.cxps, &cxps)),
        ));
        checks.push((
            "hitting-set duality",
            check_duality(&r.axps, &r.cxps).err().map(|e| e.to_string()),
        ));
        for (name, failure) in checks {
            match failure {
                None => out.push_str(&format!("row {row}: {name}: pass\n")),
                Some(why) => {
                    ok = false;
                    out.push_str(&format!("row {row}: {name}: FAIL ({why})\n"));
                }
            }
        }
    }
    emit(run.output.as_deref(), &out)?;
    Ok(ok)
}
