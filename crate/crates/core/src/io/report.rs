//! The enumeration report document. Everything that depends on wall time
//! lives under `wall_clock`, so the rest of the document is reproducible.

use serde::{Deserialize, Serialize};
use serde_json::Map;

use crate::error::{Error, Result};
use crate::features::FeatureSet;
use crate::model::{FeatureSpace, Instance};
use crate::xp::{EnumerationReport, Explanation, StopReason, Target, XpKind};

pub const REPORT_FORMAT: &str = "ffa-report/1";

/// One enumeration run and the instance row it explains.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportEntry {
    pub row: usize,
    pub report: EnumerationReport,
}

#[derive(Debug, Serialize, Deserialize)]
struct ReportDoc {
    format: String,
    features: Vec<String>,
    classes: Vec<String>,
    instances: Vec<InstanceDoc>,
    wall_clock: WallClockDoc,
}

#[derive(Debug, Serialize, Deserialize)]
struct InstanceDoc {
    row: usize,
    instance: Map<String, serde_json::Value>,
    class: String,
    target: String,
    complete: bool,
    stopped_by: Option<String>,
    oracle_calls: u64,
    axps: Vec<Vec<String>>,
    cxps: Vec<Vec<String>>,
    timeline: Vec<EventDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct EventDoc {
    kind: String,
    features: Vec<String>,
    oracle_calls: u64,
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct WallClockDoc {
    instances: Vec<WallDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct WallDoc {
    row: usize,
    elapsed_seconds: f64,
    timeline_seconds: Vec<f64>,
}

fn names(space: &FeatureSpace, set: &FeatureSet) -> Vec<String> {
    set.iter().map(|i| space.name(i).to_string()).collect()
}

pub fn write_report(space: &FeatureSpace, classes: &[String], entries: &[ReportEntry]) -> String {
    let mut instances = Vec::with_capacity(entries.len());
    let mut wall = WallClockDoc::default();
    for ReportEntry { row, report } in entries {
        let instance = space
            .features()
            .iter()
            .map(|f| {
                (
                    f.name.clone(),
                    serde_json::Value::String(space.render_value(f.id, &report.instance.values[f.id])),
                )
            })
            .collect();
        instances.push(InstanceDoc {
            row: *row,
            instance,
            class: classes[report.class].clone(),
            target: report.target.to_string(),
            complete: report.complete,
            stopped_by: report.stopped_by.map(|s| s.to_string()),
            oracle_calls: report.oracle_calls,
            axps: report.axps.iter().map(|s| names(space, s)).collect(),
            cxps: report.cxps.iter().map(|s| names(space, s)).collect(),
            timeline: report
                .timeline
                .iter()
                .map(|e| EventDoc {
                    kind: e.kind.to_string(),
                    features: names(space, &e.features),
                    oracle_calls: e.oracle_calls,
                })
                .collect(),
        });
        wall.instances.push(WallDoc {
            row: *row,
            elapsed_seconds: report.elapsed_seconds,
            timeline_seconds: report.timeline.iter().map(|e| e.seconds).collect(),
        });
    }
    let doc = ReportDoc {
        format: REPORT_FORMAT.into(),
        features: space.features().iter().map(|f| f.name.clone()).collect(),
        classes: classes.to_vec(),
        instances,
        wall_clock: wall,
    };
    serde_json::to_string_pretty(&doc).expect("report serialises") + "\n"
}

fn set_of(space: &FeatureSpace, names: &[String], path: &str) -> Result<FeatureSet> {
    let mut set = FeatureSet::empty(space.len());
    for n in names {
        let id = space
            .id_of(n)
            .ok_or_else(|| Error::parse(path, format!("unknown feature `{n}`")))?;
        set.insert(id);
    }
    Ok(set)
}

/// Reads a report written by [`write_report`] back into enumeration reports.
pub fn read_report(text: &str, space: &FeatureSpace) -> Result<Vec<ReportEntry>> {
    let doc: ReportDoc =
        serde_json::from_str(text).map_err(|e| Error::parse("report", e.to_string()))?;
    if doc.format != REPORT_FORMAT {
        return Err(Error::parse("report", format!("unsupported format `{}`", doc.format)));
    }
    let mut out = Vec::with_capacity(doc.instances.len());
    for (i, inst) in doc.instances.into_iter().enumerate() {
        let path = format!("instances[{i}]");
        let mut values = Vec::with_capacity(space.len());
        for f in space.features() {
            let cell = inst
                .instance
                .get(&f.name)
                .and_then(|v| v.as_str())
                .ok_or_else(|| Error::parse(&path, format!("missing value for `{}`", f.name)))?;
            values.push(space.parse_value(f.id, cell)?);
        }
        let class = doc
            .classes
            .iter()
            .position(|c| *c == inst.class)
            .ok_or_else(|| Error::parse(&path, format!("unknown class `{}`", inst.class)))?;
        let target = match inst.target.as_str() {
            "cxp-first" => Target::CxpFirst,
            "axp-first" => Target::AxpFirst,
            other => return Err(Error::parse(&path, format!("unknown target `{other}`"))),
        };
        let stopped_by = match inst.stopped_by.as_deref() {
            None => None,
            Some("time") => Some(StopReason::Time),
            Some("max-axps") => Some(StopReason::AxpLimit),
            Some("max-cxps") => Some(StopReason::CxpLimit),
            Some("max-oracle-calls") => Some(StopReason::OracleCalls),
            Some(other) => return Err(Error::parse(&path, format!("unknown stop reason `{other}`"))),
        };
        let wall = doc.wall_clock.instances.iter().find(|w| w.row == inst.row);
        let mut timeline = Vec::with_capacity(inst.timeline.len());
        for (index, e) in inst.timeline.iter().enumerate() {
            let kind = match e.kind.as_str() {
                "axp" => XpKind::Axp,
                "cxp" => XpKind::Cxp,
                other => return Err(Error::parse(&path, format!("unknown event kind `{other}`"))),
            };
            timeline.push(Explanation {
                kind,
                features: set_of(space, &e.features, &path)?,
                index,
                seconds: wall
                    .and_then(|w| w.timeline_seconds.get(index).copied())
                    .unwrap_or(0.0),
                oracle_calls: e.oracle_calls,
            });
        }
        let sets = |lists: &[Vec<String>]| -> Result<Vec<FeatureSet>> {
            lists.iter().map(|l| set_of(space, l, &path)).collect()
        };
        out.push(ReportEntry {
            row: inst.row,
            report: EnumerationReport {
                instance: Instance::new(values),
                class,
                target,
                axps: sets(&inst.axps)?,
                cxps: sets(&inst.cxps)?,
                timeline,
                complete: inst.complete,
                stopped_by,
                oracle_calls: inst.oracle_calls,
                elapsed_seconds: wall.map_or(0.0, |w| w.elapsed_seconds),
            },
        });
    }
    Ok(out)
}
