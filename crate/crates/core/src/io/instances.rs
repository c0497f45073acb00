use crate::error::{Error, Result, RowError};
use crate::model::{FeatureSpace, Instance};

pub const LABEL_COLUMN: &str = "label";

/// Reads instances from CSV. The header names every feature once, in any
/// order, plus an optional `label` column holding a class name or index.
/// Rows are numbered from 1 (the first data row); all row errors are
/// reported together.
pub fn parse_instances(
    text: &str,
    space: &FeatureSpace,
    classes: Option<&[String]>,
) -> Result<Vec<Instance>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| Error::parse("instances", e.to_string()))?
        .clone();

    let mut columns = vec![None; space.len()];
    let mut label_col = None;
    for (col, name) in header.iter().enumerate() {
        if name == LABEL_COLUMN && space.id_of(name).is_none() {
            label_col = Some(col);
            continue;
        }
        let id = space
            .id_of(name)
            .ok_or_else(|| Error::parse("instances header", format!("unknown feature `{name}`")))?;
        if columns[id].replace(col).is_some() {
            return Err(Error::parse("instances header", format!("column `{name}` repeated")));
        }
    }
    if let Some(id) = columns.iter().position(Option::is_none) {
        return Err(Error::parse(
            "instances header",
            format!("missing column for feature `{}`", space.name(id)),
        ));
    }

    let mut out = Vec::new();
    let mut errors = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                errors.push(RowError { row, message: e.to_string() });
                continue;
            }
        };
        let mut values = Vec::with_capacity(space.len());
        let mut row_errors = Vec::new();
        for (id, col) in columns.iter().enumerate() {
            let cell = record.get(col.expect("checked above")).unwrap_or("");
            match space.parse_value(id, cell) {
                Ok(v) => values.push(v),
                Err(e) => row_errors.push(e.to_string()),
            }
        }
        let label = match label_col.and_then(|c| record.get(c)) {
            None | Some("") => None,
            Some(text) => match parse_label(text, classes) {
                Ok(l) => Some(l),
                Err(msg) => {
                    row_errors.push(msg);
                    None
                }
            },
        };
        if row_errors.is_empty() {
            let mut inst = Instance::new(values);
            inst.label = label;
            row_errors.extend(space.validate(&inst).iter().map(|v| v.to_string()));
            if row_errors.is_empty() {
                out.push(inst);
                continue;
            }
        }
        errors.push(RowError { row, message: row_errors.join("; ") });
    }
    if errors.is_empty() {
        Ok(out)
    } else {
        Err(Error::Rows(errors))
    }
}

fn parse_label(text: &str, classes: Option<&[String]>) -> std::result::Result<usize, String> {
    if let Some(pos) = classes.and_then(|cs| cs.iter().position(|c| c == text)) {
        return Ok(pos);
    }
    match text.parse::<usize>() {
        Ok(i) if classes.is_none_or(|cs| i < cs.len()) => Ok(i),
        _ => Err(format!("unknown label `{text}`")),
    }
}

/// Writes instances in the format read by [`parse_instances`].
pub fn write_instances(space: &FeatureSpace, instances: &[Instance]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(space.features().iter().map(|f| f.name.as_str()))
        .map_err(|e| Error::Io(e.into()))?;
    for inst in instances {
        let cells: Vec<String> = (0..space.len())
            .map(|id| space.render_value(id, &inst.values[id]))
            .collect();
        w.write_record(&cells).map_err(|e| Error::Io(e.into()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
