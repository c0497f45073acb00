use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// The declared domain of one feature.
#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    /// A finite set of named values. Instances refer to values by index.
    Categorical(Vec<String>),
    /// A closed real interval `[lo, hi]`.
    Ordinal { lo: f64, hi: f64 },
    /// `{0, 1}`.
    Boolean,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureKind {
    Categorical,
    Ordinal,
    Boolean,
}

impl fmt::Display for FeatureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FeatureKind::Categorical => "categorical",
            FeatureKind::Ordinal => "ordinal",
            FeatureKind::Boolean => "boolean",
        })
    }
}

impl Domain {
    pub fn kind(&self) -> FeatureKind {
        match self {
            Domain::Categorical(_) => FeatureKind::Categorical,
            Domain::Ordinal { .. } => FeatureKind::Ordinal,
            Domain::Boolean => FeatureKind::Boolean,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSpec {
    pub id: usize,
    pub name: String,
    pub domain: Domain,
}

impl FeatureSpec {
    pub fn kind(&self) -> FeatureKind {
        self.domain.kind()
    }

    /// Index of a categorical value by name.
    pub fn category_index(&self, value: &str) -> Option<usize> {
        match &self.domain {
            Domain::Categorical(values) => values.iter().position(|v| v == value),
            _ => None,
        }
    }
}

/// Optional 2-D layout of the features (e.g. image pixels), row-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    pub rows: usize,
    pub cols: usize,
}

/// The ordered list of features and their domains.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSpace {
    features: Vec<FeatureSpec>,
    by_name: HashMap<String, usize>,
    grid: Option<Grid>,
}

impl FeatureSpace {
    /// Validates ids, names and domains.
    pub fn new(features: Vec<FeatureSpec>) -> Result<Self> {
        let mut by_name = HashMap::with_capacity(features.len());
        for (pos, f) in features.iter().enumerate() {
            if f.id != pos {
                return Err(Error::Model(format!(
                    "feature `{}` has id {} but appears at position {pos}",
                    f.name, f.id
                )));
            }
            if f.name.is_empty() {
                return Err(Error::Model(format!("feature {pos} has an empty name")));
            }
            if by_name.insert(f.name.clone(), pos).is_some() {
                return Err(Error::Model(format!("duplicate feature name `{}`", f.name)));
            }
            match &f.domain {
                Domain::Categorical(values) => {
                    if values.is_empty() {
                        return Err(Error::Model(format!(
                            "categorical feature `{}` has an empty domain",
                            f.name
                        )));
                    }
                    let mut seen = std::collections::HashSet::new();
                    for v in values {
                        if !seen.insert(v) {
                            return Err(Error::Model(format!(
                                "categorical feature `{}` lists value `{v}` twice",
                                f.name
                            )));
                        }
                    }
                }
                Domain::Ordinal { lo, hi } => {
                    if !lo.is_finite() || !hi.is_finite() || lo > hi {
                        return Err(Error::Model(format!(
                            "ordinal feature `{}` has invalid interval [{lo}, {hi}]",
                            f.name
                        )));
                    }
                }
                Domain::Boolean => {}
            }
        }
        Ok(FeatureSpace {
            features,
            by_name,
            grid: None,
        })
    }

    pub fn with_grid(mut self, grid: Grid) -> Result<Self> {
        if grid.rows * grid.cols != self.len() {
            return Err(Error::Model(format!(
                "grid {}x{} does not cover {} features",
                grid.rows,
                grid.cols,
                self.len()
            )));
        }
        self.grid = Some(grid);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn features(&self) -> &[FeatureSpec] {
        &self.features
    }

    pub fn feature(&self, id: usize) -> &FeatureSpec {
        &self.features[id]
    }

    pub fn id_of(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    pub fn name(&self, id: usize) -> &str {
        &self.features[id].name
    }

    pub fn grid(&self) -> Option<Grid> {
        self.grid
    }

    /// Parses a textual cell into a value of feature `id`'s kind.
    ///
    /// The value is not range-checked; use [`FeatureSpace::validate`].
    pub fn parse_value(&self, id: usize, text: &str) -> Result<Value> {
        let spec = &self.features[id];
        let text = text.trim();
        let bad = |detail: String| Error::Domain {
            feature: spec.name.clone(),
            detail,
        };
        match &spec.domain {
            Domain::Categorical(_) => spec
                .category_index(text)
                .map(Value::Category)
                .ok_or_else(|| bad(format!("`{text}` is not a declared value"))),
            Domain::Ordinal { .. } => text
                .parse::<f64>()
                .map(Value::Real)
                .map_err(|_| bad(format!("`{text}` is not a number"))),
            Domain::Boolean => match text {
                "1" | "true" | "True" | "TRUE" => Ok(Value::Bool(true)),
                "0" | "false" | "False" | "FALSE" => Ok(Value::Bool(false)),
                _ => Err(bad(format!("`{text}` is not a boolean"))),
            },
        }
    }

    /// Renders a value the way [`FeatureSpace::parse_value`] reads it.
    pub fn render_value(&self, id: usize, value: &Value) -> String {
        match (&self.features[id].domain, value) {
            (Domain::Categorical(values), Value::Category(k)) if *k < values.len() => {
                values[*k].clone()
            }
            (_, Value::Category(k)) => format!("#{k}"),
            (_, Value::Real(x)) => format_real(*x),
            (_, Value::Bool(b)) => if *b { "1" } else { "0" }.to_string(),
        }
    }

    /// Lists every value of `point` outside its declared domain.
    pub fn validate(&self, point: &Instance) -> Vec<Violation> {
        let mut out = Vec::new();
        if point.values.len() != self.len() {
            out.push(Violation {
                feature: None,
                message: format!(
                    "instance has {} values but the feature space has {} features",
                    point.values.len(),
                    self.len()
                ),
            });
            return out;
        }
        for (spec, value) in self.features.iter().zip(&point.values) {
            let problem = match (&spec.domain, value) {
                (Domain::Categorical(values), Value::Category(k)) => (*k >= values.len())
                    .then(|| format!("category index {k} not in the declared domain")),
                (Domain::Ordinal { lo, hi }, Value::Real(x)) => (!(*lo <= *x && *x <= *hi))
                    .then(|| format!("{} outside [{}, {}]", format_real(*x), format_real(*lo), format_real(*hi))),
                (Domain::Boolean, Value::Bool(_)) => None,
                (d, v) => Some(format!("{} value given for a {} feature", v.kind_name(), d.kind())),
            };
            if let Some(message) = problem {
                out.push(Violation {
                    feature: Some(spec.name.clone()),
                    message,
                });
            }
        }
        out
    }

    /// [`FeatureSpace::validate`] as a `Result`, reporting the first violation.
    pub fn check(&self, point: &Instance) -> Result<()> {
        match self.validate(point).into_iter().next() {
            None => Ok(()),
            Some(v) => Err(Error::Domain {
                feature: v.feature.unwrap_or_else(|| "<instance>".to_string()),
                detail: v.message,
            }),
        }
    }

    /// `{Name=value, ...}` for the features in `ids`.
    pub fn describe(&self, point: &Instance, ids: impl IntoIterator<Item = usize>) -> String {
        let parts: Vec<String> = ids
            .into_iter()
            .map(|i| format!("{}={}", self.name(i), self.render_value(i, &point.values[i])))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

/// Free-function form of [`FeatureSpace::validate`].
pub fn validate_instance(space: &FeatureSpace, point: &Instance) -> Vec<Violation> {
    space.validate(point)
}

fn format_real(x: f64) -> String {
    format!("{x}")
}

/// One feature value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    /// Index into a categorical domain.
    Category(usize),
    Real(f64),
    Bool(bool),
}

impl Value {
    fn kind_name(&self) -> &'static str {
        match self {
            Value::Category(_) => "categorical",
            Value::Real(_) => "real",
            Value::Bool(_) => "boolean",
        }
    }

    pub fn as_real(&self) -> Option<f64> {
        match self {
            Value::Real(x) => Some(*x),
            Value::Bool(b) => Some(if *b { 1.0 } else { 0.0 }),
            Value::Category(_) => None,
        }
    }
}

/// A point of the feature space, optionally labelled with a class id.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub values: Vec<Value>,
    pub label: Option<usize>,
}

impl Instance {
    pub fn new(values: Vec<Value>) -> Self {
        Instance {
            values,
            label: None,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Offending feature, or `None` when the instance shape is wrong.
    pub feature: Option<String>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.feature {
            Some(name) => write!(f, "{name}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}
