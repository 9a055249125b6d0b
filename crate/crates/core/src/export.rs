//! Tabular output: CSV with `#` metadata lines, or JSON records carrying the
//! same payload.
//!
//! Floats are written with Rust's shortest round-trip `{:e}` form, so equal
//! values always produce equal bytes.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::modes::{DispersionRoots, ModePair};
use crate::quantum::WaveField;
use crate::telegraph::ThermalField;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Num(v) => format!("{v:e}"),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            // non-finite floats have no JSON form
            Cell::Num(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Text(s) => Value::from(s.as_str()),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    /// Panics if the row width differs from the column count.
    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the column count");
        self.rows.push(row);
    }

    pub fn extend(&mut self, other: Table) {
        assert_eq!(self.columns, other.columns, "tables must share columns");
        self.rows.extend(other.rows);
    }

    pub fn thermal_snapshots() -> Self {
        Self::new(["t", "x", "T"])
    }

    pub fn quantum_snapshots() -> Self {
        Self::new(["t", "x", "re_psi", "im_psi", "abs2_psi"])
    }

    pub fn norm_log() -> Self {
        Self::new(["t", "norm"])
    }

    pub fn mode_table() -> Self {
        Self::new(["V", "re_omega1", "im_omega1", "re_omega2", "im_omega2", "regime"])
    }

    pub fn dispersion_table() -> Self {
        Self::new([
            "k",
            "re_omega_minus",
            "im_omega_minus",
            "re_omega_plus",
            "im_omega_plus",
            "branch_kind",
        ])
    }

    pub fn push_thermal(&mut self, field: &ThermalField) {
        for (i, &v) in field.values.iter().enumerate() {
            self.push(vec![field.time.into(), field.grid.x(i).into(), v.into()]);
        }
    }

    pub fn push_wave(&mut self, field: &WaveField) {
        for (i, v) in field.psi.iter().enumerate() {
            self.push(vec![
                field.time.into(),
                field.grid.x(i).into(),
                v.re.into(),
                v.im.into(),
                v.norm_sqr().into(),
            ]);
        }
    }

    pub fn push_norm(&mut self, time: f64, norm: f64) {
        self.push(vec![time.into(), norm.into()]);
    }

    pub fn push_mode(&mut self, pair: &ModePair) {
        self.push(vec![
            pair.potential.into(),
            pair.omega1.re.into(),
            pair.omega1.im.into(),
            pair.omega2.re.into(),
            pair.omega2.im.into(),
            pair.regime.label().into(),
        ]);
    }

    pub fn push_dispersion(&mut self, k: f64, roots: &DispersionRoots) {
        let (m, p) = (roots.minus_omega(), roots.plus_omega());
        let kind = match roots {
            DispersionRoots::Real { .. } => "real",
            DispersionRoots::Complex { .. } => "complex",
        };
        self.push(vec![
            k.into(),
            m.re.into(),
            m.im.into(),
            p.re.into(),
            p.im.into(),
            kind.into(),
        ]);
    }

    /// Metadata pairs become `# key: value` lines ahead of the header row.
    pub fn to_csv(&self, metadata: &[(String, String)]) -> String {
        let mut out = String::new();
        for (k, v) in metadata {
            let _ = writeln!(out, "# {k}: {}", v.replace('\n', " "));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self, metadata: &[(String, String)]) -> String {
        let meta: Map<String, Value> = metadata
            .iter()
            .map(|(k, v)| (k.clone(), Value::from(v.as_str())))
            .collect();
        let records: Vec<Value> = self
            .rows
            .iter()
            .map(|row| Value::Object(self.columns.iter().cloned().zip(row.iter().map(Cell::json)).collect()))
            .collect();
        let mut doc = Map::new();
        doc.insert("metadata".into(), Value::Object(meta));
        doc.insert(
            "columns".into(),
            Value::Array(self.columns.iter().map(|c| Value::from(c.as_str())).collect()),
        );
        doc.insert("records".into(), Value::Array(records));
        let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("JSON values always serialize");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format, metadata: &[(String, String)]) -> String {
        match format {
            Format::Csv => self.to_csv(metadata),
            Format::Json => self.to_json(metadata),
        }
    }
}

/// The part of a rendered CSV file below its `#` metadata lines.
pub fn csv_payload(text: &str) -> &str {
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        if !line.starts_with('#') {
            break;
        }
        offset += line.len();
    }
    &text[offset..]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::PhysicalConstants;
    use crate::grid::SpatialGrid;
    use crate::modes::string_modes;

    #[test]
    fn csv_layout() {
        let g = SpatialGrid::periodic(0.0, 1.0, 8).unwrap();
        let f = ThermalField::from_fn(g, |x| 2.0 * x).unwrap();
        let mut t = Table::thermal_snapshots();
        t.push_thermal(&f);
        let csv = t.to_csv(&[("tool".into(), "x 1.0".into())]);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("# tool: x 1.0"));
        assert_eq!(lines.next(), Some("t,x,T"));
        assert_eq!(lines.next(), Some("0e0,0e0,0e0"));
        assert_eq!(lines.next(), Some("0e0,1.25e-1,2.5e-1"));
        assert!(csv_payload(&csv).starts_with("t,x,T\n"));
    }

    #[test]
    fn json_carries_same_rows() {
        let k = PhysicalConstants::natural();
        let mut t = Table::mode_table();
        for v in [0.0, 0.5, 1.0] {
            t.push_mode(&string_modes(v, &k).unwrap());
        }
        let doc: Value = serde_json::from_str(&t.to_json(&[])).unwrap();
        let recs = doc["records"].as_array().unwrap();
        assert_eq!(recs.len(), 3);
        assert_eq!(recs[1]["regime"], "critical");
        assert_eq!(recs[2]["im_omega1"], 1.0);
    }

    #[test]
    fn text_cells_are_quoted() {
        assert_eq!(Cell::from("a,b").csv(), "\"a,b\"");
        assert_eq!(Cell::Num(f64::NAN).json(), Value::Null);
    }
}
