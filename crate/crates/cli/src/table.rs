//! Tabular output: typed cells, deterministic CSV/JSON serialization, and a
//! CSV reader for round-tripping.
//!
//! Floats are rounded to 12 significant digits before formatting, and the
//! rendered text re-parses to the identical value, so emit -> parse -> emit
//! is a fixed point. Field order is fixed by construction and nothing
//! time-dependent is written unless a timestamp is explicitly requested.

use serde_json::{json, Map, Number, Value};

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Cell {
        Cell::Text(s.into())
    }

    fn to_csv_field(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => fmt_f64(*v),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => escape_csv(s),
            Cell::Empty => String::new(),
        }
    }

    fn to_json_value(&self) -> Value {
        match self {
            Cell::Int(v) => Value::Number((*v).into()),
            Cell::Float(v) => Number::from_f64(sig12(*v)).map_or(Value::Null, Value::Number),
            Cell::Bool(v) => Value::Bool(*v),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Empty => Value::Null,
        }
    }
}

/// A column-ordered table with named metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub meta: Vec<(String, Cell)>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Table {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            meta: Vec::new(),
        }
    }

    pub fn push_meta(&mut self, key: &str, value: Cell) {
        self.meta.push((key.to_string(), value));
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// CSV with `# key: value` metadata lines ahead of the header row.
    /// Metadata values are written raw: the whole rest of the line is the
    /// value, so no quoting is needed there.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.meta {
            let raw = match value {
                Cell::Text(s) => s.clone(),
                other => other.to_csv_field(),
            };
            out.push_str(&format!("# {key}: {raw}\n"));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(Cell::to_csv_field).collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    /// A single JSON document `{ "meta": {...}, "rows": [...] }`.
    pub fn to_json(&self) -> String {
        let mut meta = Map::new();
        for (key, value) in &self.meta {
            meta.insert(key.clone(), value.to_json_value());
        }
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (name, cell) in self.columns.iter().zip(row) {
                    obj.insert(name.clone(), cell.to_json_value());
                }
                Value::Object(obj)
            })
            .collect();
        let doc = json!({ "meta": Value::Object(meta), "rows": rows });
        let mut text = serde_json::to_string_pretty(&doc).expect("tables serialize");
        text.push('\n');
        text
    }

    /// Parses CSV produced by [`Table::to_csv`].
    pub fn from_csv(text: &str) -> Result<Table, String> {
        let mut meta = Vec::new();
        let mut lines = text.lines().peekable();
        while let Some(line) = lines.peek() {
            if let Some(rest) = line.strip_prefix("# ") {
                let (key, value) = rest
                    .split_once(": ")
                    .ok_or_else(|| format!("malformed metadata line: {line}"))?;
                meta.push((key.to_string(), infer_cell(value)));
                lines.next();
            } else {
                break;
            }
        }
        let header = lines.next().ok_or("missing header row")?;
        let columns: Vec<String> = split_csv_line(header)?;
        let mut table = Table {
            columns,
            rows: Vec::new(),
            meta,
        };
        for line in lines {
            if line.is_empty() {
                continue;
            }
            let fields = split_csv_line(line)?;
            if fields.len() != table.columns.len() {
                return Err(format!(
                    "row has {} fields, expected {}",
                    fields.len(),
                    table.columns.len()
                ));
            }
            table
                .rows
                .push(fields.iter().map(|f| infer_cell(f)).collect());
        }
        Ok(table)
    }
}

/// Rounds to 12 significant digits (the value that formatting emits).
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        // Normalizes -0.0 as well.
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

/// Formats with 12 significant digits, switching to exponent notation
/// outside a readable magnitude window.
pub fn fmt_f64(x: f64) -> String {
    let y = sig12(x);
    if y == 0.0 {
        return "0".to_string();
    }
    let a = y.abs();
    if (1e-4..1e12).contains(&a) {
        format!("{y}")
    } else {
        format!("{y:e}")
    }
}

fn escape_csv(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') || s.contains('\r') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn split_csv_line(line: &str) -> Result<Vec<String>, String> {
    let mut fields = Vec::new();
    let mut field = String::new();
    let mut chars = line.chars().peekable();
    let mut quoted = false;
    while let Some(c) = chars.next() {
        if quoted {
            match c {
                '"' if chars.peek() == Some(&'"') => {
                    field.push('"');
                    chars.next();
                }
                '"' => quoted = false,
                other => field.push(other),
            }
        } else {
            match c {
                '"' if field.is_empty() => quoted = true,
                ',' => fields.push(std::mem::take(&mut field)),
                other => field.push(other),
            }
        }
    }
    if quoted {
        return Err(format!("unterminated quote in line: {line}"));
    }
    fields.push(field);
    Ok(fields)
}

fn infer_cell(field: &str) -> Cell {
    if field.is_empty() {
        return Cell::Empty;
    }
    match field {
        "true" => return Cell::Bool(true),
        "false" => return Cell::Bool(false),
        _ => {}
    }
    if let Ok(v) = field.parse::<i64>() {
        return Cell::Int(v);
    }
    if let Ok(v) = field.parse::<f64>() {
        if v.is_finite() {
            return Cell::Float(v);
        }
    }
    Cell::Text(field.to_string())
}
