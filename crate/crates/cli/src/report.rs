//! Tables and summaries written to the output directory.

use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde_json::{Map, Number, Value};

use crate::error::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    pub fn opt(x: Option<f64>) -> Cell {
        x.map_or(Cell::Empty, Cell::Num)
    }
}

/// Seventeen significant digits: enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

fn to_csv_field(c: &Cell) -> String {
    match c {
        Cell::Num(x) => fmt_f64(*x),
        Cell::Int(i) => i.to_string(),
        Cell::Bool(b) => b.to_string(),
        Cell::Text(s) => s.clone(),
        Cell::Empty => String::new(),
    }
}

fn to_json(c: &Cell) -> Value {
    match c {
        Cell::Num(x) => Number::from_f64(*x).map_or(Value::Null, Value::Number),
        Cell::Int(i) => Value::from(*i),
        Cell::Bool(b) => Value::Bool(*b),
        Cell::Text(s) => Value::String(s.clone()),
        Cell::Empty => Value::Null,
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        Table { header: header.iter().map(|s| s.as_ref().to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn write_csv(&self, path: &Path) -> Result<(), Failure> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(to_csv_field))?;
        }
        w.flush()?;
        Ok(())
    }

    fn write_json(&self, path: &Path) -> Result<(), Failure> {
        let records: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut m = Map::new();
                for (k, c) in self.header.iter().zip(row) {
                    m.insert(k.clone(), to_json(c));
                }
                Value::Object(m)
            })
            .collect();
        write_text(path, &(serde_json::to_string_pretty(&records)? + "\n"))
    }
}

fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

/// Everything destined for one output directory. Nothing touches the disk
/// until [`Report::write`].
#[derive(Debug, Default)]
pub struct Report {
    pub tables: Vec<(&'static str, Table)>,
    pub summary: Map<String, Value>,
}

impl Report {
    pub fn table(&mut self, stem: &'static str, t: Table) {
        self.tables.push((stem, t));
    }

    pub fn set(&mut self, key: &str, v: impl Into<Value>) {
        self.summary.insert(key.to_string(), v.into());
    }

    pub fn write(&self, dir: &Path, format: Format, timestamp: bool) -> Result<Vec<PathBuf>, Failure> {
        fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
        let mut written = Vec::new();
        for (stem, t) in &self.tables {
            let path = match format {
                Format::Csv => dir.join(format!("{stem}.csv")),
                Format::Json => dir.join(format!("{stem}.json")),
            };
            match format {
                Format::Csv => t.write_csv(&path)?,
                Format::Json => t.write_json(&path)?,
            }
            written.push(path);
        }
        let mut summary = self.summary.clone();
        if timestamp {
            let secs = std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or_default();
            summary.insert("timestamp".into(), Value::from(secs));
        }
        let path = dir.join("summary.json");
        write_text(&path, &(serde_json::to_string_pretty(&Value::Object(summary))? + "\n"))?;
        written.push(path);
        Ok(written)
    }
}

/// Column names for the lattice coordinates of a `d`-dimensional config.
pub fn config_columns(d: usize) -> Vec<String> {
    let mut cols: Vec<String> = if d <= 3 {
        ["qx", "qy", "qz"][..d].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=d).map(|i| format!("q{i}")).collect()
    };
    for a in 1..=d {
        for b in a..=d {
            cols.push(format!("w{a}{b}"));
        }
    }
    cols
}
