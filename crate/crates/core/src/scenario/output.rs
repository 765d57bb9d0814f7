use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use super::config::Format;
use super::run::RunOutput;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            Cell::Int(i) => Some(*i as f64),
            Cell::Text(_) => None,
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Num(x) => json!(x),
            Cell::Int(i) => json!(i),
            Cell::Text(s) => json!(s),
        }
    }
}

/// Column-named rows; the first column is the independent variable.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        self.rows.iter().map(|r| r[k].as_f64()).collect()
    }

    pub fn check_finite(&self) -> Result<()> {
        for (i, row) in self.rows.iter().enumerate() {
            for (c, cell) in row.iter().enumerate() {
                if let Cell::Num(x) = cell {
                    if !x.is_finite() {
                        return Err(Error::Contract(format!("non-finite {} in row {i}", self.columns[c])));
                    }
                }
            }
        }
        Ok(())
    }

    /// Header plus one line per row; floats carry 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            for (k, cell) in row.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                match cell {
                    Cell::Num(x) => write!(out, "{x:.11e}").expect("string write"),
                    Cell::Int(i) => write!(out, "{i}").expect("string write"),
                    Cell::Text(s) => out.push_str(s),
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "columns": self.columns,
            "rows": self.rows.iter().map(|r| r.iter().map(Cell::to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path.display().to_string(), e))
}

/// Write `<stem>.csv` or `<stem>.json` plus the `<stem>.meta.json` sidecar.
pub fn write_outputs(out: &RunOutput, dir: &Path, stem: &str, format: Format) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir.display().to_string(), e))?;
    let data_path = dir.join(match format {
        Format::Csv => format!("{stem}.csv"),
        Format::Json => format!("{stem}.json"),
    });
    let meta_path = dir.join(format!("{stem}.meta.json"));
    match format {
        Format::Csv => write(&data_path, &out.table.to_csv())?,
        Format::Json => {
            let mut v = out.table.to_json();
            if let (Some(a), Value::Object(m)) = (&out.annotations, &mut v) {
                m.insert("annotations".into(), a.clone());
            }
            write(&data_path, &pretty(&v))?;
        }
    }
    let mut meta = out.metadata.clone();
    if let Value::Object(m) = &mut meta {
        m.insert("data_file".into(), json!(data_path.file_name().and_then(|f| f.to_str())));
        m.insert("format".into(), json!(format));
    }
    write(&meta_path, &pretty(&meta))?;
    Ok(vec![data_path, meta_path])
}
