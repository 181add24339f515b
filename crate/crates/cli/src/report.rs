//! Report documents and their JSON/CSV serialization.
//!
//! The JSON document has a fixed field order and carries no timestamp, so
//! identical configurations give byte-identical files. Each [`Table`]
//! becomes one CSV file named `<command>_<table>.csv`.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Guard {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Guard {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), pass, detail: detail.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, headers: &[&str]) -> Self {
        Self {
            name: name.into(),
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub config: ExperimentConfig,
    pub pass: bool,
    pub guards: Vec<Guard>,
    pub data: serde_json::Value,
    /// CSV-only; the same numbers sit in `data`
    #[serde(skip)]
    pub tables: Vec<Table>,
}

impl Report {
    pub fn new(config: &ExperimentConfig) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: config.experiment.command().into(),
            config: config.clone(),
            pass: true,
            guards: Vec::new(),
            data: serde_json::Value::Object(Default::default()),
            tables: Vec::new(),
        }
    }

    pub fn guard(&mut self, g: Guard) {
        self.pass &= g.pass;
        self.guards.push(g);
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("report data serializes");
        if let serde_json::Value::Object(map) = &mut self.data {
            map.insert(key.into(), v);
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One line per guard, for the terminal.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        for g in &self.guards {
            s += &format!("[{}] {}: {}\n", if g.pass { "PASS" } else { "FAIL" }, g.name, g.detail);
        }
        s += &format!("{}: {}\n", self.command, if self.pass { "all guards pass" } else { "guard failure" });
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(format!("unknown format '{s}' (use json or csv)")),
        }
    }
}

/// Writes the report into `dir` and returns the files created.
pub fn emit_report(report: &Report, formats: &[Format], dir: &Path) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    if formats.contains(&Format::Json) {
        let path = dir.join(format!("{}.json", report.command));
        fs::write(&path, report.to_json())?;
        written.push(path);
    }
    if formats.contains(&Format::Csv) {
        for t in &report.tables {
            let path = dir.join(format!("{}_{}.csv", report.command, t.name));
            let mut w = csv::Writer::from_path(&path)?;
            w.write_record(&t.headers)?;
            for row in &t.rows {
                w.write_record(row)?;
            }
            w.flush()?;
            written.push(path);
        }
    }
    Ok(written)
}
