//! Tables, atomic file output and the run manifest.

use crate::error::CliError;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

/// Shortest round-trip decimal, in exponent form for very small or large
/// magnitudes.
fn shortest(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || !a.is_finite() || (1e-4..1e15).contains(&a) {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

impl Cell {
    fn to_text(&self) -> String {
        match self {
            Cell::Num(v) => shortest(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Num(v) => json!(v),
            Cell::Int(v) => json!(v),
            Cell::Text(s) => json!(s),
        }
    }
}

/// Named columns with units; `"1"` marks a dimensionless column.
#[derive(Clone, Debug)]
pub struct Table {
    pub name: String,
    columns: Vec<(String, String)>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[(&str, &str)]) -> Self {
        Self {
            name: name.to_owned(),
            columns: columns.iter().map(|&(c, u)| (c.to_owned(), u.to_owned())).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the columns of {}", self.name);
        self.rows.push(row);
    }

    /// Aligned plain-text rendering for the terminal.
    pub fn render(&self) -> String {
        let head: Vec<String> = self.columns.iter().map(|(c, u)| if u == "1" { c.clone() } else { format!("{c} [{u}]") }).collect();
        let body: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|c| match c {
                        Cell::Num(v) => format!("{v:.6}"),
                        other => other.to_text(),
                    })
                    .collect()
            })
            .collect();
        let widths: Vec<usize> = (0..head.len())
            .map(|k| body.iter().map(|r| r[k].len()).chain([head[k].len()]).max().unwrap_or(0))
            .collect();
        let line = |cells: &[String]| {
            cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect::<Vec<_>>().join("  ") + "\n"
        };
        let mut out = line(&head);
        for r in &body {
            out += &line(r);
        }
        out
    }
}

/// Identifies the run in every output header.
#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub core_version: &'static str,
    pub command: String,
    pub config_sha256: String,
    pub seed: u64,
}

impl Provenance {
    pub fn new(command: &str, config_json: &[u8], seed: u64) -> Self {
        Self {
            tool: "phipsim",
            version: env!("CARGO_PKG_VERSION"),
            core_version: phipsim::VERSION,
            command: command.to_owned(),
            config_sha256: hex::encode(Sha256::digest(config_json)),
            seed,
        }
    }
}

#[derive(Serialize)]
struct Entry {
    path: String,
    sha256: String,
}

/// Collects output files and writes them together at the end of a run.
pub struct Outputs {
    dir: PathBuf,
    format: Format,
    prov: Provenance,
    started: u64,
    pending: Vec<(String, Vec<u8>)>,
}

fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

impl Outputs {
    pub fn new(dir: &Path, format: Format, prov: Provenance) -> Self {
        Self { dir: dir.to_owned(), format, prov, started: unix_now(), pending: Vec::new() }
    }

    /// Queues a file; nothing touches the disk before [`Outputs::finish`].
    fn write(&mut self, name: &str, bytes: Vec<u8>) -> Result<PathBuf, CliError> {
        if self.pending.iter().any(|(n, _)| n == name) {
            return Err(CliError::Output(format!("output {name} written twice")));
        }
        self.pending.push((name.to_owned(), bytes));
        Ok(self.dir.join(name))
    }

    fn persist(&self, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        let path = self.dir.join(name);
        let io = |source| CliError::Io { path: path.clone(), source };
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(io)?;
        tmp.write_all(bytes).map_err(io)?;
        tmp.as_file().sync_all().map_err(io)?;
        tmp.persist(&path).map_err(|e| io(e.error))?;
        Ok(())
    }

    /// Writes `<name>.csv` or `<name>.json` according to the run format.
    pub fn table(&mut self, t: &Table) -> Result<PathBuf, CliError> {
        match self.format {
            Format::Csv => {
                let bytes = self.table_csv(t)?;
                self.write(&format!("{}.csv", t.name), bytes)
            }
            Format::Json => {
                let doc = json!({
                    "provenance": self.prov,
                    "columns": t.columns.iter().map(|(c, u)| json!({"name": c, "unit": u})).collect::<Vec<_>>(),
                    "rows": t.rows.iter().map(|r| r.iter().map(Cell::to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
                });
                self.json(&t.name, &doc)
            }
        }
    }

    fn table_csv(&self, t: &Table) -> Result<Vec<u8>, CliError> {
        let p = &self.prov;
        let mut buf = format!(
            "# {} {} {} (core {})\n# config_sha256={}\n# seed={}\n# units: {}\n",
            p.tool,
            p.version,
            p.command,
            p.core_version,
            p.config_sha256,
            p.seed,
            t.columns.iter().map(|(_, u)| u.as_str()).collect::<Vec<_>>().join(",")
        )
        .into_bytes();
        {
            let mut w = csv::Writer::from_writer(&mut buf);
            let csv_err = |e: csv::Error| CliError::Output(e.to_string());
            w.write_record(t.columns.iter().map(|(c, _)| c)).map_err(csv_err)?;
            for r in &t.rows {
                w.write_record(r.iter().map(Cell::to_text)).map_err(csv_err)?;
            }
            w.flush().map_err(|e| CliError::Output(e.to_string()))?;
        }
        Ok(buf)
    }

    /// Pretty JSON document `<name>.json`.
    pub fn json<S: Serialize>(&mut self, name: &str, value: &S) -> Result<PathBuf, CliError> {
        let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::Output(e.to_string()))?;
        bytes.push(b'\n');
        self.write(&format!("{name}.json"), bytes)
    }

    /// JSON document with the provenance block alongside `data`.
    pub fn json_with_provenance<S: Serialize>(&mut self, name: &str, data: &S) -> Result<PathBuf, CliError> {
        let doc = json!({ "provenance": self.prov, "data": data });
        self.json(name, &doc)
    }

    /// Writes the queued files, each to a temporary file renamed into
    /// place, then `manifest.json` listing them with their hashes.
    pub fn finish(self) -> Result<PathBuf, CliError> {
        std::fs::create_dir_all(&self.dir).map_err(|source| CliError::Io { path: self.dir.clone(), source })?;
        let mut entries = Vec::with_capacity(self.pending.len());
        for (name, bytes) in &self.pending {
            self.persist(name, bytes)?;
            entries.push(Entry { path: name.clone(), sha256: hex::encode(Sha256::digest(bytes)) });
        }
        let manifest = json!({
            "provenance": self.prov,
            "started_unix_s": self.started,
            "finished_unix_s": unix_now(),
            "outputs": entries,
        });
        let mut bytes = serde_json::to_vec_pretty(&manifest).map_err(|e| CliError::Output(e.to_string()))?;
        bytes.push(b'\n');
        self.persist("manifest.json", &bytes)?;
        Ok(self.dir.join("manifest.json"))
    }
}
