//! Result tables, their CSV/JSON emission and the SHA-256 manifest.
//!
//! CSV layout: `# key: value` metadata lines in key order, one header line,
//! then one line per sweep point. Floats use Rust's shortest round-trip
//! representation and failed cells are written `NaN`. Nothing in the file
//! depends on the wall clock, so identical runs produce identical bytes.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value as Json};
use sha2::{Digest, Sha256};

use crate::setup::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Text(String),
}

impl Value {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Num(x) => Some(*x),
            Value::Text(_) => None,
        }
    }

    fn to_csv_field(&self) -> String {
        match self {
            Value::Num(x) => x.to_string(),
            Value::Text(s) => s.clone(),
        }
    }

    fn parse(field: &str) -> Value {
        match field.parse::<f64>() {
            Ok(x) if x.to_string() == field => Value::Num(x),
            _ => Value::Text(field.to_owned()),
        }
    }

    fn to_json(&self) -> Json {
        match self {
            Value::Num(x) if x.is_finite() => json!(x),
            Value::Num(_) => Json::Null,
            Value::Text(s) => json!(s),
        }
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Num(x)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_owned())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Text(s)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub metadata: BTreeMap<String, String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table { columns: columns.into_iter().map(Into::into).collect(), ..Table::default() }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        // Metadata lives on one comment line each.
        let v = value.to_string().replace(['\n', '\r'], " ");
        self.metadata.insert(key.to_owned(), v);
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric column by name; text cells come back as NaN.
    pub fn numbers(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column(name)?;
        Some(self.rows.iter().map(|r| r[i].as_f64().unwrap_or(f64::NAN)).collect())
    }

    pub fn texts(&self, name: &str) -> Option<Vec<String>> {
        let i = self.column(name)?;
        Some(self.rows.iter().map(|r| r[i].to_csv_field()).collect())
    }

    pub fn to_csv(&self) -> anyhow::Result<String> {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            out.push_str(&format!("# {k}: {v}\n"));
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Value::to_csv_field))?;
        }
        out.push_str(std::str::from_utf8(&w.into_inner()?)?);
        Ok(out)
    }

    pub fn from_csv(text: &str) -> anyhow::Result<Table> {
        let mut metadata = BTreeMap::new();
        for line in text.lines().take_while(|l| l.starts_with('#')) {
            let body = line.trim_start_matches('#').trim_start();
            let (k, v) = body.split_once(": ").with_context(|| format!("bad metadata line {line:?}"))?;
            metadata.insert(k.to_owned(), v.to_owned());
        }
        let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
        let columns: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            if rec.len() != columns.len() {
                bail!("row width {} does not match {} columns", rec.len(), columns.len());
            }
            rows.push(rec.iter().map(Value::parse).collect());
        }
        Ok(Table { metadata, columns, rows })
    }

    pub fn to_json(&self) -> anyhow::Result<String> {
        let rows: Vec<Json> = self.rows.iter().map(|r| Json::Array(r.iter().map(Value::to_json).collect())).collect();
        let doc = json!({ "metadata": self.metadata, "columns": self.columns, "rows": rows });
        let mut s = serde_json::to_string_pretty(&doc)?;
        s.push('\n');
        Ok(s)
    }

    pub fn render(&self, format: Format) -> anyhow::Result<String> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub sha256: String,
    pub bytes: u64,
    pub created_unix: u64,
}

/// `manifest.json`: file name to digest, kept in the output directory.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Manifest {
    pub files: BTreeMap<String, ManifestEntry>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn manifest_path(out: &Path) -> PathBuf {
    out.parent().unwrap_or(Path::new("")).join("manifest.json")
}

/// Writes `contents` to `out` and records it in the sibling `manifest.json`.
pub fn write_with_manifest(out: &Path, contents: &str) -> anyhow::Result<PathBuf> {
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(out, contents).with_context(|| format!("writing {}", out.display()))?;
    let path = manifest_path(out);
    let mut manifest: Manifest = match fs::read_to_string(&path) {
        Ok(text) => serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?,
        Err(_) => Manifest::default(),
    };
    let name = out.file_name().context("output path has no file name")?.to_string_lossy().into_owned();
    let created_unix = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    manifest.files.insert(
        name,
        ManifestEntry { sha256: sha256_hex(contents.as_bytes()), bytes: contents.len() as u64, created_unix },
    );
    fs::write(&path, serde_json::to_string_pretty(&manifest)? + "\n")?;
    Ok(path)
}
