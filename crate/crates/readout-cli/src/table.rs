//! Result tables and their CSV / JSON persistence.

use std::io::Write;
use std::path::{Path, PathBuf};

use readout_core::ode::Tolerances;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::CliResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    /// Masked point (e.g. target gain unreachable or dynamics unstable).
    Unstable,
    Error,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Unstable => "unstable",
            Status::Error => "error",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub values: Vec<Option<f64>>,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Row {
    pub fn ok(values: Vec<Option<f64>>) -> Self {
        Row { values, status: Status::Ok, error: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub version: String,
    /// sha256 of the resolved scenario serialised as JSON.
    pub config_hash: String,
    pub tol_profile: String,
    pub tolerances: Tolerances,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    /// The resolved scenario, verbatim.
    pub config: Value,
    /// Scenario-specific results such as fits.
    #[serde(default)]
    pub extra: Value,
}

pub fn config_hash(config: &Value) -> String {
    let bytes = serde_json::to_vec(config).expect("JSON values serialise");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub rows: Vec<Row>,
    pub metadata: Metadata,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl ResultTable {
    pub fn error_count(&self) -> usize {
        self.rows.iter().filter(|r| r.status == Status::Error).count()
    }

    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r.values[i]).collect())
    }

    /// CSV body: data columns, then `status` and `error`.
    pub fn write_csv<W: Write>(&self, w: W) -> CliResult<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(self.columns.iter().map(String::as_str).chain(["status", "error"]))?;
        for r in &self.rows {
            let mut rec: Vec<String> = r.values.iter().map(|v| v.map(|x| x.to_string()).unwrap_or_default()).collect();
            rec.push(r.status.as_str().into());
            rec.push(r.error.clone().unwrap_or_default());
            wr.write_record(&rec)?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tables serialise")
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| crate::error::CliError::ConfigParse(e.to_string()))
    }

    /// Writes the table. CSV output gets a `<path>.meta.json` sidecar holding
    /// the metadata; JSON output embeds it. Returns the files written.
    pub fn emit(&self, path: &Path, format: Format) -> CliResult<Vec<PathBuf>> {
        match format {
            Format::Json => {
                std::fs::write(path, self.to_json())?;
                Ok(vec![path.to_path_buf()])
            }
            Format::Csv => {
                self.write_csv(std::fs::File::create(path)?)?;
                let mut meta = path.as_os_str().to_owned();
                meta.push(".meta.json");
                let meta = PathBuf::from(meta);
                std::fs::write(&meta, serde_json::to_string_pretty(&self.metadata).expect("metadata serialises"))?;
                Ok(vec![path.to_path_buf(), meta])
            }
        }
    }
}
