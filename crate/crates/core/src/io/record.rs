//! The JSON results file written after a decomposition run. Self-describing
//! and diffable: sparse vectors are stored as (name, value) pairs and the
//! run metadata is enough to reproduce the fit.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionRecord {
    pub tool_version: String,
    /// Unix seconds; omitted under `--no-timestamp`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp_unix: Option<u64>,
    pub seed: u64,
    /// Feature dimension of the input matrix.
    pub p: usize,
    /// Sample dimension of the input matrix.
    pub n: usize,
    pub normalized: bool,
    /// Penalty descriptions with their hyperparameters, e.g. `ogl0(k=100)`.
    pub u_penalty: String,
    pub v_penalty: String,
    pub tol: f64,
    pub max_iter: usize,
    pub factors: Vec<FactorRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorRecord {
    pub d: f64,
    pub variance_explained: f64,
    pub cumulative_variance_explained: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Wall-clock seconds; zeroed under `--no-timestamp`.
    pub wall_time: f64,
    /// Nonzero entries of u as (row name, value).
    pub u: Vec<(String, f64)>,
    /// Nonzero entries of v as (column name, value).
    pub v: Vec<(String, f64)>,
    /// Names of the groups selected on each side, when a group penalty ran.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u_groups: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v_groups: Option<Vec<String>>,
}

pub fn write_record(path: impl AsRef<Path>, record: &DecompositionRecord) -> Result<()> {
    let json = serde_json::to_string_pretty(record)
        .map_err(|e| Error::invalid(format!("cannot serialize record: {e}")))?;
    std::fs::write(path, json + "\n")?;
    Ok(())
}

pub fn read_record(path: impl AsRef<Path>) -> Result<DecompositionRecord> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        line: e.line(),
        msg: e.to_string(),
    })
}
