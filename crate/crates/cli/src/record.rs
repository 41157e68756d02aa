//! Provenance: one JSON object per invocation, appended to `runs.jsonl` in
//! the directory that received the command's output.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

pub const RUNS_FILE: &str = "runs.jsonl";

#[derive(Debug, Serialize)]
pub struct RunRecord {
    pub command: String,
    pub params: Map<String, Value>,
    pub outputs: Map<String, Value>,
    pub seed: Option<u64>,
    pub timestamp: String,
}

impl RunRecord {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.into(),
            params: Map::new(),
            outputs: Map::new(),
            seed: None,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.params.insert(key.into(), value.into());
        self
    }

    pub fn output(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.outputs.insert(key.into(), value.into());
        self
    }

    /// Append to `runs.jsonl` beside `out`, or in the working directory.
    pub fn append(&self, out: Option<&Path>) -> CliResult<PathBuf> {
        let dir = out
            .and_then(Path::parent)
            .filter(|d| !d.as_os_str().is_empty())
            .map_or_else(|| PathBuf::from("."), Path::to_path_buf);
        std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
        let path = dir.join(RUNS_FILE);
        let mut line = serde_json::to_string(self)?;
        line.push('\n');
        OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .and_then(|mut f| f.write_all(line.as_bytes()))
            .map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }
}
