use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = concat!("radiant ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct OutputRecord<I, P> {
    pub schema_version: u32,
    pub tool_version: String,
    pub command: String,
    pub inputs: I,
    pub payload: P,
}

impl<I: Serialize, P: Serialize> OutputRecord<I, P> {
    pub fn new(command: &str, inputs: I, payload: P) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool_version: TOOL_VERSION.to_string(),
            command: command.to_string(),
            inputs,
            payload,
        }
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| CliError::Io(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }
}

/// Shortest decimal that round-trips.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// CSV with `#` comment lines and LF endings.
pub struct Csv {
    buf: String,
}

impl Csv {
    pub fn new(command: &str) -> Self {
        let mut buf = String::new();
        let _ = writeln!(buf, "# {TOOL_VERSION} {command} schema={SCHEMA_VERSION}");
        Self { buf }
    }

    pub fn comment(&mut self, key: &str, value: impl std::fmt::Display) {
        let _ = writeln!(self.buf, "# {key}={value}");
    }

    pub fn row<S: AsRef<str>>(&mut self, fields: &[S]) {
        let line: Vec<&str> = fields.iter().map(AsRef::as_ref).collect();
        self.buf.push_str(&line.join(","));
        self.buf.push('\n');
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

pub fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Io(format!("--out {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io(e.to_string()))
        }
    }
}
