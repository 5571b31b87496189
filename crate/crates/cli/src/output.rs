//! Result emission. CSV files start with one `#` comment line holding the
//! tool version and the effective configuration; JSON documents carry the
//! same information in an envelope around the result.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;

pub const TOOL: &str = "affinewalk";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
/// Bumped whenever a CSV column layout changes.
pub const CSV_SCHEMA: u32 = 1;

#[derive(Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: ExperimentConfig,
    pub result: T,
}

pub fn open(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("cannot create {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn csv_preamble(w: &mut dyn Write, command: &str, config: &ExperimentConfig) -> Result<()> {
    writeln!(w, "# {TOOL} {VERSION} {command} schema={CSV_SCHEMA} config={}", serde_json::to_string(config)?)?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: Option<&Path>, command: &str, config: &ExperimentConfig, result: &T) -> Result<()> {
    let envelope = Envelope {
        tool: TOOL.to_string(),
        version: VERSION.to_string(),
        command: command.to_string(),
        config: config.clone(),
        result,
    };
    let mut w = open(path)?;
    serde_json::to_writer_pretty(&mut w, &envelope)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}
