//! Report envelope shared by every subcommand, plus the three output
//! renderers.

use anyhow::Result;
use approxcover::IntSet;
use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA_VERSION: u32 = 1;

/// Sets larger than this are reported by shape, not by listing.
pub const ELISION_THRESHOLD: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub command: &'static str,
    pub inputs: Value,
    pub results: Value,
    pub timings_ms: Timings,
    pub status: Status,
}

#[derive(Debug, Clone, Serialize)]
pub struct Timings {
    pub total: u64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "state", rename_all = "snake_case")]
pub enum Status {
    Ok,
    VerificationFailure { failing: u64 },
    BudgetExceeded { instances: u64 },
}

/// One finished command, ready to print in any format.
pub struct Emission {
    pub report: RunReport,
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub text: String,
}

pub fn emit(emission: &Emission, format: Format) -> Result<()> {
    use std::io::Write;
    let mut stdout = std::io::stdout();
    match format {
        Format::Json => {
            writeln!(stdout, "{}", serde_json::to_string_pretty(&emission.report)?)?
        }
        Format::Csv => {
            let mut writer = csv::WriterBuilder::new()
                .terminator(csv::Terminator::CRLF)
                .from_writer(stdout);
            writer.write_record(&emission.headers)?;
            for row in &emission.rows {
                writer.write_record(row)?;
            }
            writer.flush()?;
        }
        Format::Text => writeln!(stdout, "{}", emission.text.trim_end())?,
    }
    Ok(())
}

/// A consumer closing the pipe early is not a failure of ours.
pub fn is_broken_pipe(err: &anyhow::Error) -> bool {
    err.chain().any(|cause| {
        if let Some(io) = cause.downcast_ref::<std::io::Error>() {
            return io.kind() == std::io::ErrorKind::BrokenPipe;
        }
        if let Some(c) = cause.downcast_ref::<csv::Error>() {
            if let csv::ErrorKind::Io(io) = c.kind() {
                return io.kind() == std::io::ErrorKind::BrokenPipe;
            }
        }
        false
    })
}

/// JSON value for a set: the element list, or its shape when listing
/// would be unreasonable.
pub fn set_json(s: &IntSet) -> Value {
    if s.len() > ELISION_THRESHOLD {
        json!({
            "elided": true,
            "min": s.min(),
            "max": s.max(),
            "size": s.len(),
            "is_interval": s.is_interval(),
        })
    } else {
        json!(s.to_vec())
    }
}

/// Compact cell text for a set: space-separated elements, or a shape
/// summary when elided.
pub fn set_cell(s: &IntSet) -> String {
    if s.len() > ELISION_THRESHOLD {
        format!(
            "[{}..{}] size {}{}",
            s.min().unwrap(),
            s.max().unwrap(),
            s.len(),
            if s.is_interval() { " interval" } else { "" }
        )
    } else {
        s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
    }
}
