//! Plot-ready trace files.
//!
//! A block of `# key: value` header lines is followed by the column line
//! `iteration,gap,consensus_error,zeta1,zeta2` and one row per iteration.
//! Floats use [`fmt_float`]; values that were not recorded are written as `NaN`.

use std::path::Path;

use nag_solver::ConvergenceTrace;

use crate::config::fmt_float;
use crate::error::{HarnessError, Result};

pub const COLUMNS: &str = "iteration,gap,consensus_error,zeta1,zeta2";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub iteration: usize,
    pub gap: f64,
    pub consensus_error: f64,
    pub zeta1: f64,
    pub zeta2: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TraceFile {
    pub header: Vec<(String, String)>,
    pub rows: Vec<TraceRow>,
}

impl TraceFile {
    pub fn from_trace(header: Vec<(String, String)>, trace: &ConvergenceTrace) -> Self {
        let rows = trace
            .records
            .iter()
            .map(|r| TraceRow {
                iteration: r.iteration,
                gap: r.gap.unwrap_or(f64::NAN),
                consensus_error: r.consensus_error,
                zeta1: r.zeta1.unwrap_or(f64::NAN),
                zeta2: r.zeta2,
            })
            .collect();
        Self { header, rows }
    }

    pub fn header_value(&self, key: &str) -> Option<&str> {
        self.header
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn gaps(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.gap).collect()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.header {
            out.push_str(&format!("# {k}: {v}\n"));
        }
        out.push_str(COLUMNS);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.iteration,
                fmt_float(r.gap),
                fmt_float(r.consensus_error),
                fmt_float(r.zeta1),
                fmt_float(r.zeta2)
            ));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bad = |msg: String| HarnessError::TraceFormat(msg);
        let mut header = Vec::new();
        let mut lines = text.lines().enumerate();
        let mut saw_columns = false;
        for (n, line) in lines.by_ref() {
            if let Some(rest) = line.strip_prefix('#') {
                let (k, v) = rest
                    .split_once(':')
                    .ok_or_else(|| bad(format!("line {}: header without `key: value`", n + 1)))?;
                header.push((k.trim().to_string(), v.trim().to_string()));
            } else if line == COLUMNS {
                saw_columns = true;
                break;
            } else {
                return Err(bad(format!(
                    "line {}: expected header or `{COLUMNS}`",
                    n + 1
                )));
            }
        }
        if !saw_columns {
            return Err(bad("missing column line".into()));
        }

        let mut rows: Vec<TraceRow> = Vec::new();
        for (n, line) in lines {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 5 {
                return Err(bad(format!(
                    "line {}: expected 5 fields, got {}",
                    n + 1,
                    fields.len()
                )));
            }
            let num = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| bad(format!("line {}: {e}", n + 1)))
            };
            let row = TraceRow {
                iteration: fields[0]
                    .parse()
                    .map_err(|e| bad(format!("line {}: {e}", n + 1)))?,
                gap: num(fields[1])?,
                consensus_error: num(fields[2])?,
                zeta1: num(fields[3])?,
                zeta2: num(fields[4])?,
            };
            if rows
                .last()
                .is_some_and(|prev| prev.iteration >= row.iteration)
            {
                return Err(bad(format!("line {}: iterations must increase", n + 1)));
            }
            rows.push(row);
        }
        Ok(Self { header, rows })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.render()).map_err(|e| HarnessError::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::parse(&text)
    }
}
