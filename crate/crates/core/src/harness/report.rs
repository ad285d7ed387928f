//! JSON and CSV rendering of experiment reports.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::experiment::{ExperimentReport, ReportRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    #[default]
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(Error::Config(format!("unknown report format {other:?}"))),
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportFormat::Json => "json",
            ReportFormat::Csv => "csv",
        })
    }
}

/// CSV column order.
pub const CSV_COLUMNS: [&str; 22] = [
    "instance",
    "distribution",
    "n",
    "seed",
    "k_best",
    "shift",
    "upper_bound_cost",
    "cycle_found",
    "cycle_value",
    "final_cost",
    "oracle_cost",
    "verdict",
    "gap",
    "sandwich_ok",
    "relaxation_steps",
    "backtracks",
    "rejected_nonsimple",
    "truncated",
    "total_steps",
    "elapsed_us",
    "counterexample",
    "error",
];

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

fn csv_record(r: &ReportRow) -> [String; 22] {
    [
        r.instance.clone(),
        r.distribution.clone(),
        r.n.to_string(),
        r.seed.to_string(),
        r.k_best.to_string(),
        r.shift.to_string(),
        r.upper_bound_cost.to_string(),
        r.cycle_found.to_string(),
        opt(&r.cycle_value),
        opt(&r.final_cost),
        opt(&r.oracle_cost),
        r.verdict.map_or_else(|| "ERROR".to_string(), |v| v.to_string()),
        opt(&r.gap),
        r.sandwich_ok.to_string(),
        r.relaxation_steps.to_string(),
        r.backtracks.to_string(),
        r.rejected_nonsimple.to_string(),
        r.truncated.to_string(),
        r.total_steps.to_string(),
        r.elapsed_us.to_string(),
        opt(&r.counterexample),
        opt(&r.error),
    ]
}

/// JSON: one object with `config`, `rows` and `aggregates`.
/// CSV: a header then one line per row, columns as in [`CSV_COLUMNS`].
pub fn emit_report(report: &ExperimentReport, format: ReportFormat) -> Result<Vec<u8>> {
    match format {
        ReportFormat::Json => {
            let mut out = serde_json::to_vec_pretty(report)?;
            out.push(b'\n');
            Ok(out)
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
            w.write_record(CSV_COLUMNS).map_err(io)?;
            for r in &report.rows {
                w.write_record(csv_record(r)).map_err(io)?;
            }
            w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))
        }
    }
}

pub fn parse_json_report(bytes: &[u8]) -> Result<ExperimentReport> {
    Ok(serde_json::from_slice(bytes)?)
}
