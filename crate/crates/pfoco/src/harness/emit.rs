//! CSV and JSON output. Every JSON document carries `schema: 1`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use super::run::RegretTrace;
use crate::error::{Error, Result};

pub const SCHEMA: u32 = 1;

pub const TRACE_HEADER: [&str; 5] = ["t", "loss", "cum_loss", "cum_regret_vs_final_comparator", "loo_calls"];

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    }
}

/// Per-round CSV; an empty trace gives a header-only file.
pub fn write_trace_csv(trace: &RegretTrace, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    w.write_record(TRACE_HEADER).map_err(csv_err(path))?;
    for r in &trace.records {
        w.write_record([
            r.t.to_string(),
            r.loss.to_string(),
            r.cum_loss.to_string(),
            r.cum_regret.to_string(),
            r.loo_calls.to_string(),
        ])
        .map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

#[derive(Serialize)]
pub struct TraceSummary<'a> {
    pub schema: u32,
    pub config: &'a super::run::ExperimentConfig,
    pub resolved: &'a super::run::Resolved,
    pub horizon: usize,
    pub final_regret: f64,
    pub comparator: &'a crate::point::Point,
    pub loo_calls_total: u64,
    pub loo_calls_per_round_max: u64,
    pub membership_checks: usize,
    pub membership_violations: usize,
    pub restarts: Option<usize>,
}

pub fn summarize(trace: &RegretTrace) -> TraceSummary<'_> {
    let mut prev = 0;
    let mut per_round_max = 0;
    for r in &trace.records {
        per_round_max = per_round_max.max(r.loo_calls - prev);
        prev = r.loo_calls;
    }
    TraceSummary {
        schema: SCHEMA,
        config: &trace.config,
        resolved: &trace.resolved,
        horizon: trace.records.len(),
        final_regret: trace.regret,
        comparator: &trace.comparator,
        loo_calls_total: trace.loo_calls_total,
        loo_calls_per_round_max: per_round_max,
        membership_checks: trace.membership_checks,
        membership_violations: 0,
        restarts: trace.restarts,
    }
}

pub fn write_json<T: Serialize + ?Sized>(value: &T, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    w.write_all(b"\n").map_err(io_err(path))?;
    w.flush().map_err(io_err(path))
}

pub fn read_json(path: &Path) -> Result<serde_json::Value> {
    let file = File::open(path).map_err(io_err(path))?;
    serde_json::from_reader(std::io::BufReader::new(file)).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes `<stem>.csv` and `<stem>.json` for a trace.
pub fn emit_trace(trace: &RegretTrace, stem: &Path) -> Result<()> {
    write_trace_csv(trace, &stem.with_extension("csv"))?;
    write_json(&summarize(trace), &stem.with_extension("json"))
}
