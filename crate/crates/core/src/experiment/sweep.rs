use rayon::prelude::*;

use crate::error::{Error, Result};

use super::config::ExperimentConfig;
use super::simulate;

/// One sweep run. A run that could not be set up or simulated keeps its
/// error message and leaves the metrics empty.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub settling_time: Option<f64>,
    pub min_margin: Option<f64>,
    pub max_abs_u: Option<f64>,
    pub violated: Option<bool>,
    pub error: Option<String>,
}

impl SweepRow {
    pub const HEADER: [&'static str; 6] = ["value", "settling_time", "min_margin", "max_abs_u", "violated", "error"];

    pub fn record(&self) -> [String; 6] {
        let f = |v: Option<f64>| v.map_or_else(String::new, |v| v.to_string());
        [
            self.value.to_string(),
            f(self.settling_time),
            f(self.min_margin),
            f(self.max_abs_u),
            self.violated.map_or_else(String::new, |v| v.to_string()),
            self.error.clone().unwrap_or_default(),
        ]
    }
}

fn run_one(base: &ExperimentConfig, path: &str, value: f64, tol: f64) -> SweepRow {
    let outcome = base.set_param(path, value).and_then(|cfg| simulate(&cfg));
    match outcome {
        Ok(out) => {
            let r = &out.report;
            SweepRow {
                value,
                settling_time: r.settling_time(tol),
                min_margin: r.min_margin(),
                max_abs_u: Some(r.max_abs_u),
                violated: Some(r.violated),
                error: (!r.success()).then(|| r.termination.to_string()),
            }
        }
        Err(e) => SweepRow {
            value,
            settling_time: None,
            min_margin: None,
            max_abs_u: None,
            violated: None,
            error: Some(e.to_string()),
        },
    }
}

/// Runs `base` once per value of the scalar at `path` on at most `jobs`
/// threads. Rows come back sorted by value; settling times use `tol`.
pub fn sweep(base: &ExperimentConfig, path: &str, values: &[f64], jobs: usize, tol: f64) -> Result<Vec<SweepRow>> {
    if values.is_empty() {
        return Err(Error::invalid("sweep needs at least one value"));
    }
    // Fail fast on a bad path rather than once per row.
    base.set_param(path, values[0]).map(drop).or_else(|e| match e {
        Error::Config(m) if m.contains("no field") || m.contains("not a numeric") => Err(Error::Config(m)),
        _ => Ok(()),
    })?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::invalid(e.to_string()))?;
    let mut rows: Vec<SweepRow> = pool.install(|| values.par_iter().map(|v| run_one(base, path, *v, tol)).collect());
    rows.sort_by(|a, b| a.value.total_cmp(&b.value));
    Ok(rows)
}

pub fn write_sweep_csv<W: std::io::Write>(w: W, rows: &[SweepRow]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let err = |e: csv::Error| Error::Config(e.to_string());
    out.write_record(SweepRow::HEADER).map_err(err)?;
    for r in rows {
        out.write_record(r.record()).map_err(err)?;
    }
    out.flush().map_err(|e| Error::Config(e.to_string()))
}
