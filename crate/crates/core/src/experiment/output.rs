use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::sim::{RunOutput, Termination, Trajectory};

use super::config::ExperimentConfig;

pub const TRAJECTORY_FILE: &str = "trajectory.csv";
pub const REPORT_FILE: &str = "report.txt";
pub const PLOT_SCRIPT_FILE: &str = "plot.gp";

/// Settling tolerances written to the report.
pub const REPORT_TOLERANCES: &[f64] = &[0.05, 0.01];

fn num(v: f64) -> String {
    format!("{v}")
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "undefined".to_string(), num)
}

fn csv_writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    csv::Writer::from_path(path).map_err(|e| Error::io(path, e))
}

fn write_table(path: &Path, header: &[String], rows: impl Iterator<Item = Vec<f64>>) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(header).map_err(|e| Error::io(path, e))?;
    for r in rows {
        w.write_record(r.iter().map(|v| num(*v))).map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_trajectory_csv(path: &Path, traj: &Trajectory) -> Result<()> {
    write_table(path, &Trajectory::header(traj.n), traj.rows.iter().map(|r| r.to_record()))
}

/// Plot data files: the output against the reference and its bounds, each
/// further state against its bounds, the tracking error and the input.
/// Returns the file names written.
pub fn write_figure_data(dir: &Path, traj: &Trajectory) -> Result<Vec<String>> {
    let mut names = Vec::new();
    let mut emit = |name: String, header: &[&str], rows: Vec<Vec<f64>>| -> Result<()> {
        let header: Vec<String> = header.iter().map(|s| s.to_string()).collect();
        write_table(&dir.join(&name), &header, rows.into_iter())?;
        names.push(name);
        Ok(())
    };
    let rows = &traj.rows;
    emit(
        "fig_tracking.csv".into(),
        &["t", "x1", "yd", "lower", "upper"],
        rows.iter().map(|r| vec![r.t, r.x[0], r.yd, -r.bounds[0].0, r.bounds[0].1]).collect(),
    )?;
    for i in 1..traj.n {
        emit(
            format!("fig_state{}.csv", i + 1),
            &["t", "x", "lower", "upper"],
            rows.iter().map(|r| vec![r.t, r.x[i], -r.bounds[i].0, r.bounds[i].1]).collect(),
        )?;
    }
    emit("fig_error.csv".into(), &["t", "e"], rows.iter().map(|r| vec![r.t, r.e]).collect())?;
    emit("fig_input.csv".into(), &["t", "u"], rows.iter().map(|r| vec![r.t, r.u]).collect())?;
    Ok(names)
}

/// A gnuplot script that renders the figure data files to PNG.
pub fn plot_script(figures: &[String]) -> String {
    let mut s = String::from("set datafile separator ','\nset key autotitle columnhead\nset terminal pngcairo size 900,500\n");
    for f in figures {
        let stem = f.trim_end_matches(".csv");
        let _ = writeln!(s, "\nset output '{stem}.png'");
        let series = if f == "fig_error.csv" || f == "fig_input.csv" { 2 } else if f == "fig_tracking.csv" { 5 } else { 4 };
        let plots: Vec<String> = (2..=series)
            .map(|c| format!("'{f}' using 1:{c} with lines"))
            .collect();
        let _ = writeln!(s, "plot {}", plots.join(", "));
    }
    s
}

/// Process exit status for a finished run: 0 on success, 2 after a
/// constraint violation, 3 after divergence.
pub fn exit_status(out: &RunOutput) -> i32 {
    match out.report.termination {
        Termination::Diverged { .. } => 3,
        _ if out.report.violated => 2,
        _ => 0,
    }
}

pub fn report_lines(cfg: &ExperimentConfig, out: &RunOutput) -> Result<Vec<(String, String)>> {
    let r = &out.report;
    let mut kv: Vec<(String, String)> = Vec::new();
    let mut put = |k: &str, v: String| kv.push((k.to_string(), v));
    put("plant", cfg.plant.clone());
    put("n", r.n.to_string());
    put("integrator", cfg.sim.integrator.to_string());
    put("dt", num(cfg.sim.dt));
    put("horizon", num(cfg.sim.horizon));
    put("record_stride", cfg.sim.record_stride.to_string());
    put("abort_on_violation", cfg.sim.abort_on_violation.to_string());
    put("init.a_hat", if cfg.initial.a_hat.is_some() { "given" } else { "zero" }.into());
    put("init.alpha_f", if cfg.initial.alpha_f.is_some() { "given" } else { "on_target" }.into());
    put("termination", r.termination.to_string());
    put("exit_status", exit_status(out).to_string());
    put("violated", r.violated.to_string());
    put("first_violation_time", opt(r.first_violation.map(|v| v.0)));
    put(
        "first_violation_state",
        r.first_violation.map_or_else(|| "undefined".into(), |v| v.1.to_string()),
    );
    put("steps", r.steps_taken.to_string());
    put("final_time", num(r.final_time));
    for tol in REPORT_TOLERANCES {
        put(&format!("settling_time_{tol}"), opt(r.settling_time(*tol)));
    }
    for after in [5.0, 10.0] {
        put(&format!("max_abs_e_after_{after}"), num(r.max_abs_e_after(after)));
    }
    for (i, m) in r.min_constraint_margin.iter().enumerate() {
        put(
            &format!("min_margin_state{}", i + 1),
            m.map_or_else(|| "unbounded".into(), num),
        );
    }
    for (i, m) in r.max_abs_x.iter().enumerate() {
        put(&format!("max_abs_x{}", i + 1), num(*m));
    }
    put("max_abs_u", num(r.max_abs_u));
    for (i, m) in r.min_a_hat.iter().enumerate() {
        put(&format!("min_ahat{}", i + 1), num(*m));
    }
    kv.extend(cfg.flattened()?);
    Ok(kv)
}

pub fn write_report(path: &Path, lines: &[(String, String)]) -> Result<()> {
    let mut s = String::new();
    for (k, v) in lines {
        let _ = writeln!(s, "{k}={v}");
    }
    std::fs::write(path, s).map_err(|e| Error::io(path, e))
}

/// Parses `key=value` lines back into pairs.
pub fn parse_report(text: &str) -> Vec<(String, String)> {
    text.lines()
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}
