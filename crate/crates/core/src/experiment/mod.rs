//! Experiment configuration files, built-in presets, output files and
//! parameter sweeps.
//!
//! Configs are TOML. Bound functions are tables tagged by `family`
//! (`constant`, `sinusoid`, `cosinusoid`, `unbounded`).

mod config;
mod output;
mod preset;
mod sweep;

use std::path::{Path, PathBuf};

pub use config::{ExperimentConfig, InitialConfig};
pub use output::{
    exit_status, parse_report, plot_script, report_lines, write_figure_data, write_report, write_trajectory_csv,
    PLOT_SCRIPT_FILE, REPORT_FILE, REPORT_TOLERANCES, TRAJECTORY_FILE,
};
pub use preset::{preset, PRESET_NAMES};
pub use sweep::{sweep, write_sweep_csv, SweepRow};

use crate::error::{Error, Result};
use crate::sim::{self, RunOutput};

/// Runs the closed loop described by `cfg` without writing anything.
pub fn simulate(cfg: &ExperimentConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let plant = cfg.plant()?;
    let controller = cfg.controller()?;
    let initial = cfg.initial_state(&controller)?;
    sim::run(plant.as_ref(), &controller, &cfg.sim, &initial)
}

#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub output: RunOutput,
    pub exit_status: i32,
    pub out_dir: PathBuf,
    pub files: Vec<String>,
}

/// Simulates and writes `trajectory.csv`, `report.txt`, the figure data
/// files and a gnuplot script into `out_dir`.
pub fn run_experiment(cfg: &ExperimentConfig, out_dir: &Path) -> Result<ExperimentOutcome> {
    let output = simulate(cfg)?;
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    write_trajectory_csv(&out_dir.join(TRAJECTORY_FILE), &output.trajectory)?;
    write_report(&out_dir.join(REPORT_FILE), &report_lines(cfg, &output)?)?;
    let mut files = vec![TRAJECTORY_FILE.to_string(), REPORT_FILE.to_string()];
    let figures = write_figure_data(out_dir, &output.trajectory)?;
    let script = out_dir.join(PLOT_SCRIPT_FILE);
    std::fs::write(&script, plot_script(&figures)).map_err(|e| Error::io(&script, e))?;
    files.extend(figures);
    files.push(PLOT_SCRIPT_FILE.to_string());
    Ok(ExperimentOutcome {
        exit_status: exit_status(&output),
        output,
        out_dir: out_dir.to_path_buf(),
        files,
    })
}
