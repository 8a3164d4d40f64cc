//! Sweeps the filter time constant of the first preset in parallel.
//!
//! Any scalar in the config can be swept by its dotted path, e.g.
//! `sim.dt` or `controller.steps.0.k1`.

use fixed_time_safe::experiment::{preset, sweep, write_sweep_csv};

pub fn run_example() -> fixed_time_safe::Result<()> {
    let mut cfg = preset("example1")?;
    cfg.sim.horizon = 10.0;
    let rows = sweep(&cfg, "controller.filters.0.lambda", &[0.05, 0.1, 0.5, 1.0], 4, 0.05)?;
    write_sweep_csv(std::io::stdout().lock(), &rows)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> fixed_time_safe::Result<()> {
    run_example()
}
