//! Only the output is constrained; `x2` runs free.
//!
//! The same controller code handles both states. For `x2` the transformation
//! is the identity.

use std::path::PathBuf;

use fixed_time_safe::experiment::{preset, run_experiment};

pub fn run_example() -> fixed_time_safe::Result<()> {
    let out: PathBuf = std::env::var_os("FTS_OUT")
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("fts-example2"));
    let cfg = preset("example2")?;
    let res = run_experiment(&cfg, &out)?;
    let r = &res.output.report;

    println!("{}", r.termination);
    println!("settling time (|e| <= 0.05): {:?} s", r.settling_time(0.05));
    println!("smallest margin of x1: {:?}", r.min_constraint_margin[0]);
    println!("x2 unconstrained, max |x2| = {:.4}", r.max_abs_x[1]);
    println!("exit status {}", res.exit_status);
    Ok(())
}

#[allow(dead_code)]
fn main() -> fixed_time_safe::Result<()> {
    run_example()
}
