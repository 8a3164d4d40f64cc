//! Both states constrained by time-varying bounds.
//!
//! ```text
//! FTS_OUT=out/example1 cargo run --release --example example1_full_constraints
//! ```

use std::path::PathBuf;

use fixed_time_safe::experiment::{preset, run_experiment};

pub fn run_example() -> fixed_time_safe::Result<()> {
    let out: PathBuf = std::env::var_os("FTS_OUT")
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("fts-example1"));
    let cfg = preset("example1")?;
    let res = run_experiment(&cfg, &out)?;
    let r = &res.output.report;

    println!("{}", r.termination);
    println!("settling time (|e| <= 0.05): {:?} s", r.settling_time(0.05));
    println!("sup |e| after 10 s: {:.4}", r.max_abs_e_after(10.0));
    for (i, m) in r.min_constraint_margin.iter().enumerate() {
        println!("smallest margin of x{}: {:?}", i + 1, m);
    }
    println!("max |u|: {:.3}", r.max_abs_u);
    println!("output in {}", out.display());
    Ok(())
}

#[allow(dead_code)]
fn main() -> fixed_time_safe::Result<()> {
    run_example()
}
