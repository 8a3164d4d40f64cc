//! Very wide finite bounds behave like no bounds at all.
//!
//! Runs the first preset with the output bound replaced, once by
//! `|x1| < 1e8` and once by the unbounded variant, and compares the inputs.
//! The `x2` bound stays in place: without it `x2` drifts below -0.5, where
//! the plant's input direction `1 + 2 x2` flips sign, and the loop escapes
//! in finite time whatever transformation is used.

use fixed_time_safe::experiment::{preset, simulate, ExperimentConfig};
use fixed_time_safe::{BoundFunction, ConstraintBounds};

fn compare(base: &ExperimentConfig, states: &[usize]) -> fixed_time_safe::Result<()> {
    let mut wide = base.clone();
    let mut free = base.clone();
    for &i in states {
        wide.controller.steps[i].bounds = ConstraintBounds::symmetric(BoundFunction::constant(1e8))?;
        free.controller.steps[i].bounds = ConstraintBounds::unbounded();
    }
    let a = simulate(&wide)?;
    let b = simulate(&free)?;
    let max_du = a
        .trajectory
        .rows
        .iter()
        .zip(&b.trajectory.rows)
        .map(|(p, q)| (p.u - q.u).abs())
        .fold(0.0, f64::max);
    println!("replacing bounds of states {states:?}:");
    println!("  wide bounds: {}", a.report.termination);
    println!("  unbounded:   {}", b.report.termination);
    println!("  {} matched samples, max |du| = {max_du:e}", a.trajectory.len().min(b.trajectory.len()));
    Ok(())
}

pub fn run_example() -> fixed_time_safe::Result<()> {
    let mut base = preset("example1")?;
    base.sim.horizon = 5.0;
    compare(&base, &[0])?;
    compare(&base, &[0, 1])
}

#[allow(dead_code)]
fn main() -> fixed_time_safe::Result<()> {
    run_example()
}
