//! Conservative settling-time bound for the preset gains, plus the scalar
//! comparison equation it is derived from.

use fixed_time_safe::experiment::preset;
use fixed_time_safe::sim::{lemma1_oracle, settling_bound, Lemma1Params, SettlingBoundInputs};

pub fn run_example() -> fixed_time_safe::Result<()> {
    let cfg = preset("example1")?;
    for theta in [0.1, 0.5, 0.9] {
        let b = settling_bound(&SettlingBoundInputs::from_config(&cfg.controller, 0.9, theta))?;
        println!(
            "theta = {theta}: Xi1 = {:.4}, Xi2_bar = {:.4}, T <= {:.1} s",
            b.xi1, b.xi2_bar, b.t_bound
        );
    }

    println!("\ncomparison equation dV/dt = -V^0.5 - V^2 + 0.1");
    for v0 in [1.0, 1e2, 1e4, 1e8] {
        let out = lemma1_oracle(&Lemma1Params {
            k1: 1.0,
            k2: 1.0,
            gamma: 0.5,
            beta: 2.0,
            delta: 0.1,
            theta: 0.5,
            v0,
            dt: 1e-4,
        })?;
        println!(
            "V0 = {v0:e}: enters V <= {:.3} at t = {:.3} (bound {:.1})",
            out.residual, out.empirical_t, out.bound_t
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> fixed_time_safe::Result<()> {
    run_example()
}
