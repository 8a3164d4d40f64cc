//! A user-defined third-order plant driven through the library API directly.
//!
//! `x1` and `x2` are boxed in, `x3` is free. The controller never sees the
//! plant equations; only the simulator calls them.

use fixed_time_safe::controller::{FilterConfig, StepConfig};
use fixed_time_safe::sim::{self, SimConfig};
use fixed_time_safe::{
    AdaptiveController, BoundFunction, ConstraintBounds, ControllerConfig, OddRatioExponent, PureFeedbackPlant,
    RbfNetworkSpec, ReferenceSignal,
};

/// `x1' = 0.5 x1 + x2 + 0.1 sin x2`, `x2' = x1 x2 + x3 + 0.1 sin x3`,
/// `x3' = x2 + u + 0.1 sin u`.
struct ThirdOrder;

impl PureFeedbackPlant for ThirdOrder {
    fn name(&self) -> &str {
        "third-order"
    }

    fn order(&self) -> usize {
        3
    }

    fn f(&self, i: usize, x: &[f64], next: f64) -> f64 {
        let nonaffine = next + 0.1 * next.sin();
        match i {
            1 => 0.5 * x[0] + nonaffine,
            2 => x[0] * x[1] + nonaffine,
            _ => x[1] + nonaffine,
        }
    }
}

fn step(bounds: ConstraintBounds, dim: usize) -> fixed_time_safe::Result<StepConfig> {
    let pattern: Vec<f64> = (0..dim).map(|j| if j % 2 == 0 { -1.0 } else { 1.0 }).collect();
    Ok(StepConfig {
        bounds,
        k1: 2.0,
        k2: 2.0,
        rho: 0.0005,
        sigma1: 0.2,
        sigma2: 0.5,
        rbf: RbfNetworkSpec::scaled_pattern(&pattern, 5, 3.0)?,
    })
}

pub fn run_example() -> fixed_time_safe::Result<()> {
    let config = ControllerConfig {
        r1: OddRatioExponent::new(97, 99)?,
        r2: OddRatioExponent::new(99, 97)?,
        harmonize_k_scaling: false,
        fdsc_linear_term: true,
        reference: ReferenceSignal::Sinusoid {
            amplitude: 0.3,
            omega: 1.0,
        },
        steps: vec![
            step(ConstraintBounds::symmetric(BoundFunction::constant(1.0))?, 3)?,
            step(ConstraintBounds::symmetric(BoundFunction::cos(3.0, 0.5, 0.5))?, 4)?,
            step(ConstraintBounds::unbounded(), 3)?,
        ],
        filters: vec![FilterConfig { lambda: 0.1 }; 2],
    };
    let controller = AdaptiveController::new(config)?;
    let sim_cfg = SimConfig {
        horizon: 15.0,
        record_stride: 1000,
        ..SimConfig::default()
    };
    let out = sim::run_from(&ThirdOrder, &controller, &sim_cfg, &[0.1, 0.3, 0.0], &[0.0; 3])?;
    println!("{}", out.report.termination);
    println!("{:>6} {:>9} {:>9} {:>9} {:>9}", "t", "x1", "yd", "x2", "u");
    for r in &out.trajectory.rows {
        println!("{:>6.1} {:>9.4} {:>9.4} {:>9.4} {:>9.3}", r.t, r.x[0], r.yd, r.x[1], r.u);
    }
    println!("settling time (|e| <= 0.05): {:?}", out.report.settling_time(0.05));
    println!("smallest margins: {:?}", out.report.min_constraint_margin);
    Ok(())
}

#[allow(dead_code)]
fn main() -> fixed_time_safe::Result<()> {
    run_example()
}
