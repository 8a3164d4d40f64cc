use crate::constraints::{BoundFunction, ConstraintBounds};
use crate::controller::{ControllerConfig, FilterConfig, ReferenceSignal, StepConfig};
use crate::error::{Error, Result};
use crate::numerics::OddRatioExponent;
use crate::rbf::RbfNetworkSpec;
use crate::sim::SimConfig;

use super::config::{ExperimentConfig, InitialConfig};

pub const PRESET_NAMES: &[&str] = &["example1", "example2"];

/// Built-in configurations for the second-order example plant.
///
/// `example1` constrains both states; `example2` leaves `x2` unbounded and
/// changes the initial state and `k12`. Adaptive estimates start at zero and
/// the filter starts on its target in both.
pub fn preset(name: &str) -> Result<ExperimentConfig> {
    match name {
        "example1" => Ok(example1()),
        "example2" => Ok(example2()),
        _ => Err(Error::Unknown {
            kind: "preset",
            name: name.to_string(),
        }),
    }
}

fn ratio(m: u32, n: u32) -> OddRatioExponent {
    OddRatioExponent::new(m, n).expect("odd ratio")
}

fn network(pattern: &[f64]) -> RbfNetworkSpec {
    RbfNetworkSpec::scaled_pattern(pattern, 5, 3.0).expect("valid network")
}

fn example1() -> ExperimentConfig {
    let x1_bounds = ConstraintBounds::new(BoundFunction::sin(0.5, 0.3, 1.0), BoundFunction::sin(0.6, -0.2, 1.0))
        .expect("valid bounds");
    let x2_bounds = ConstraintBounds::symmetric(BoundFunction::cos(0.5, 0.2, 1.0)).expect("valid bounds");
    let step = |bounds, sigma1, sigma2, pattern: &[f64]| StepConfig {
        bounds,
        k1: 2.0,
        k2: 2.0,
        rho: 0.0005,
        sigma1,
        sigma2,
        rbf: network(pattern),
    };
    ExperimentConfig {
        plant: "quadratic-coupling".into(),
        out_dir: None,
        sim: SimConfig {
            dt: 1e-3,
            horizon: 30.0,
            ..SimConfig::default()
        },
        initial: InitialConfig {
            x: vec![0.2, -0.2],
            a_hat: Some(vec![0.0, 0.0]),
            alpha_f: None,
        },
        controller: ControllerConfig {
            r1: ratio(97, 99),
            r2: ratio(99, 97),
            harmonize_k_scaling: false,
            fdsc_linear_term: true,
            reference: ReferenceSignal::Sinusoid {
                amplitude: 0.1,
                omega: 0.5,
            },
            steps: vec![
                step(x1_bounds, 0.2, 0.5, &[-1.0, 0.0, 1.0]),
                step(x2_bounds, 0.3, 0.4, &[-1.0, 1.0]),
            ],
            filters: vec![FilterConfig { lambda: 0.1 }],
        },
    }
}

fn example2() -> ExperimentConfig {
    let mut cfg = example1();
    cfg.initial.x = vec![0.2, -0.3];
    cfg.controller.steps[1].bounds = ConstraintBounds::unbounded();
    cfg.controller.steps[0].k1 = 2.0;
    cfg.controller.steps[0].k2 = 1.0;
    cfg.controller.steps[1].k1 = 2.0;
    cfg.controller.steps[1].k2 = 2.0;
    cfg
}
