//! Adaptive fixed-time tracking control for uncertain pure-feedback systems
//! under time-varying, possibly partial, state constraints.
//!
//! Layout:
//!
//! - [`numerics`]: sign-preserving fractional powers and scalar inequality checks.
//! - [`constraints`]: the constraint transformation `x -> xi` and its derivatives.
//! - [`rbf`]: Gaussian basis vectors and the amplification `mu`.
//! - [`fdsc`]: the fixed-time dynamic surface filter.
//! - [`plant`]: pure-feedback plant trait and built-in plants.
//! - [`controller`]: virtual controls, control input and adaptive laws.
//! - [`sim`]: closed-loop integration, run metrics and analysis diagnostics.
//! - [`experiment`]: config files, presets, output files and parameter sweeps.
//!
//! ```no_run
//! use fixed_time_safe::experiment::{preset, simulate};
//!
//! let cfg = preset("example1").unwrap();
//! let out = simulate(&cfg).unwrap();
//! println!("settled after {:?} s", out.report.settling_time(0.05));
//! ```

// `!(x > 0.0)` is used on purpose so NaN lands in the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constraints;
pub mod controller;
pub mod error;
pub mod experiment;
pub mod fdsc;
pub mod numerics;
pub mod plant;
pub mod rbf;
pub mod sim;

pub use constraints::{BoundFunction, ConstraintBounds};
pub use controller::{AdaptiveController, ClosedLoopState, ControlEvaluation, ControllerConfig, ReferenceSignal};
pub use error::{Error, Result};
pub use fdsc::FdscParams;
pub use numerics::{sigpow, OddRatioExponent};
pub use plant::PureFeedbackPlant;
pub use rbf::RbfNetworkSpec;
pub use sim::{RunOutput, RunReport, SimConfig, Trajectory};
