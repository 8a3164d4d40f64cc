//! Pure-feedback plants `x_i' = f_i(x_1..x_i, x_{i+1})`, `x_n' = f_n(x_1..x_n, u)`.
//!
//! The controller never sees these maps; only the simulator evaluates them.

use crate::error::{Error, Result};

/// A pure-feedback system of order `n`.
///
/// Implementors provide [`f`](Self::f), which receives exactly the states
/// `x_1..x_i` it may depend on plus the next state (or the input for
/// `i = n`). The structure is enforced by never handing it more.
pub trait PureFeedbackPlant: Send + Sync {
    fn name(&self) -> &str;

    fn order(&self) -> usize;

    /// `f_i(x_bar_i, next)` with `i` 1-based and `x_bar.len() == i`.
    fn f(&self, i: usize, x_bar: &[f64], next_or_u: f64) -> f64;

    /// Checked evaluation of `f_i` at the full state `x`.
    fn eval_f(&self, i: usize, x: &[f64], next_or_u: f64) -> Result<f64> {
        let n = self.order();
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange { index: i, max: n });
        }
        if x.len() < i {
            return Err(Error::DimensionMismatch {
                expected: i,
                got: x.len(),
            });
        }
        Ok(self.f(i, &x[..i], next_or_u))
    }

    /// `x'` for the full state under input `u`.
    fn derivative(&self, x: &[f64], u: f64) -> Result<Vec<f64>> {
        let n = self.order();
        if x.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: x.len(),
            });
        }
        (1..=n)
            .map(|i| self.eval_f(i, x, if i < n { x[i] } else { u }))
            .collect()
    }
}

/// `x1' = x1 + x2 + x2^2`, `x2' = x1 x2 + u + 0.1 sin(u)`.
///
/// The input gain `1 + 0.1 cos(u)` stays within `[0.9, 1.1]`.
#[derive(Debug, Clone, Copy, Default)]
pub struct QuadraticCouplingPlant;

impl PureFeedbackPlant for QuadraticCouplingPlant {
    fn name(&self) -> &str {
        "quadratic-coupling"
    }

    fn order(&self) -> usize {
        2
    }

    fn f(&self, i: usize, x: &[f64], next: f64) -> f64 {
        match i {
            1 => x[0] + next + next * next,
            _ => x[0] * x[1] + next + 0.1 * next.sin(),
        }
    }
}

/// `x1' = x2`, `x2' = u`.
#[derive(Debug, Clone, Copy, Default)]
pub struct DoubleIntegrator;

impl PureFeedbackPlant for DoubleIntegrator {
    fn name(&self) -> &str {
        "double-integrator"
    }

    fn order(&self) -> usize {
        2
    }

    fn f(&self, _i: usize, _x: &[f64], next: f64) -> f64 {
        next
    }
}

pub fn builtin_example_plant() -> QuadraticCouplingPlant {
    QuadraticCouplingPlant
}

/// Names accepted by [`plant_by_name`].
pub const PLANT_NAMES: &[&str] = &["quadratic-coupling", "double-integrator"];

pub fn plant_by_name(name: &str) -> Result<Box<dyn PureFeedbackPlant>> {
    match name {
        "quadratic-coupling" => Ok(Box::new(QuadraticCouplingPlant)),
        "double-integrator" => Ok(Box::new(DoubleIntegrator)),
        _ => Err(Error::Unknown {
            kind: "plant",
            name: name.to_string(),
        }),
    }
}
