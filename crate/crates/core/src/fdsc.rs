//! Fixed-time dynamic surface filter.
//!
//! Each filter state `alpha_f` tracks a virtual control `alpha` through
//!
//! ```text
//! lambda * d(alpha_f)/dt = e^r1 + e^r2 + e,    e = alpha - alpha_f
//! ```
//!
//! with `r1 < 1 < r2` odd ratios. The filter derivative stands in for the
//! analytic derivative of the virtual control in the next backstepping step.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{sigpow, signed_pow, OddRatioExponent};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FdscParams {
    lambda: f64,
    r1: OddRatioExponent,
    r2: OddRatioExponent,
    linear_term: bool,
}

impl FdscParams {
    /// `0 < lambda < 2`, `r1 < 1 < r2`.
    pub fn new(lambda: f64, r1: OddRatioExponent, r2: OddRatioExponent) -> Result<Self> {
        if !(lambda > 0.0 && lambda < 2.0) {
            return Err(Error::invalid(format!(
                "filter time constant must lie in (0, 2), got {lambda}"
            )));
        }
        if !(r1.value() < 1.0 && r2.value() > 1.0) {
            return Err(Error::invalid(format!(
                "filter exponents must satisfy r1 < 1 < r2, got r1={r1}, r2={r2}"
            )));
        }
        Ok(Self {
            lambda,
            r1,
            r2,
            linear_term: true,
        })
    }

    /// Drops the linear `e` term, giving the plain two-power filter used as
    /// a comparison baseline.
    pub fn without_linear_term(mut self) -> Self {
        self.linear_term = false;
        self
    }

    pub fn with_linear_term(mut self, on: bool) -> Self {
        self.linear_term = on;
        self
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn r1(&self) -> OddRatioExponent {
        self.r1
    }

    pub fn r2(&self) -> OddRatioExponent {
        self.r2
    }

    pub fn has_linear_term(&self) -> bool {
        self.linear_term
    }

    // Unchecked rate for an error e = target - filter.
    fn rate(&self, e: f64) -> f64 {
        let linear = if self.linear_term { e } else { 0.0 };
        (signed_pow(e, self.r1.value()) + signed_pow(e, self.r2.value()) + linear) / self.lambda
    }
}

/// `d(alpha_f)/dt` for the filter tracking `alpha_target`.
pub fn filter_rhs(params: &FdscParams, alpha_target: f64, alpha_f: f64) -> Result<f64> {
    if !(alpha_target.is_finite() && alpha_f.is_finite()) {
        return Err(Error::NonFinite("filter input"));
    }
    let e = alpha_target - alpha_f;
    let rate = (sigpow(e, params.r1)? + sigpow(e, params.r2)? + if params.linear_term { e } else { 0.0 })
        / params.lambda;
    if !rate.is_finite() {
        return Err(Error::NonFinite("filter rate"));
    }
    Ok(rate)
}

/// Time for the scalar error `lambda de/dt = -(e^r1 + e^r2 + e)` to reach
/// `|e| <= tol` from `e0`.
///
/// RK4 with `dt` as the largest step. Steps shrink so that `e` changes by at
/// most one percent per step, which keeps the large-error phase of stiff
/// exponents (e.g. `r2 = 3` from `e0 = 1e6`) stable. Gives up after
/// `1e4 * lambda` seconds.
pub fn settle_time_empirical(params: &FdscParams, e0: f64, tol: f64, dt: f64) -> Result<f64> {
    if !e0.is_finite() {
        return Err(Error::NonFinite("initial filter error"));
    }
    if !(tol > 0.0 && dt > 0.0) {
        return Err(Error::invalid(format!("need tol > 0 and dt > 0 (got {tol}, {dt})")));
    }
    let cap = 1e4 * params.lambda;
    let f = |e: f64| -params.rate(e);
    let (mut e, mut t) = (e0, 0.0);
    while e.abs() > tol {
        if t >= cap {
            return Err(Error::NoSettling { cap });
        }
        let slope = f(e);
        let h = dt.min(0.01 * e.abs() / slope.abs());
        let k1 = slope;
        let k2 = f(e + 0.5 * h * k1);
        let k3 = f(e + 0.5 * h * k2);
        let k4 = f(e + h * k3);
        e += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += h;
        if !e.is_finite() {
            return Err(Error::NonFinite("filter error trajectory"));
        }
    }
    Ok(t)
}
