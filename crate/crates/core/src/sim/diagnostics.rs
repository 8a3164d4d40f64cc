//! Analysis quantities that are not part of the control loop: the
//! conservative settling-time bound and an integrator for the scalar
//! comparison inequality behind practical fixed-time stability.

use crate::controller::ControllerConfig;
use crate::error::{Error, Result};

/// Inputs to [`settling_bound`].
///
/// `k1`, `k2`, `sigma1`, `sigma2` hold one entry per step `1..=n`;
/// `lambda` holds the filter constants for steps `2..=n`. `g_lower` stands in
/// for the unknown lower bound of the input gain.
#[derive(Debug, Clone, PartialEq)]
pub struct SettlingBoundInputs {
    pub k1: Vec<f64>,
    pub k2: Vec<f64>,
    pub sigma1: Vec<f64>,
    pub sigma2: Vec<f64>,
    pub lambda: Vec<f64>,
    pub r1: f64,
    pub r2: f64,
    pub g_lower: f64,
    pub theta: f64,
}

impl SettlingBoundInputs {
    pub fn from_config(cfg: &ControllerConfig, g_lower: f64, theta: f64) -> Self {
        let col = |f: fn(&crate::controller::StepConfig) -> f64| cfg.steps.iter().map(f).collect();
        Self {
            k1: col(|s| s.k1),
            k2: col(|s| s.k2),
            sigma1: col(|s| s.sigma1),
            sigma2: col(|s| s.sigma2),
            lambda: cfg.filters.iter().map(|f| f.lambda).collect(),
            r1: cfg.r1.value(),
            r2: cfg.r2.value(),
            g_lower,
            theta,
        }
    }

    pub fn order(&self) -> usize {
        self.k1.len()
    }

    fn validate(&self) -> Result<()> {
        let n = self.order();
        if n == 0 {
            return Err(Error::invalid("need at least one step"));
        }
        for (name, v, len) in [
            ("k2", &self.k2, n),
            ("sigma1", &self.sigma1, n),
            ("sigma2", &self.sigma2, n),
            ("lambda", &self.lambda, n - 1),
        ] {
            if v.len() != len {
                return Err(Error::invalid(format!("{name} has {} entries, expected {len}", v.len())));
            }
        }
        let all = self.k1.iter().chain(&self.k2).chain(&self.sigma1).chain(&self.sigma2).chain(&self.lambda);
        if all.chain([&self.g_lower]).any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::invalid("gains, filter constants and g_lower must be positive"));
        }
        if !(self.theta > 0.0 && self.theta < 1.0) {
            return Err(Error::invalid(format!("theta must lie in (0, 1), got {}", self.theta)));
        }
        if !(self.r1 > 0.0 && self.r1 < 1.0 && self.r2 > 1.0 && self.r2.is_finite()) {
            return Err(Error::invalid("need 0 < r1 < 1 < r2"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SettlingBound {
    pub xi1: f64,
    pub xi2: f64,
    pub xi2_bar: f64,
    pub t_bound: f64,
}

/// `Xi_j = 2^((1+r_j)/2) min{k_ij, g k_nj, sigma_ij/(1+r_j), g sigma_nj/(1+r_j), 1/lambda_(i+1)}`
/// over `i = 1..n-1`, `Xi2_bar = (3n)^((1-r2)/2) Xi2`, and
/// `T = 2/(Xi1 (1-theta)(1-r1)) + 2/(Xi2_bar (1-theta)(r2-1))`.
pub fn settling_bound(inp: &SettlingBoundInputs) -> Result<SettlingBound> {
    inp.validate()?;
    let n = inp.order();
    let g = inp.g_lower;
    let xi = |k: &[f64], sigma: &[f64], r: f64| {
        let mut m = (g * k[n - 1]).min(g * sigma[n - 1] / (1.0 + r));
        for i in 0..n - 1 {
            m = m.min(k[i]).min(sigma[i] / (1.0 + r)).min(1.0 / inp.lambda[i]);
        }
        2f64.powf(0.5 * (1.0 + r)) * m
    };
    let xi1 = xi(&inp.k1, &inp.sigma1, inp.r1);
    let xi2 = xi(&inp.k2, &inp.sigma2, inp.r2);
    let xi2_bar = (3.0 * n as f64).powf(0.5 * (1.0 - inp.r2)) * xi2;
    let th = 1.0 - inp.theta;
    let t_bound = 2.0 / (xi1 * th * (1.0 - inp.r1)) + 2.0 / (xi2_bar * th * (inp.r2 - 1.0));
    Ok(SettlingBound {
        xi1,
        xi2,
        xi2_bar,
        t_bound,
    })
}

/// Parameters of `dV/dt = -k1 V^gamma - k2 V^beta + delta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma1Params {
    pub k1: f64,
    pub k2: f64,
    pub gamma: f64,
    pub beta: f64,
    pub delta: f64,
    pub theta: f64,
    pub v0: f64,
    pub dt: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma1Outcome {
    /// First time `V` is inside the residual set; infinite if it never got there.
    pub empirical_t: f64,
    pub bound_t: f64,
    pub residual: f64,
    pub residual_ok: bool,
}

/// Integrates the comparison equation from `v0` until `V` enters
/// `min{(delta/(k1 theta))^(1/gamma), (delta/(k2 theta))^(1/beta)}` and
/// compares the entry time with
/// `1/(k1 (1-theta)(1-gamma)) + 1/(k2 (1-theta)(beta-1))`.
///
/// `dt` caps the step; steps also shrink so `V` moves by at most 1% each.
pub fn lemma1_oracle(p: &Lemma1Params) -> Result<Lemma1Outcome> {
    let vals = [p.k1, p.k2, p.gamma, p.beta, p.delta, p.theta, p.v0, p.dt];
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("lemma oracle parameters"));
    }
    if !(p.k1 > 0.0 && p.k2 > 0.0 && p.dt > 0.0 && p.delta >= 0.0 && p.v0 >= 0.0) {
        return Err(Error::invalid("need k1, k2, dt > 0 and delta, V0 >= 0"));
    }
    if !(p.gamma > 0.0 && p.gamma < 1.0 && p.beta > 1.0 && p.theta > 0.0 && p.theta < 1.0) {
        return Err(Error::invalid("need gamma in (0,1), beta > 1, theta in (0,1)"));
    }
    let th = 1.0 - p.theta;
    let bound_t = 1.0 / (p.k1 * th * (1.0 - p.gamma)) + 1.0 / (p.k2 * th * (p.beta - 1.0));
    let residual = (p.delta / (p.k1 * p.theta))
        .powf(1.0 / p.gamma)
        .min((p.delta / (p.k2 * p.theta)).powf(1.0 / p.beta));

    let f = |v: f64| {
        let v = v.max(0.0);
        -p.k1 * v.powf(p.gamma) - p.k2 * v.powf(p.beta) + p.delta
    };
    let cap = 10.0 * bound_t;
    let (mut v, mut t) = (p.v0, 0.0);
    while v > residual {
        if t > cap {
            t = f64::INFINITY;
            break;
        }
        let slope = f(v);
        let h = p.dt.min(0.01 * v / slope.abs());
        let k1 = slope;
        let k2 = f(v + 0.5 * h * k1);
        let k3 = f(v + 0.5 * h * k2);
        let k4 = f(v + h * k3);
        v = (v + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)).max(0.0);
        t += h;
        if !v.is_finite() {
            return Err(Error::NonFinite("comparison trajectory"));
        }
    }
    Ok(Lemma1Outcome {
        empirical_t: t,
        bound_t,
        residual,
        residual_ok: t <= bound_t,
    })
}
