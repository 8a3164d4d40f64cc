//! Adaptive fixed-time backstepping controller.
//!
//! Every state `x_i` is mapped through its constraint transformation to
//! `xi_i`; the controller then works on the unconstrained errors
//!
//! ```text
//! zeta_1 = xi_1 - xi_d,     zeta_i = xi_i - alpha_if   (i = 2..n)
//! ```
//!
//! where `xi_d` is the transformed reference and `alpha_if` is the filter
//! state tracking the previous virtual control `alpha_{i-1}`. Step 1
//! produces `alpha_1`, steps `2..n-1` produce `alpha_i`, and step `n` the
//! input `u`. Each step carries a scalar estimate `a_hat_i >= 0` of the
//! squared bound on its unknown nonlinearity.
//!
//! Constrained and unconstrained states follow the same code path; only the
//! values of `(xi, phi, psi)` differ.

use serde::{Deserialize, Serialize};

use crate::constraints::ConstraintBounds;
use crate::error::{Error, Result};
use crate::fdsc::{filter_rhs, FdscParams};
use crate::numerics::{sigpow, OddRatioExponent};
use crate::rbf::RbfNetworkSpec;

/// Reference output `y_d(t)` with analytic derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum ReferenceSignal {
    /// `amplitude * sin(omega t)`
    Sinusoid { amplitude: f64, omega: f64 },
    Constant { value: f64 },
}

impl ReferenceSignal {
    pub fn value(&self, t: f64) -> f64 {
        match *self {
            ReferenceSignal::Sinusoid { amplitude, omega } => amplitude * (omega * t).sin(),
            ReferenceSignal::Constant { value } => value,
        }
    }

    pub fn rate(&self, t: f64) -> f64 {
        match *self {
            ReferenceSignal::Sinusoid { amplitude, omega } => amplitude * omega * (omega * t).cos(),
            ReferenceSignal::Constant { .. } => 0.0,
        }
    }

    /// Second derivative. Not used by the control law.
    pub fn acceleration(&self, t: f64) -> f64 {
        match *self {
            ReferenceSignal::Sinusoid { amplitude, omega } => {
                -amplitude * omega * omega * (omega * t).sin()
            }
            ReferenceSignal::Constant { .. } => 0.0,
        }
    }

    /// Checks `-h1(t) < y_d(t) < h2(t)` on a uniform grid over `[0, horizon]`.
    pub fn validate_within(&self, bounds: &ConstraintBounds, horizon: f64, step: f64) -> Result<()> {
        let count = (horizon / step).ceil().max(0.0) as usize;
        for k in 0..=count {
            let t = (k as f64 * step).min(horizon);
            let y = self.value(t);
            if bounds.margin(y, t) <= 0.0 {
                let (lower, upper) = bounds.interval(t);
                return Err(Error::ConstraintViolated { x: y, lower, upper }.at_time(t));
            }
        }
        Ok(())
    }
}

/// Gains, constraint and regressor network for one backstepping step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepConfig {
    pub bounds: ConstraintBounds,
    pub k1: f64,
    pub k2: f64,
    pub rho: f64,
    pub sigma1: f64,
    pub sigma2: f64,
    pub rbf: RbfNetworkSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterConfig {
    pub lambda: f64,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControllerConfig {
    pub r1: OddRatioExponent,
    pub r2: OddRatioExponent,
    /// Divide the k-terms of the intermediate virtual controls by `phi_i`,
    /// matching the first and last steps. Off by default.
    #[serde(default)]
    pub harmonize_k_scaling: bool,
    /// Keep the linear term of the dynamic surface filters. Turning it off
    /// gives the two-power baseline filter.
    #[serde(default = "default_true")]
    pub fdsc_linear_term: bool,
    pub reference: ReferenceSignal,
    /// Steps `1..=n`.
    pub steps: Vec<StepConfig>,
    /// Filters `2..=n`.
    pub filters: Vec<FilterConfig>,
}

impl ControllerConfig {
    pub fn order(&self) -> usize {
        self.steps.len()
    }

    /// Regressor dimension for 1-based step `i`: `i + 2` below `n`, `n` at the last step.
    pub fn regressor_dim(&self, i: usize) -> usize {
        if i < self.order() {
            i + 2
        } else {
            self.order()
        }
    }

    pub fn filter_params(&self) -> Result<Vec<FdscParams>> {
        self.filters
            .iter()
            .map(|f| Ok(FdscParams::new(f.lambda, self.r1, self.r2)?.with_linear_term(self.fdsc_linear_term)))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.order();
        if n < 2 {
            return Err(Error::invalid(format!("controller order must be >= 2, got {n}")));
        }
        if self.filters.len() != n - 1 {
            return Err(Error::invalid(format!(
                "order {n} needs {} filters, got {}",
                n - 1,
                self.filters.len()
            )));
        }
        if !(self.r1.value() < 1.0 && self.r2.value() > 1.0) {
            return Err(Error::invalid(format!(
                "exponents must satisfy r1 < 1 < r2, got {} and {}",
                self.r1, self.r2
            )));
        }
        self.filter_params()?;
        for (idx, s) in self.steps.iter().enumerate() {
            let i = idx + 1;
            let gains = [("k1", s.k1), ("k2", s.k2), ("rho", s.rho), ("sigma1", s.sigma1), ("sigma2", s.sigma2)];
            for (name, v) in gains {
                if !(v.is_finite() && v > 0.0) {
                    return Err(Error::invalid(format!("{name} must be positive, got {v}")).at_step(i));
                }
            }
            if s.rbf.dim() != self.regressor_dim(i) {
                return Err(Error::DimensionMismatch {
                    expected: self.regressor_dim(i),
                    got: s.rbf.dim(),
                }
                .at_step(i));
            }
        }
        match self.reference {
            ReferenceSignal::Sinusoid { amplitude, omega } if !(amplitude.is_finite() && omega.is_finite()) => {
                Err(Error::invalid("reference parameters must be finite"))
            }
            ReferenceSignal::Constant { value } if !value.is_finite() => {
                Err(Error::invalid("reference value must be finite"))
            }
            _ => Ok(()),
        }
    }
}

/// Plant state, filter states and adaptive estimates (dimension `3n - 1`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedLoopState {
    /// `x_1..x_n`
    pub x: Vec<f64>,
    /// `alpha_2f..alpha_nf`
    pub alpha_f: Vec<f64>,
    /// `a_hat_1..a_hat_n`
    pub a_hat: Vec<f64>,
}

impl ClosedLoopState {
    pub fn order(&self) -> usize {
        self.x.len()
    }

    pub fn dim(&self) -> usize {
        self.x.len() + self.alpha_f.len() + self.a_hat.len()
    }

    pub fn to_flat(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.dim());
        v.extend_from_slice(&self.x);
        v.extend_from_slice(&self.alpha_f);
        v.extend_from_slice(&self.a_hat);
        v
    }

    pub fn from_flat(n: usize, v: &[f64]) -> Result<Self> {
        if v.len() != 3 * n - 1 {
            return Err(Error::DimensionMismatch {
                expected: 3 * n - 1,
                got: v.len(),
            });
        }
        Ok(Self {
            x: v[..n].to_vec(),
            alpha_f: v[n..2 * n - 1].to_vec(),
            a_hat: v[2 * n - 1..].to_vec(),
        })
    }

    fn check(&self, n: usize) -> Result<()> {
        let dims = [(self.x.len(), n), (self.alpha_f.len(), n - 1), (self.a_hat.len(), n)];
        for (got, expected) in dims {
            if got != expected {
                return Err(Error::DimensionMismatch { expected, got });
            }
        }
        Ok(())
    }
}

/// Everything the control law computes at one `(t, state)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlEvaluation {
    pub u: f64,
    pub zeta: Vec<f64>,
    pub xi: Vec<f64>,
    pub xi_d: f64,
    pub xi_d_dot: f64,
    /// Virtual controls `alpha_1..alpha_{n-1}`.
    pub alpha: Vec<f64>,
    pub phi: Vec<f64>,
    pub psi: Vec<f64>,
    pub mu: Vec<f64>,
    pub a_hat_dot: Vec<f64>,
    /// Filter rates for `alpha_2f..alpha_nf`.
    pub alpha_f_dot: Vec<f64>,
}

fn finite(term: &'static str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(term))
    }
}

// Per-step quantities that do not depend on the virtual controls.
struct Signals {
    xi: Vec<f64>,
    phi: Vec<f64>,
    psi: Vec<f64>,
    xi_d: f64,
    xi_d_dot: f64,
    zeta: Vec<f64>,
    mu: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct AdaptiveController {
    config: ControllerConfig,
    filters: Vec<FdscParams>,
}

impl AdaptiveController {
    pub fn new(config: ControllerConfig) -> Result<Self> {
        config.validate()?;
        let filters = config.filter_params()?;
        Ok(Self { config, filters })
    }

    pub fn config(&self) -> &ControllerConfig {
        &self.config
    }

    pub fn order(&self) -> usize {
        self.config.order()
    }

    fn step(&self, i: usize) -> &StepConfig {
        &self.config.steps[i - 1]
    }

    /// `(xi_d, d xi_d/dt)`: the first state's transformation applied to `y_d`,
    /// differentiated by the chain rule.
    pub fn reference_transform(&self, t: f64) -> Result<(f64, f64)> {
        let bounds = &self.step(1).bounds;
        let y = self.config.reference.value(t);
        let tr = bounds.transform(y, t).map_err(|e| e.at_time(t))?;
        Ok((tr.xi, tr.phi * self.config.reference.rate(t) + tr.psi))
    }

    fn signals(&self, state: &ClosedLoopState, t: f64) -> Result<Signals> {
        let n = self.order();
        state.check(n)?;
        let mut xi = Vec::with_capacity(n);
        let mut phi = Vec::with_capacity(n);
        let mut psi = Vec::with_capacity(n);
        for (i, s) in self.config.steps.iter().enumerate() {
            let tr = s.bounds.transform(state.x[i], t).map_err(|e| e.at_step(i + 1))?;
            xi.push(tr.xi);
            phi.push(tr.phi);
            psi.push(tr.psi);
        }
        let (xi_d, xi_d_dot) = self.reference_transform(t)?;
        let mut zeta = Vec::with_capacity(n);
        zeta.push(xi[0] - xi_d);
        zeta.extend(xi[1..].iter().zip(&state.alpha_f).map(|(x, a)| x - a));

        let mut mu = Vec::with_capacity(n);
        let mut regressor = Vec::with_capacity(n + 1);
        #[allow(clippy::needless_range_loop)]
        for i in 1..=n {
            regressor.clear();
            if i < n {
                regressor.extend_from_slice(&state.x[..=i]);
                regressor.push(xi[i]);
            } else {
                regressor.extend_from_slice(&state.x);
            }
            mu.push(self.step(i).rbf.mu(&regressor).map_err(|e| e.at_step(i))?);
        }
        Ok(Signals {
            xi,
            phi,
            psi,
            xi_d,
            xi_d_dot,
            zeta,
            mu,
        })
    }

    pub fn errors_zeta(&self, state: &ClosedLoopState, t: f64) -> Result<Vec<f64>> {
        Ok(self.signals(state, t)?.zeta)
    }

    // alpha_1 = -rho a phi mu^2 z - phi z + xi_d'/phi - psi/phi - (k1/phi) z^r1 - (k2/phi) z^r2
    fn first_virtual_control(&self, s: &Signals, a_hat: f64) -> Result<f64> {
        let g = self.step(1);
        let (phi, psi, mu, z) = (s.phi[0], s.psi[0], s.mu[0], s.zeta[0]);
        let terms = [
            finite("adaptive damping", -g.rho * a_hat * phi * mu * mu * z)?,
            finite("linear damping", -phi * z)?,
            finite("reference feedforward", s.xi_d_dot / phi)?,
            finite("bound-rate compensation", -psi / phi)?,
            finite("r1 feedback", -g.k1 / phi * sigpow(z, self.config.r1)?)?,
            finite("r2 feedback", -g.k2 / phi * sigpow(z, self.config.r2)?)?,
        ];
        finite("alpha_1", terms.iter().sum())
    }

    // alpha_i = -rho a phi mu^2 z - phi z - psi/phi + alpha_if'/phi
    //           - k1 z^r1 - k2 z^r2 - (phi_{i-1}/phi) z_{i-1}
    fn intermediate_virtual_control(&self, s: &Signals, i: usize, a_hat: f64, alpha_f_dot: f64) -> Result<f64> {
        let g = self.step(i);
        let k = i - 1;
        let (phi, psi, mu, z) = (s.phi[k], s.psi[k], s.mu[k], s.zeta[k]);
        let k_scale = if self.config.harmonize_k_scaling { 1.0 / phi } else { 1.0 };
        let terms = [
            finite("adaptive damping", -g.rho * a_hat * phi * mu * mu * z)?,
            finite("linear damping", -phi * z)?,
            finite("bound-rate compensation", -psi / phi)?,
            finite("filter feedforward", alpha_f_dot / phi)?,
            finite("r1 feedback", -g.k1 * k_scale * sigpow(z, self.config.r1)?)?,
            finite("r2 feedback", -g.k2 * k_scale * sigpow(z, self.config.r2)?)?,
            finite("coupling", -s.phi[k - 1] / phi * s.zeta[k - 1])?,
        ];
        finite("alpha_i", terms.iter().sum())
    }

    // u = -rho phi a mu^2 z - psi^2 z/phi - alpha_nf'^2 z/phi
    //     - phi_{n-1}^2 z_{n-1}^2 z/phi - (k1/phi) z^r1 - (k2/phi) z^r2
    fn final_control(&self, s: &Signals, a_hat: f64, alpha_f_dot: f64) -> Result<f64> {
        let n = self.order();
        let g = self.step(n);
        let k = n - 1;
        let (phi, psi, mu, z) = (s.phi[k], s.psi[k], s.mu[k], s.zeta[k]);
        let coupling = s.phi[k - 1] * s.zeta[k - 1];
        let terms = [
            finite("adaptive damping", -g.rho * phi * a_hat * mu * mu * z)?,
            finite("bound-rate damping", -psi * psi * z / phi)?,
            finite("filter-rate damping", -alpha_f_dot * alpha_f_dot * z / phi)?,
            finite("coupling damping", -coupling * coupling * z / phi)?,
            finite("r1 feedback", -g.k1 / phi * sigpow(z, self.config.r1)?)?,
            finite("r2 feedback", -g.k2 / phi * sigpow(z, self.config.r2)?)?,
        ];
        finite("u", terms.iter().sum())
    }

    // a_hat_i' = rho phi^2 mu^2 z^2 - sigma1 a^r1 - sigma2 a^r2
    fn adaptive_rate(&self, s: &Signals, i: usize, a_hat: f64) -> Result<f64> {
        if !(a_hat >= 0.0) {
            return Err(Error::invalid(format!("adaptive estimate must be >= 0, got {a_hat}")).at_step(i));
        }
        let g = self.step(i);
        let k = i - 1;
        let drive = g.rho * (s.phi[k] * s.mu[k] * s.zeta[k]).powi(2);
        let leak = g.sigma1 * sigpow(a_hat, self.config.r1)? + g.sigma2 * sigpow(a_hat, self.config.r2)?;
        finite("adaptive rate", drive - leak).map_err(|e| e.at_step(i))
    }

    pub fn virtual_control_1(&self, state: &ClosedLoopState, t: f64) -> Result<f64> {
        let s = self.signals(state, t)?;
        self.first_virtual_control(&s, state.a_hat[0]).map_err(|e| e.at_step(1))
    }

    /// `alpha_i` for `2 <= i <= n - 1`, given the rate of filter `i`.
    pub fn virtual_control_i(&self, state: &ClosedLoopState, t: f64, i: usize, alpha_f_dot_i: f64) -> Result<f64> {
        let n = self.order();
        if i < 2 || i + 1 > n {
            return Err(Error::IndexOutOfRange {
                index: i,
                max: n.saturating_sub(1),
            });
        }
        let s = self.signals(state, t)?;
        self.intermediate_virtual_control(&s, i, state.a_hat[i - 1], alpha_f_dot_i)
            .map_err(|e| e.at_step(i))
    }

    /// The input `u`, given the rate of the last filter.
    pub fn control_u(&self, state: &ClosedLoopState, t: f64, alpha_nf_dot: f64) -> Result<f64> {
        let n = self.order();
        let s = self.signals(state, t)?;
        self.final_control(&s, state.a_hat[n - 1], alpha_nf_dot)
            .map_err(|e| e.at_step(n))
    }

    /// `d a_hat_i / dt` for 1-based step `i`.
    pub fn adaptive_law(&self, state: &ClosedLoopState, t: f64, i: usize) -> Result<f64> {
        let n = self.order();
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange { index: i, max: n });
        }
        let s = self.signals(state, t)?;
        self.adaptive_rate(&s, i, state.a_hat[i - 1])
    }

    /// Evaluates the full control law in dependency order:
    /// transforms, `alpha_1`, then for each filter `i` its rate (target
    /// `alpha_{i-1}`) followed by `alpha_i`, then `u`, then the adaptive laws.
    pub fn evaluate(&self, state: &ClosedLoopState, t: f64) -> Result<ControlEvaluation> {
        let n = self.order();
        let s = self.signals(state, t)?;
        let mut alpha = Vec::with_capacity(n - 1);
        let mut alpha_f_dot = Vec::with_capacity(n - 1);
        alpha.push(self.first_virtual_control(&s, state.a_hat[0]).map_err(|e| e.at_step(1))?);
        for i in 2..=n {
            let rate = filter_rhs(&self.filters[i - 2], alpha[i - 2], state.alpha_f[i - 2])
                .map_err(|e| e.at_step(i))?;
            alpha_f_dot.push(rate);
            if i < n {
                alpha.push(
                    self.intermediate_virtual_control(&s, i, state.a_hat[i - 1], rate)
                        .map_err(|e| e.at_step(i))?,
                );
            }
        }
        let u = self
            .final_control(&s, state.a_hat[n - 1], alpha_f_dot[n - 2])
            .map_err(|e| e.at_step(n))?;
        let a_hat_dot = (1..=n)
            .map(|i| self.adaptive_rate(&s, i, state.a_hat[i - 1]))
            .collect::<Result<Vec<_>>>()?;
        Ok(ControlEvaluation {
            u,
            zeta: s.zeta,
            xi: s.xi,
            xi_d: s.xi_d,
            xi_d_dot: s.xi_d_dot,
            alpha,
            phi: s.phi,
            psi: s.psi,
            mu: s.mu,
            a_hat_dot,
            alpha_f_dot,
        })
    }

    /// Filter states that start on their targets: `alpha_if(0) = alpha_{i-1}(0)`.
    pub fn initial_filter_states(&self, x: &[f64], a_hat: &[f64], t: f64) -> Result<Vec<f64>> {
        let n = self.order();
        let mut state = ClosedLoopState {
            x: x.to_vec(),
            alpha_f: vec![0.0; n - 1],
            a_hat: a_hat.to_vec(),
        };
        state.check(n)?;
        // zeta_i depends on alpha_if, so recompute signals after each fill.
        for i in 2..=n {
            let s = self.signals(&state, t)?;
            let target = if i == 2 {
                self.first_virtual_control(&s, state.a_hat[0]).map_err(|e| e.at_step(1))?
            } else {
                self.intermediate_virtual_control(&s, i - 1, state.a_hat[i - 2], 0.0)
                    .map_err(|e| e.at_step(i - 1))?
            };
            state.alpha_f[i - 2] = target;
        }
        Ok(state.alpha_f)
    }

    pub fn initial_state(&self, x: &[f64], a_hat: &[f64], t: f64) -> Result<ClosedLoopState> {
        let alpha_f = self.initial_filter_states(x, a_hat, t)?;
        Ok(ClosedLoopState {
            x: x.to_vec(),
            alpha_f,
            a_hat: a_hat.to_vec(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::BoundFunction;

    fn ratio(m: u32, n: u32) -> OddRatioExponent {
        OddRatioExponent::new(m, n).unwrap()
    }

    fn step(bounds: ConstraintBounds, dim: usize) -> StepConfig {
        StepConfig {
            bounds,
            k1: 2.0,
            k2: 2.0,
            rho: 0.0005,
            sigma1: 0.2,
            sigma2: 0.5,
            rbf: RbfNetworkSpec::new(vec![vec![0.5; dim]], vec![3.0]).unwrap(),
        }
    }

    fn unbounded_config(n: usize, reference: ReferenceSignal) -> ControllerConfig {
        ControllerConfig {
            r1: ratio(97, 99),
            r2: ratio(99, 97),
            harmonize_k_scaling: false,
            fdsc_linear_term: true,
            reference,
            steps: (1..=n)
                .map(|i| step(ConstraintBounds::unbounded(), if i < n { i + 2 } else { n }))
                .collect(),
            filters: vec![FilterConfig { lambda: 0.1 }; n - 1],
        }
    }

    fn example1_bounds() -> ConstraintBounds {
        ConstraintBounds::new(BoundFunction::sin(0.5, 0.3, 1.0), BoundFunction::sin(0.6, -0.2, 1.0)).unwrap()
    }

    #[test]
    fn config_validation() {
        let reference = ReferenceSignal::Constant { value: 0.0 };
        assert!(AdaptiveController::new(unbounded_config(2, reference)).is_ok());
        let mut c = unbounded_config(2, reference);
        c.steps[0].k1 = 0.0;
        assert!(AdaptiveController::new(c).is_err());
        let mut c = unbounded_config(2, reference);
        c.filters.clear();
        assert!(AdaptiveController::new(c).is_err());
        let mut c = unbounded_config(2, reference);
        c.steps[1].rbf = RbfNetworkSpec::new(vec![vec![0.0; 3]], vec![1.0]).unwrap();
        assert!(matches!(
            AdaptiveController::new(c).unwrap_err().root(),
            Error::DimensionMismatch { expected: 2, got: 3 }
        ));
        let mut c = unbounded_config(2, reference);
        c.filters[0].lambda = 2.5;
        assert!(AdaptiveController::new(c).is_err());
        let mut c = unbounded_config(2, reference);
        c.steps.truncate(1);
        c.filters.clear();
        assert!(AdaptiveController::new(c).is_err());
    }

    #[test]
    fn reference_transform_examples() {
        let c = AdaptiveController::new(unbounded_config(
            2,
            ReferenceSignal::Sinusoid {
                amplitude: 0.1,
                omega: 0.5,
            },
        ))
        .unwrap();
        let (xd, xdd) = c.reference_transform(0.0).unwrap();
        assert_eq!(xd, 0.0);
        assert!((xdd - 0.05).abs() < 1e-15);

        let mut cfg = unbounded_config(
            2,
            ReferenceSignal::Sinusoid {
                amplitude: 0.1,
                omega: 0.5,
            },
        );
        cfg.steps[0].bounds = example1_bounds();
        let c = AdaptiveController::new(cfg).unwrap();
        let (xd, _) = c.reference_transform(0.0).unwrap();
        assert!((xd - 0.275 * (0.5f64 / 0.6).ln()).abs() < 1e-15);
        assert!((xd + 0.050138).abs() < 1e-6);

        let mut cfg = unbounded_config(2, ReferenceSignal::Constant { value: 0.2 });
        cfg.steps[0].bounds = ConstraintBounds::symmetric(BoundFunction::constant(1.0)).unwrap();
        let c = AdaptiveController::new(cfg).unwrap();
        assert_eq!(c.reference_transform(3.0).unwrap().1, 0.0);

        let mut cfg = unbounded_config(2, ReferenceSignal::Constant { value: 2.0 });
        cfg.steps[0].bounds = ConstraintBounds::symmetric(BoundFunction::constant(1.0)).unwrap();
        let c = AdaptiveController::new(cfg).unwrap();
        assert!(c.reference_transform(0.0).is_err());
    }

    #[test]
    fn zeta_vanishes_on_inverse_images() {
        let mut cfg = unbounded_config(
            3,
            ReferenceSignal::Sinusoid {
                amplitude: 0.1,
                omega: 0.5,
            },
        );
        cfg.steps[0].bounds = example1_bounds();
        cfg.steps[1].bounds = ConstraintBounds::symmetric(BoundFunction::cos(0.5, 0.2, 1.0)).unwrap();
        let c = AdaptiveController::new(cfg).unwrap();
        let t = 0.8;
        let alpha_f = vec![0.3, -1.2];
        let (xd, _) = c.reference_transform(t).unwrap();
        let targets = [xd, alpha_f[0], alpha_f[1]];
        let x: Vec<f64> = c
            .config()
            .steps
            .iter()
            .zip(targets)
            .map(|(s, v)| s.bounds.xi_inverse(v, t))
            .collect();
        let state = ClosedLoopState {
            x,
            alpha_f,
            a_hat: vec![0.0; 3],
        };
        for z in c.errors_zeta(&state, t).unwrap() {
            assert!(z.abs() < 1e-12, "{z}");
        }
    }

    #[test]
    fn zeta_unbounded_identity() {
        let c = AdaptiveController::new(unbounded_config(2, ReferenceSignal::Constant { value: 0.0 })).unwrap();
        let state = ClosedLoopState {
            x: vec![0.0, 1.7],
            alpha_f: vec![0.0],
            a_hat: vec![0.0, 0.0],
        };
        assert_eq!(c.errors_zeta(&state, 0.0).unwrap(), vec![0.0, 1.7]);
    }

    #[test]
    fn zero_error_gives_zero_controls() {
        let c = AdaptiveController::new(unbounded_config(3, ReferenceSignal::Constant { value: 0.0 })).unwrap();
        let state = ClosedLoopState {
            x: vec![0.0, 0.0, 0.0],
            alpha_f: vec![0.0, 0.0],
            a_hat: vec![0.4, 0.2, 0.1],
        };
        assert_eq!(c.virtual_control_1(&state, 0.0).unwrap(), 0.0);
        assert_eq!(c.virtual_control_i(&state, 0.0, 2, 0.0).unwrap(), 0.0);
        assert_eq!(c.control_u(&state, 0.0, 0.0).unwrap(), 0.0);
        let ev = c.evaluate(&state, 0.0).unwrap();
        assert_eq!(ev.u, 0.0);
        assert_eq!(ev.alpha, vec![0.0, 0.0]);
        assert_eq!(ev.alpha_f_dot, vec![0.0, 0.0]);
    }

    #[test]
    fn virtual_control_index_range() {
        let c = AdaptiveController::new(unbounded_config(2, ReferenceSignal::Constant { value: 0.0 })).unwrap();
        let state = ClosedLoopState {
            x: vec![0.0, 0.0],
            alpha_f: vec![0.0],
            a_hat: vec![0.0, 0.0],
        };
        assert!(c.virtual_control_i(&state, 0.0, 2, 0.0).is_err());
        assert!(c.virtual_control_i(&state, 0.0, 1, 0.0).is_err());
        assert!(c.adaptive_law(&state, 0.0, 3).is_err());
    }

    #[test]
    fn control_u_structural_reduction() {
        let c = AdaptiveController::new(unbounded_config(2, ReferenceSignal::Constant { value: 0.0 })).unwrap();
        let z = 0.37;
        let a = 1.3;
        let state = ClosedLoopState {
            x: vec![0.0, z],
            alpha_f: vec![0.0],
            a_hat: vec![0.0, a],
        };
        let g = &c.config().steps[1];
        let mu = g.rbf.mu(&[0.0, z]).unwrap();
        let expected = -g.rho * a * mu * mu * z - g.k1 * z.powf(97.0 / 99.0) - g.k2 * z.powf(99.0 / 97.0);
        let u = c.control_u(&state, 0.0, 0.0).unwrap();
        assert!((u - expected).abs() < 1e-14);
    }

    #[test]
    fn adaptive_law_examples() {
        let c = AdaptiveController::new(unbounded_config(2, ReferenceSignal::Constant { value: 0.0 })).unwrap();
        let mut state = ClosedLoopState {
            x: vec![0.0, 0.0],
            alpha_f: vec![0.0],
            a_hat: vec![0.0, 0.0],
        };
        assert_eq!(c.adaptive_law(&state, 0.0, 1).unwrap(), 0.0);
        state.x[0] = 0.3;
        assert!(c.adaptive_law(&state, 0.0, 1).unwrap() > 0.0);
        state.x[0] = 0.0;
        state.a_hat[0] = 1.0;
        assert!((c.adaptive_law(&state, 0.0, 1).unwrap() + 0.7).abs() < 1e-15);
        state.a_hat[0] = -1e-3;
        assert!(c.adaptive_law(&state, 0.0, 1).is_err());
    }

    #[test]
    fn harmonized_scaling_changes_only_intermediate_steps() {
        let mut cfg = unbounded_config(3, ReferenceSignal::Constant { value: 0.0 });
        for s in &mut cfg.steps {
            s.bounds = ConstraintBounds::symmetric(BoundFunction::constant(2.0)).unwrap();
        }
        let plain = AdaptiveController::new(cfg.clone()).unwrap();
        cfg.harmonize_k_scaling = true;
        let harmonized = AdaptiveController::new(cfg).unwrap();
        let state = ClosedLoopState {
            x: vec![0.4, -0.5, 0.9],
            alpha_f: vec![0.1, 0.2],
            a_hat: vec![0.1, 0.1, 0.1],
        };
        let (a, b) = (plain.evaluate(&state, 0.0).unwrap(), harmonized.evaluate(&state, 0.0).unwrap());
        assert_eq!(a.alpha[0], b.alpha[0]);
        assert_ne!(a.alpha[1], b.alpha[1]);
        assert_eq!(a.alpha_f_dot[0], b.alpha_f_dot[0]);
    }

    #[test]
    fn initial_filters_start_on_targets() {
        let mut cfg = unbounded_config(
            3,
            ReferenceSignal::Sinusoid {
                amplitude: 0.1,
                omega: 0.5,
            },
        );
        cfg.steps[0].bounds = example1_bounds();
        let c = AdaptiveController::new(cfg).unwrap();
        let state = c.initial_state(&[0.2, -0.2, 0.1], &[0.0, 0.0, 0.0], 0.0).unwrap();
        let ev = c.evaluate(&state, 0.0).unwrap();
        assert_eq!(ev.alpha_f_dot, vec![0.0, 0.0]);
        assert_eq!(state.alpha_f, ev.alpha);
    }

    #[test]
    fn state_dimension_checks() {
        let c = AdaptiveController::new(unbounded_config(2, ReferenceSignal::Constant { value: 0.0 })).unwrap();
        let bad = ClosedLoopState {
            x: vec![0.0, 0.0],
            alpha_f: vec![],
            a_hat: vec![0.0, 0.0],
        };
        assert!(c.evaluate(&bad, 0.0).is_err());
        let s = ClosedLoopState::from_flat(2, &[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        assert_eq!(s.x, vec![1.0, 2.0]);
        assert_eq!(s.alpha_f, vec![3.0]);
        assert_eq!(s.a_hat, vec![4.0, 5.0]);
        assert_eq!(s.to_flat(), vec![1.0, 2.0, 3.0, 4.0, 5.0]);
        assert!(ClosedLoopState::from_flat(2, &[0.0; 4]).is_err());
    }
}
