//! Fixed-step closed-loop simulation, trajectory recording and run metrics.

pub mod diagnostics;

use serde::{Deserialize, Serialize};

use crate::controller::{AdaptiveController, ClosedLoopState, ControlEvaluation};
use crate::error::{Error, Result};
use crate::plant::PureFeedbackPlant;

pub use diagnostics::{lemma1_oracle, settling_bound, Lemma1Outcome, Lemma1Params, SettlingBound, SettlingBoundInputs};

/// Distance from the boundary at which the control law sees a state that
/// has crossed it.
pub const VIOLATION_INSET: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Integrator {
    #[default]
    Rk4,
    Euler,
}

impl std::fmt::Display for Integrator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Integrator::Rk4 => "rk4",
            Integrator::Euler => "euler",
        })
    }
}

fn default_true() -> bool {
    true
}

fn default_stride() -> usize {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub dt: f64,
    pub horizon: f64,
    #[serde(default)]
    pub integrator: Integrator,
    #[serde(default = "default_true")]
    pub abort_on_violation: bool,
    #[serde(default = "default_stride")]
    pub record_stride: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            horizon: 30.0,
            integrator: Integrator::Rk4,
            abort_on_violation: true,
            record_stride: 1,
        }
    }
}

impl SimConfig {
    /// A zero horizon is accepted and produces an empty run.
    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::invalid(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.horizon.is_finite() && self.horizon >= 0.0) {
            return Err(Error::invalid(format!("horizon must be >= 0, got {}", self.horizon)));
        }
        if self.record_stride == 0 {
            return Err(Error::invalid("record_stride must be >= 1"));
        }
        Ok(())
    }

    /// Number of integration steps. A horizon within rounding of a whole
    /// number of steps is not padded with an extra sliver step.
    pub fn steps(&self) -> usize {
        let s = self.horizon / self.dt;
        let r = s.round();
        if (s - r).abs() <= 1e-9 * r.max(1.0) {
            r as usize
        } else {
            s.ceil() as usize
        }
    }

    fn time(&self, k: usize, steps: usize) -> f64 {
        if k == steps {
            self.horizon
        } else {
            k as f64 * self.dt
        }
    }
}

/// `d/dt` of the stacked state `[x, alpha_f, a_hat]`.
pub fn closed_loop_rhs(
    plant: &dyn PureFeedbackPlant,
    controller: &AdaptiveController,
    state: &ClosedLoopState,
    t: f64,
) -> Result<Vec<f64>> {
    check_orders(plant, controller)?;
    let ev = controller.evaluate(state, t).map_err(|e| e.at_time(t))?;
    assemble_rhs(plant, state, &ev).map_err(|e| e.at_time(t))
}

fn check_orders(plant: &dyn PureFeedbackPlant, controller: &AdaptiveController) -> Result<()> {
    if plant.order() != controller.order() {
        return Err(Error::DimensionMismatch {
            expected: controller.order(),
            got: plant.order(),
        });
    }
    Ok(())
}

fn assemble_rhs(plant: &dyn PureFeedbackPlant, state: &ClosedLoopState, ev: &ControlEvaluation) -> Result<Vec<f64>> {
    let mut d = plant.derivative(&state.x, ev.u)?;
    if let Some(i) = d.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite("plant derivative").at_step(i + 1));
    }
    d.extend_from_slice(&ev.alpha_f_dot);
    d.extend_from_slice(&ev.a_hat_dot);
    Ok(d)
}

/// One recorded sample.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRow {
    pub t: f64,
    pub x: Vec<f64>,
    pub xi: Vec<f64>,
    pub zeta: Vec<f64>,
    pub u: f64,
    pub a_hat: Vec<f64>,
    pub alpha_f: Vec<f64>,
    pub yd: f64,
    pub e: f64,
    /// `(h_i1(t), h_i2(t))`, infinite for unbounded states.
    pub bounds: Vec<(f64, f64)>,
    /// `min(x + h1, h2 - x)`, infinite for unbounded states.
    pub margin: Vec<f64>,
}

impl TrajectoryRow {
    pub fn to_record(&self) -> Vec<f64> {
        let mut r = vec![self.t];
        r.extend(&self.x);
        r.extend(&self.xi);
        r.extend(&self.zeta);
        r.push(self.u);
        r.extend(&self.a_hat);
        r.extend(&self.alpha_f);
        r.push(self.yd);
        r.push(self.e);
        for (h1, h2) in &self.bounds {
            r.push(*h1);
            r.push(*h2);
        }
        r.extend(&self.margin);
        r
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub n: usize,
    pub rows: Vec<TrajectoryRow>,
}

impl Trajectory {
    /// `t,x1..xn,xi1..xin,zeta1..zetan,u,ahat1..ahatn,alphaf2..alphafn,yd,e,h11,h12,..,hn1,hn2,margin1..marginn`
    pub fn header(n: usize) -> Vec<String> {
        let mut h = vec!["t".to_string()];
        for prefix in ["x", "xi", "zeta"] {
            h.extend((1..=n).map(|i| format!("{prefix}{i}")));
        }
        h.push("u".into());
        h.extend((1..=n).map(|i| format!("ahat{i}")));
        h.extend((2..=n).map(|i| format!("alphaf{i}")));
        h.push("yd".into());
        h.push("e".into());
        for i in 1..=n {
            h.push(format!("h{i}1"));
            h.push(format!("h{i}2"));
        }
        h.extend((1..=n).map(|i| format!("margin{i}")));
        h
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.t).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Termination {
    Completed,
    /// First boundary crossing with `abort_on_violation` set.
    Violation { t: f64, state: usize },
    /// A non-finite value or failed evaluation.
    Diverged { t: f64, message: String },
}

impl std::fmt::Display for Termination {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Termination::Completed => f.write_str("completed"),
            Termination::Violation { t, state } => write!(f, "violation of state {state} at t={t}"),
            Termination::Diverged { t, message } => write!(f, "diverged at t={t}: {message}"),
        }
    }
}

/// Metrics computed from every integration step, not just the recorded rows.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub n: usize,
    pub steps_taken: usize,
    pub final_time: f64,
    /// `(t, x1 - yd)` at every step.
    pub error_trace: Vec<(f64, f64)>,
    /// Smallest margin per state; `None` for unbounded states.
    pub min_constraint_margin: Vec<Option<f64>>,
    pub max_abs_x: Vec<f64>,
    pub max_abs_u: f64,
    pub min_a_hat: Vec<f64>,
    pub violated: bool,
    /// `(t, state index)` of the first boundary crossing.
    pub first_violation: Option<(f64, usize)>,
    pub termination: Termination,
}

impl RunReport {
    /// First sample time after which `|e| <= tol` for the rest of the run.
    /// `None` if the last sample is outside the band or nothing was run.
    pub fn settling_time(&self, tol: f64) -> Option<f64> {
        let trace = &self.error_trace;
        match trace.iter().rposition(|(_, e)| !(e.abs() <= tol)) {
            None => trace.first().map(|(t, _)| *t),
            Some(k) if k + 1 < trace.len() => Some(trace[k + 1].0),
            Some(_) => None,
        }
    }

    /// `sup |e(t)|` over samples with `t >= after`; zero when there are none.
    pub fn max_abs_e_after(&self, after: f64) -> f64 {
        self.error_trace
            .iter()
            .filter(|(t, _)| *t >= after)
            .fold(0.0, |m, (_, e)| m.max(e.abs()))
    }

    /// Smallest margin over all bounded states.
    pub fn min_margin(&self) -> Option<f64> {
        self.min_constraint_margin.iter().flatten().copied().reduce(f64::min)
    }

    pub fn diverged(&self) -> bool {
        matches!(self.termination, Termination::Diverged { .. })
    }

    pub fn success(&self) -> bool {
        !self.violated && self.termination == Termination::Completed
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub trajectory: Trajectory,
    pub report: RunReport,
}

struct Recorder<'a> {
    controller: &'a AdaptiveController,
    trajectory: Trajectory,
    report: RunReport,
}

impl Recorder<'_> {
    fn observe(&mut self, state: &ClosedLoopState, ev: &ControlEvaluation, t: f64, record: bool) {
        let cfg = self.controller.config();
        let yd = cfg.reference.value(t);
        let e = state.x[0] - yd;
        let r = &mut self.report;
        r.steps_taken += 1;
        r.final_time = t;
        r.error_trace.push((t, e));
        r.max_abs_u = r.max_abs_u.max(ev.u.abs());
        for (m, x) in r.max_abs_x.iter_mut().zip(&state.x) {
            *m = m.max(x.abs());
        }
        for (m, a) in r.min_a_hat.iter_mut().zip(&state.a_hat) {
            *m = m.min(*a);
        }
        let margin: Vec<f64> = cfg
            .steps
            .iter()
            .zip(&state.x)
            .map(|(s, x)| s.bounds.margin(*x, t))
            .collect();
        for (i, (slot, m)) in r.min_constraint_margin.iter_mut().zip(&margin).enumerate() {
            if !cfg.steps[i].bounds.is_bounded() {
                continue;
            }
            *slot = Some(slot.map_or(*m, |v| v.min(*m)));
            if !(*m > 0.0) && r.first_violation.is_none() {
                r.violated = true;
                r.first_violation = Some((t, i + 1));
            }
        }
        if record {
            let bounds = cfg
                .steps
                .iter()
                .map(|s| (s.bounds.lower().value(t), s.bounds.upper().value(t)))
                .collect();
            self.trajectory.rows.push(TrajectoryRow {
                t,
                x: state.x.clone(),
                xi: ev.xi.clone(),
                zeta: ev.zeta.clone(),
                u: ev.u,
                a_hat: state.a_hat.clone(),
                alpha_f: state.alpha_f.clone(),
                yd,
                e,
                bounds,
                margin,
            });
        }
    }
}

// State handed to the controller: bounded states outside their box are
// pulled back just inside it.
fn controller_view(controller: &AdaptiveController, state: &ClosedLoopState, t: f64) -> ClosedLoopState {
    let mut view = state.clone();
    for (x, s) in view.x.iter_mut().zip(&controller.config().steps) {
        if s.bounds.is_bounded() && !(s.bounds.margin(*x, t) > VIOLATION_INSET) {
            let (lo, hi) = s.bounds.interval(t);
            let inset = VIOLATION_INSET.min(0.25 * (hi - lo));
            *x = x.clamp(lo + inset, hi - inset);
        }
    }
    view
}

fn axpy(base: &[f64], h: f64, k: &[f64]) -> Vec<f64> {
    base.iter().zip(k).map(|(b, d)| b + h * d).collect()
}

fn first_non_finite(state: &[f64], n: usize) -> Option<String> {
    let k = state.iter().position(|v| !v.is_finite())?;
    Some(if k < n {
        format!("x{}", k + 1)
    } else if k < 2 * n - 1 {
        format!("alphaf{}", k - n + 2)
    } else {
        format!("ahat{}", k - 2 * n + 2)
    })
}

/// Integrates the closed loop over `[0, sim.horizon]`.
///
/// Returns `Err` only when the inputs are unusable (dimension mismatch,
/// initial state outside its bounds, negative estimates). Divergence ends
/// the run early, as does a boundary crossing when `abort_on_violation` is
/// set; either way the partial trajectory comes back with the reason in
/// [`RunReport::termination`]. Crossings are checked on the true state at
/// the end of every step, and the violating sample is recorded.
pub fn run(
    plant: &dyn PureFeedbackPlant,
    controller: &AdaptiveController,
    sim: &SimConfig,
    initial: &ClosedLoopState,
) -> Result<RunOutput> {
    sim.validate()?;
    check_orders(plant, controller)?;
    let n = controller.order();
    let flat0 = initial.to_flat();
    let mut state = ClosedLoopState::from_flat(n, &flat0)?;
    for (i, (x, s)) in state.x.iter().zip(&controller.config().steps).enumerate() {
        if s.bounds.margin(*x, 0.0) <= 0.0 || !x.is_finite() {
            let (lower, upper) = s.bounds.interval(0.0);
            return Err(Error::ConstraintViolated { x: *x, lower, upper }.at_step(i + 1));
        }
    }
    if let Some(a) = state.a_hat.iter().find(|a| !(**a >= 0.0)) {
        return Err(Error::invalid(format!("initial adaptive estimates must be >= 0, got {a}")));
    }

    let steps = sim.steps();
    let mut rec = Recorder {
        controller,
        trajectory: Trajectory {
            n,
            rows: Vec::with_capacity(steps / sim.record_stride + 2),
        },
        report: RunReport {
            n,
            steps_taken: 0,
            final_time: 0.0,
            error_trace: Vec::with_capacity(steps + 1),
            min_constraint_margin: vec![None; n],
            max_abs_x: vec![0.0; n],
            max_abs_u: 0.0,
            min_a_hat: vec![f64::INFINITY; n],
            violated: false,
            first_violation: None,
            termination: Termination::Completed,
        },
    };
    if steps == 0 {
        return Ok(RunOutput {
            trajectory: rec.trajectory,
            report: rec.report,
        });
    }

    // Safety is judged on the true state at step ends. The control law
    // always sees the inset view, so an RK4 stage poking past a boundary
    // does not end the run by itself.
    let eval = |s: &ClosedLoopState, t: f64| -> Result<ControlEvaluation> {
        controller.evaluate(&controller_view(controller, s, t), t)
    };
    let rhs = |flat: &[f64], t: f64| -> Result<Vec<f64>> {
        // the plant sees the true state, the control law only the view
        let s = ClosedLoopState::from_flat(n, flat)?;
        let ev = eval(&s, t)?;
        assemble_rhs(plant, &s, &ev)
    };

    let mut flat = flat0;
    for k in 0..=steps {
        let t = sim.time(k, steps);
        let ev = match eval(&state, t) {
            Ok(v) => v,
            Err(e) => {
                rec.report.termination = classify(e, t);
                break;
            }
        };
        let record = k % sim.record_stride == 0 || k == steps;
        rec.observe(&state, &ev, t, record);
        if rec.report.violated && sim.abort_on_violation {
            let (tv, i) = rec.report.first_violation.unwrap_or((t, 1));
            rec.report.termination = Termination::Violation { t: tv, state: i };
            break;
        }
        if k == steps {
            break;
        }

        let h = sim.time(k + 1, steps) - t;
        let k1 = match assemble_rhs(plant, &state, &ev) {
            Ok(d) => d,
            Err(e) => {
                rec.report.termination = classify(e, t);
                break;
            }
        };
        let next = match sim.integrator {
            Integrator::Euler => Ok(axpy(&flat, h, &k1)),
            Integrator::Rk4 => (|| {
                let k2 = rhs(&axpy(&flat, 0.5 * h, &k1), t + 0.5 * h)?;
                let k3 = rhs(&axpy(&flat, 0.5 * h, &k2), t + 0.5 * h)?;
                let k4 = rhs(&axpy(&flat, h, &k3), t + h)?;
                Ok(flat
                    .iter()
                    .enumerate()
                    .map(|(j, y)| y + h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]))
                    .collect())
            })(),
        };
        let mut next: Vec<f64> = match next {
            Ok(v) => v,
            Err(e) => {
                rec.report.termination = classify(e, t);
                break;
            }
        };
        for a in &mut next[2 * n - 1..] {
            *a = a.max(0.0);
        }
        if let Some(name) = first_non_finite(&next, n) {
            rec.report.termination = Termination::Diverged {
                t: t + h,
                message: format!("non-finite {name}"),
            };
            break;
        }
        flat = next;
        state = ClosedLoopState::from_flat(n, &flat)?;
    }

    Ok(RunOutput {
        trajectory: rec.trajectory,
        report: rec.report,
    })
}

fn classify(e: Error, t: f64) -> Termination {
    Termination::Diverged {
        t,
        message: e.to_string(),
    }
}

/// Convenience wrapper: filter states start on their targets.
pub fn run_from(
    plant: &dyn PureFeedbackPlant,
    controller: &AdaptiveController,
    sim: &SimConfig,
    x0: &[f64],
    a_hat0: &[f64],
) -> Result<RunOutput> {
    let initial = controller.initial_state(x0, a_hat0, 0.0)?;
    run(plant, controller, sim, &initial)
}
