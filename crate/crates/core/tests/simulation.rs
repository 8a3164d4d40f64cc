use fixed_time_safe::experiment::{preset, simulate, ExperimentConfig};
use fixed_time_safe::plant::builtin_example_plant;
use fixed_time_safe::sim::{self, Integrator, SimConfig, Termination};
use fixed_time_safe::{AdaptiveController, ClosedLoopState};

fn example1(horizon: f64) -> ExperimentConfig {
    let mut cfg = preset("example1").unwrap();
    cfg.sim.horizon = horizon;
    cfg
}

#[test]
fn zero_horizon_gives_empty_run() {
    let out = simulate(&example1(0.0)).unwrap();
    assert!(out.trajectory.is_empty());
    assert_eq!(out.report.steps_taken, 0);
    assert_eq!(out.report.settling_time(0.05), None);
    assert_eq!(out.report.termination, Termination::Completed);
    assert!(!out.report.violated);
}

#[test]
fn step_count_and_final_time() {
    let mut cfg = example1(0.0105);
    let out = simulate(&cfg).unwrap();
    // 10 full steps and a half step
    assert_eq!(out.report.steps_taken, 12);
    assert_eq!(out.trajectory.rows.last().unwrap().t, 0.0105);
    cfg.sim.horizon = 0.01;
    assert_eq!(cfg.sim.steps(), 10);
}

#[test]
fn initial_state_outside_bounds_is_rejected() {
    let cfg = example1(1.0);
    let c = AdaptiveController::new(cfg.controller.clone()).unwrap();
    let initial = ClosedLoopState {
        x: vec![0.7, 0.0],
        alpha_f: vec![0.0],
        a_hat: vec![0.0, 0.0],
    };
    assert!(sim::run(&builtin_example_plant(), &c, &cfg.sim, &initial).is_err());
    let initial = ClosedLoopState {
        x: vec![0.0, 0.0],
        alpha_f: vec![0.0],
        a_hat: vec![-1.0, 0.0],
    };
    assert!(sim::run(&builtin_example_plant(), &c, &cfg.sim, &initial).is_err());
    let bad = SimConfig { dt: 0.0, ..cfg.sim };
    assert!(sim::run_from(&builtin_example_plant(), &c, &bad, &[0.0, 0.0], &[0.0, 0.0]).is_err());
}

#[test]
fn recorded_rows_are_safe_and_consistent() {
    let out = simulate(&example1(30.0)).unwrap();
    let r = &out.report;
    assert!(!r.violated);
    assert!(r.min_margin().unwrap() > 0.0);
    let mut last_t = -1.0;
    for row in &out.trajectory.rows {
        assert!(row.t > last_t);
        last_t = row.t;
        for (i, m) in row.margin.iter().enumerate() {
            let (h1, h2) = row.bounds[i];
            assert!(-h1 < row.x[i] && row.x[i] < h2);
            assert!(*m > 0.0);
        }
        assert!(row.to_record().iter().all(|v| v.is_finite()));
        assert!(row.a_hat.iter().all(|a| *a >= 0.0));
        // |x1 - yd| <= |zeta1| since the transformation never shrinks distances
        assert!((row.x[0] - row.yd).abs() <= row.zeta[0].abs() + 1e-9);
    }
}

#[test]
fn sup_error_tail_is_nonincreasing_and_below_tolerance_after_settling() {
    let out = simulate(&example1(30.0)).unwrap();
    let r = &out.report;
    let mut prev = f64::INFINITY;
    for k in 0..=60 {
        let s = r.max_abs_e_after(0.5 * k as f64);
        assert!(s <= prev);
        prev = s;
    }
    let ts = r.settling_time(0.05).unwrap();
    assert!(r.max_abs_e_after(ts) <= 0.05);
    assert!(r.max_abs_e_after(ts - 1e-3) > 0.05);
}

#[test]
fn halving_dt_barely_moves_the_metrics() {
    let coarse = simulate(&example1(30.0)).unwrap().report;
    let mut cfg = example1(30.0);
    cfg.sim.dt = 5e-4;
    let fine = simulate(&cfg).unwrap().report;
    let (a, b) = (coarse.settling_time(0.05).unwrap(), fine.settling_time(0.05).unwrap());
    assert!((a - b).abs() < 0.02 * a, "{a} vs {b}");
    let (a, b) = (coarse.max_abs_e_after(10.0), fine.max_abs_e_after(10.0));
    assert!((a - b).abs() < 0.05 * a, "{a} vs {b}");
}

#[test]
fn euler_with_a_fine_step_agrees_with_rk4() {
    let rk4 = simulate(&example1(10.0)).unwrap().report;
    let mut cfg = example1(10.0);
    cfg.sim.integrator = Integrator::Euler;
    cfg.sim.dt = 1e-4;
    let euler = simulate(&cfg).unwrap().report;
    let (a, b) = (rk4.settling_time(0.05).unwrap(), euler.settling_time(0.05).unwrap());
    assert!((a - b).abs() < 0.05 * a, "{a} vs {b}");
}

#[test]
fn report_is_computed_at_full_resolution() {
    let full = simulate(&example1(5.0)).unwrap();
    let mut cfg = example1(5.0);
    cfg.sim.record_stride = 100;
    let sparse = simulate(&cfg).unwrap();
    assert_eq!(sparse.report, full.report);
    assert_eq!(sparse.trajectory.len(), 51);
    assert_eq!(sparse.trajectory.rows[1], full.trajectory.rows[100]);
}

#[test]
fn runs_are_deterministic() {
    let a = simulate(&example1(3.0)).unwrap();
    let b = simulate(&example1(3.0)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn slow_filter_violates_and_aborts() {
    let cfg = example1(30.0).set_param("controller.filters.0.lambda", 1.0).unwrap();
    let out = simulate(&cfg).unwrap();
    let r = &out.report;
    assert!(r.violated);
    let (tv, state) = r.first_violation.unwrap();
    assert_eq!(state, 2);
    assert!(matches!(r.termination, Termination::Violation { .. }));
    assert!(r.final_time <= tv + 1e-12);
    assert!(r.min_constraint_margin[1].unwrap() <= 0.0);
}

#[test]
fn violation_without_abort_keeps_running() {
    let mut cfg = example1(8.0).set_param("controller.filters.0.lambda", 1.0).unwrap();
    cfg.sim.abort_on_violation = false;
    let out = simulate(&cfg).unwrap();
    let r = &out.report;
    assert!(r.violated);
    let (tv, _) = r.first_violation.unwrap();
    assert!(r.final_time > tv);
    // rows past the crossing still carry finite transformed values
    let row = out.trajectory.rows.iter().find(|row| row.t > tv).unwrap();
    assert!(row.xi.iter().all(|v| v.is_finite()));
}
