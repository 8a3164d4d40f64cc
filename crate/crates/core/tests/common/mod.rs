//! Straight-line re-derivation of the control law used as a test oracle.
//!
//! Reads only raw config data (bound coefficients, centers, widths, gains)
//! and recomputes every term without calling the library's transformation,
//! basis, filter or power helpers.

#![allow(dead_code, clippy::excessive_precision)]

use fixed_time_safe::{BoundFunction, ControllerConfig, ReferenceSignal};

pub struct Terms {
    pub xi: Vec<f64>,
    pub phi: Vec<f64>,
    pub psi: Vec<f64>,
    pub xi_d: f64,
    pub xi_d_dot: f64,
    pub zeta: Vec<f64>,
    pub mu: Vec<f64>,
    pub alpha: Vec<f64>,
    pub alpha_f_dot: Vec<f64>,
    pub u: f64,
    pub a_hat_dot: Vec<f64>,
}

fn pw(a: f64, r: f64) -> f64 {
    if a < 0.0 {
        -(-a).powf(r)
    } else {
        a.powf(r)
    }
}

// (h, dh/dt), None when unbounded
fn side(f: BoundFunction, t: f64) -> Option<(f64, f64)> {
    match f {
        BoundFunction::Constant { value } => Some((value, 0.0)),
        BoundFunction::Sinusoid { a, b, omega, phase } => {
            Some((a + b * (omega * t + phase).sin(), b * omega * (omega * t + phase).cos()))
        }
        BoundFunction::Cosinusoid { a, b, omega, phase } => {
            Some((a + b * (omega * t + phase).cos(), -b * omega * (omega * t + phase).sin()))
        }
        BoundFunction::Unbounded => None,
    }
}

pub fn transform(lower: BoundFunction, upper: BoundFunction, x: f64, t: f64) -> (f64, f64, f64) {
    match (side(lower, t), side(upper, t)) {
        (Some((h1, d1)), Some((h2, d2))) => {
            let l = ((h1 + x) / (h2 - x)).ln();
            let xi = (h1 + h2) / 4.0 * l;
            let phi = (h1 + h2).powi(2) / (4.0 * (h1 + x) * (h2 - x));
            let psi = (h1 + h2) / 4.0 * (d1 / (h1 + x) - d2 / (h2 - x)) + (d1 + d2) / 4.0 * l;
            (xi, phi, psi)
        }
        _ => (x, 1.0, 0.0),
    }
}

fn mu(centers: &[Vec<f64>], widths: &[f64], x: &[f64]) -> f64 {
    let mut s2 = 0.0;
    for (c, w) in centers.iter().zip(widths) {
        let d2: f64 = c.iter().zip(x).map(|(a, b)| (a - b).powi(2)).sum();
        s2 += (-d2 / w.powi(2)).exp().powi(2);
    }
    s2.sqrt() + 1.0
}

pub fn evaluate(cfg: &ControllerConfig, x: &[f64], alpha_f: &[f64], a_hat: &[f64], t: f64) -> Terms {
    let n = x.len();
    let r1 = cfg.r1.numerator() as f64 / cfg.r1.denominator() as f64;
    let r2 = cfg.r2.numerator() as f64 / cfg.r2.denominator() as f64;
    let st = &cfg.steps;

    let (mut xi, mut phi, mut psi) = (vec![], vec![], vec![]);
    for i in 0..n {
        let (a, b, c) = transform(st[i].bounds.lower(), st[i].bounds.upper(), x[i], t);
        xi.push(a);
        phi.push(b);
        psi.push(c);
    }
    let (yd, ydd) = match cfg.reference {
        ReferenceSignal::Sinusoid { amplitude, omega } => {
            (amplitude * (omega * t).sin(), amplitude * omega * (omega * t).cos())
        }
        ReferenceSignal::Constant { value } => (value, 0.0),
    };
    let (xi_d, pd, qd) = transform(st[0].bounds.lower(), st[0].bounds.upper(), yd, t);
    let xi_d_dot = pd * ydd + qd;

    let mut zeta = vec![xi[0] - xi_d];
    for i in 1..n {
        zeta.push(xi[i] - alpha_f[i - 1]);
    }
    let mut mus = vec![];
    for i in 0..n {
        let mut reg: Vec<f64> = if i + 1 < n { x[..i + 2].to_vec() } else { x.to_vec() };
        if i + 1 < n {
            reg.push(xi[i + 1]);
        }
        mus.push(mu(st[i].rbf.centers(), st[i].rbf.widths(), &reg));
    }

    let s0 = &st[0];
    let mut alpha = vec![
        -s0.rho * a_hat[0] * phi[0] * mus[0].powi(2) * zeta[0] - phi[0] * zeta[0] + xi_d_dot / phi[0]
            - psi[0] / phi[0]
            - s0.k1 / phi[0] * pw(zeta[0], r1)
            - s0.k2 / phi[0] * pw(zeta[0], r2),
    ];
    let mut afd = vec![];
    for i in 1..n {
        let lam = cfg.filters[i - 1].lambda;
        let e = alpha[i - 1] - alpha_f[i - 1];
        let lin = if cfg.fdsc_linear_term { e } else { 0.0 };
        afd.push((pw(e, r1) + pw(e, r2) + lin) / lam);
        if i + 1 < n {
            let s = &st[i];
            let ks = if cfg.harmonize_k_scaling { 1.0 / phi[i] } else { 1.0 };
            alpha.push(
                -s.rho * a_hat[i] * phi[i] * mus[i].powi(2) * zeta[i] - phi[i] * zeta[i] - psi[i] / phi[i]
                    + afd[i - 1] / phi[i]
                    - ks * s.k1 * pw(zeta[i], r1)
                    - ks * s.k2 * pw(zeta[i], r2)
                    - phi[i - 1] / phi[i] * zeta[i - 1],
            );
        }
    }
    let k = n - 1;
    let sn = &st[k];
    let u = -sn.rho * phi[k] * a_hat[k] * mus[k].powi(2) * zeta[k] - psi[k].powi(2) * zeta[k] / phi[k]
        - afd[k - 1].powi(2) * zeta[k] / phi[k]
        - phi[k - 1].powi(2) * zeta[k - 1].powi(2) * zeta[k] / phi[k]
        - sn.k1 / phi[k] * pw(zeta[k], r1)
        - sn.k2 / phi[k] * pw(zeta[k], r2);
    let a_hat_dot = (0..n)
        .map(|i| {
            st[i].rho * phi[i].powi(2) * mus[i].powi(2) * zeta[i].powi(2)
                - st[i].sigma1 * pw(a_hat[i], r1)
                - st[i].sigma2 * pw(a_hat[i], r2)
        })
        .collect();
    Terms {
        xi,
        phi,
        psi,
        xi_d,
        xi_d_dot,
        zeta,
        mu: mus,
        alpha,
        alpha_f_dot: afd,
        u,
        a_hat_dot,
    }
}

/// `|a - b| <= rel * |b|`, or `<= abs_floor` when `b` is exactly zero.
pub fn close(a: f64, b: f64, rel: f64) -> bool {
    if b == 0.0 {
        a.abs() <= 1e-12
    } else {
        (a - b).abs() <= rel * b.abs()
    }
}

/// Values at the first preset's initial state (`t = 0`, `x = (0.2, -0.2)`,
/// zero estimates, filter on target), from a 50-digit evaluation.
pub mod frozen_t0 {
    pub const XI: [f64; 2] = [0.15389434168224124, -0.20572533271574165];
    pub const PHI: [f64; 2] = [1.0803571428571429, 1.0888888888888889];
    pub const PSI: [f64; 2] = [0.26934753755552842, 0.0];
    pub const XI_D: f64 = -0.050138428118337522;
    pub const XI_D_DOT: f64 = 0.30252529441348447;
    pub const ZETA: [f64; 2] = [0.20403276980057876, 0.7395674509147821];
    pub const MU: [f64; 2] = [1.8040388733584906, 1.8090750282920162];
    pub const ALPHA1: f64 = -0.94529278363052375;
    pub const ALPHA_F_DOT: f64 = 0.0;
    pub const U: f64 = -2.7496603228117575;
    pub const A_HAT_DOT: [f64; 2] = [7.9067195206481276e-5, 0.0010612210915713824];
    pub const X_DOT: [f64; 2] = [0.04, -2.8278578162578793];
}

/// Same config at `t = 1.3`, `x = (-0.15, 0.33)`, `alpha_2f = 0.4`,
/// `a_hat = (0.7, 1.9)`.
pub mod frozen_synthetic {
    pub const T: f64 = 1.3;
    pub const X: [f64; 2] = [-0.15, 0.33];
    pub const ALPHA_F: f64 = 0.4;
    pub const A_HAT: [f64; 2] = [0.7, 1.9];
    pub const XI: [f64; 2] = [0.040953413106293488, 0.38038736185934901];
    pub const PHI: [f64; 2] = [1.0046945925856912, 1.551498542263088];
    pub const PSI: [f64; 2] = [0.067185792568648324, 0.045821574397609285];
    pub const XI_D: f64 = 0.26801012785065986;
    pub const XI_D_DOT: f64 = 0.12873109227310315;
    pub const ZETA: [f64; 2] = [-0.22705671474436637, -0.019612638140650989];
    pub const MU: [f64; 2] = [2.0271210167042091, 2.0285670818795532];
    pub const ALPHA1: f64 = 1.1938261741650736;
    pub const ALPHA_F_DOT: f64 = 23.814198071063137;
    pub const U: f64 = 7.2204558379430601;
    pub const A_HAT_DOT: [f64; 2] = [-0.48834099747656346, -1.3327795274484359];
    pub const X_DOT: [f64; 2] = [0.2889, 7.2515503665411176];
}
