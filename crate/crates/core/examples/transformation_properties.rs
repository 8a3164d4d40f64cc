//! The state transformation near and away from its bounds.

use fixed_time_safe::{BoundFunction, ConstraintBounds};

pub fn run_example() -> fixed_time_safe::Result<()> {
    let bounds = ConstraintBounds::new(BoundFunction::sin(0.5, 0.3, 1.0), BoundFunction::sin(0.6, -0.2, 1.0))?;
    let t = 0.7;
    let (lo, hi) = bounds.interval(t);
    println!("t = {t}: -h1 = {lo:.4}, h2 = {hi:.4}");
    println!("{:>10} {:>12} {:>12} {:>12} {:>12}", "x", "xi", "phi", "psi", "inverse");
    for k in 1..10 {
        let x = lo + (hi - lo) * k as f64 / 10.0;
        let tr = bounds.transform(x, t)?;
        println!(
            "{x:>10.4} {:>12.5} {:>12.5} {:>12.5} {:>12.5}",
            tr.xi,
            tr.phi,
            tr.psi,
            bounds.xi_inverse(tr.xi, t)
        );
    }

    // xi blows up at the boundary, which is what keeps the state inside.
    for gap in [1e-2, 1e-5, 1e-9] {
        println!("xi at h2 - {gap:e}: {:.3}", bounds.xi(hi - gap, t)?);
    }
    println!("x = h2 is rejected: {}", bounds.xi(hi, t).unwrap_err());

    let free = ConstraintBounds::unbounded();
    let tr = free.transform(3.5, t)?;
    println!("unbounded: xi(3.5) = {}, phi = {}, psi = {}", tr.xi, tr.phi, tr.psi);
    Ok(())
}

#[allow(dead_code)]
fn main() -> fixed_time_safe::Result<()> {
    run_example()
}
