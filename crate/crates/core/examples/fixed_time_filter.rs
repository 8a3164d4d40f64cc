//! Settling time of the dynamic surface filter against the size of the
//! initial error.
//!
//! With exponents far from one (1/3 and 3) the time barely grows as the
//! error grows by orders of magnitude. With exponents close to one
//! (97/99 and 99/97) the high-power term is weak and large errors take
//! noticeably longer.

use fixed_time_safe::fdsc::{settle_time_empirical, FdscParams};
use fixed_time_safe::OddRatioExponent;

pub fn run_example() -> fixed_time_safe::Result<()> {
    let cases = [
        ("r = 97/99, 99/97", FdscParams::new(0.1, OddRatioExponent::new(97, 99)?, OddRatioExponent::new(99, 97)?)?),
        ("r = 1/3, 3", FdscParams::new(0.1, OddRatioExponent::new(1, 3)?, OddRatioExponent::new(3, 1)?)?),
    ];
    for (label, params) in cases {
        println!("{label}");
        for with_linear in [true, false] {
            let p = params.with_linear_term(with_linear);
            let times = [1.0, 1e2, 1e4, 1e6]
                .map(|e0| settle_time_empirical(&p, e0, 1e-3, 1e-5).map(|t| format!("{t:.4}")));
            let times: Vec<String> = times.into_iter().collect::<Result<_, _>>()?;
            let tag = if with_linear { "with linear term" } else { "two-power only " };
            println!("  {tag}: e0 = 1, 1e2, 1e4, 1e6 -> {}", times.join(", "));
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> fixed_time_safe::Result<()> {
    run_example()
}
