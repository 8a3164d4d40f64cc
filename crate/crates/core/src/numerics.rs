//! Sign-preserving fractional powers and the scalar inequalities the
//! convergence analysis leans on.
//!
//! Odd-ratio exponents `m/n` are evaluated on negative reals as
//! `sign(a) * |a|^(m/n)`. This is the global convention of the crate: every
//! fractional power of a possibly negative quantity goes through [`sigpow`]
//! or [`signed_pow`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ratio of two positive odd integers, e.g. `97/99`.
///
/// Stored as a rational and evaluated in floating point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawRatio", into = "RawRatio")]
pub struct OddRatioExponent {
    num: u32,
    den: u32,
}

#[derive(Serialize, Deserialize)]
struct RawRatio {
    num: u32,
    den: u32,
}

impl TryFrom<RawRatio> for OddRatioExponent {
    type Error = Error;

    fn try_from(raw: RawRatio) -> Result<Self> {
        OddRatioExponent::new(raw.num, raw.den)
    }
}

impl From<OddRatioExponent> for RawRatio {
    fn from(r: OddRatioExponent) -> Self {
        RawRatio {
            num: r.num,
            den: r.den,
        }
    }
}

impl OddRatioExponent {
    pub fn new(num: u32, den: u32) -> Result<Self> {
        if num == 0 || den == 0 || num.is_multiple_of(2) || den.is_multiple_of(2) {
            return Err(Error::invalid(format!(
                "exponent {num}/{den} must be a ratio of positive odd integers"
            )));
        }
        Ok(Self { num, den })
    }

    pub fn numerator(&self) -> u32 {
        self.num
    }

    pub fn denominator(&self) -> u32 {
        self.den
    }

    pub fn value(&self) -> f64 {
        f64::from(self.num) / f64::from(self.den)
    }
}

impl fmt::Display for OddRatioExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// `sign(a) * |a|^p` for any real exponent. Unchecked; returns `0` at `a = 0`.
#[inline]
pub fn signed_pow(a: f64, p: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else {
        a.signum() * a.abs().powf(p)
    }
}

/// Sign-preserving power with an odd-ratio exponent.
pub fn sigpow(a: f64, r: OddRatioExponent) -> Result<f64> {
    if !a.is_finite() {
        return Err(Error::NonFinite("sigpow"));
    }
    Ok(signed_pow(a, r.value()))
}

// Tolerance for comparing two sides of an inequality that may hold with
// equality: a few ulps of the largest magnitude involved.
fn holds(lhs: f64, rhs: f64, scale: f64) -> bool {
    lhs <= rhs + 64.0 * f64::EPSILON * scale.max(1.0)
}

fn require_finite(values: &[f64], what: &'static str) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

/// `(x1 - x2)^p >= x2^p - x1^p` for `x1 > 0`, `x1 >= x2`, `p > 1`.
///
/// Powers of possibly negative `x2` use the sign-preserving convention.
/// Equality cases are accepted up to floating-point rounding.
pub fn check_lemma2(x1: f64, x2: f64, p: f64) -> Result<bool> {
    require_finite(&[x1, x2, p], "check_lemma2")?;
    if !(x1 > 0.0 && x1 >= x2 && p > 1.0) {
        return Err(Error::invalid(format!(
            "lemma 2 needs x1 > 0, x1 >= x2, p > 1 (got x1={x1}, x2={x2}, p={p})"
        )));
    }
    let lhs = (x1 - x2).powf(p);
    let rhs = signed_pow(x2, p) - x1.powf(p);
    let scale = lhs.abs().max(x1.powf(p)).max(signed_pow(x2, p).abs());
    Ok(holds(rhs, lhs, scale))
}

/// `x1^p (x2 - x1) <= (x2^(1+p) - x1^(1+p)) / (1 + p)` for `x1 >= 0`, `x2 > 0`, `p > 0`.
pub fn check_lemma3(x1: f64, x2: f64, p: f64) -> Result<bool> {
    require_finite(&[x1, x2, p], "check_lemma3")?;
    if !(x1 >= 0.0 && x2 > 0.0 && p > 0.0) {
        return Err(Error::invalid(format!(
            "lemma 3 needs x1 >= 0, x2 > 0, p > 0 (got x1={x1}, x2={x2}, p={p})"
        )));
    }
    let lhs = x1.powf(p) * (x2 - x1);
    let hi = x2.powf(1.0 + p);
    let lo = x1.powf(1.0 + p);
    let rhs = (hi - lo) / (1.0 + p);
    Ok(holds(lhs, rhs, hi.max(lo)))
}

/// `(sum |x_i|)^p <= max(n^(p-1), 1) * sum |x_i|^p` for `p > 0`.
pub fn check_lemma4(xs: &[f64], p: f64) -> Result<bool> {
    if xs.is_empty() {
        return Err(Error::invalid("lemma 4 needs a non-empty list"));
    }
    require_finite(xs, "check_lemma4")?;
    require_finite(&[p], "check_lemma4")?;
    if p <= 0.0 {
        return Err(Error::invalid(format!("lemma 4 needs p > 0 (got {p})")));
    }
    let n = xs.len() as f64;
    let lhs = xs.iter().map(|x| x.abs()).sum::<f64>().powf(p);
    let rhs = n.powf(p - 1.0).max(1.0) * xs.iter().map(|x| x.abs().powf(p)).sum::<f64>();
    Ok(holds(lhs, rhs, lhs.max(rhs)))
}
