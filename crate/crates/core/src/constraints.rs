//! Time-varying state bounds and the unified nonlinear transformation.
//!
//! For a state constrained to `-h1(t) < x < h2(t)` the transformation is
//!
//! ```text
//! xi  = (h1 + h2)/4 * ln((h1 + x)/(h2 - x))
//! phi = d xi/d x = (h1 + h2)^2 / (4 (h1 + x)(h2 - x))
//! psi = d xi/d t at fixed x
//! ```
//!
//! `xi` diverges at both boundaries, so a bounded `xi` keeps the state inside
//! its box. An unbounded state maps through the identity (`xi = x`, `phi = 1`,
//! `psi = 0`), which is the symmetric `h -> inf` limit of the same map.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One side of a state constraint, as a function of time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum BoundFunction {
    Constant {
        #[serde(rename = "a")]
        value: f64,
    },
    /// `a + b sin(omega t + phase)`
    Sinusoid {
        a: f64,
        b: f64,
        omega: f64,
        #[serde(default)]
        phase: f64,
    },
    /// `a + b cos(omega t + phase)`
    Cosinusoid {
        a: f64,
        b: f64,
        omega: f64,
        #[serde(default)]
        phase: f64,
    },
    Unbounded,
}

impl BoundFunction {
    pub fn constant(value: f64) -> Self {
        BoundFunction::Constant { value }
    }

    pub fn sin(a: f64, b: f64, omega: f64) -> Self {
        BoundFunction::Sinusoid {
            a,
            b,
            omega,
            phase: 0.0,
        }
    }

    pub fn cos(a: f64, b: f64, omega: f64) -> Self {
        BoundFunction::Cosinusoid {
            a,
            b,
            omega,
            phase: 0.0,
        }
    }

    pub fn is_unbounded(&self) -> bool {
        matches!(self, BoundFunction::Unbounded)
    }

    /// Checks finiteness and strict positivity for all `t` (`a - |b| > 0`).
    pub fn validate(&self) -> Result<()> {
        match *self {
            BoundFunction::Constant { value } => {
                if !(value.is_finite() && value > 0.0) {
                    return Err(Error::invalid(format!(
                        "constant bound must be positive and finite, got {value}"
                    )));
                }
            }
            BoundFunction::Sinusoid { a, b, omega, phase }
            | BoundFunction::Cosinusoid { a, b, omega, phase } => {
                if ![a, b, omega, phase].iter().all(|v| v.is_finite()) {
                    return Err(Error::invalid("sinusoidal bound has non-finite parameters"));
                }
                if a - b.abs() <= 0.0 {
                    return Err(Error::invalid(format!(
                        "sinusoidal bound a={a}, b={b} is not strictly positive (a - |b| <= 0)"
                    )));
                }
            }
            BoundFunction::Unbounded => {}
        }
        Ok(())
    }

    /// `h(t)`; `+inf` for the unbounded variant.
    pub fn value(&self, t: f64) -> f64 {
        match *self {
            BoundFunction::Constant { value } => value,
            BoundFunction::Sinusoid { a, b, omega, phase } => a + b * (omega * t + phase).sin(),
            BoundFunction::Cosinusoid { a, b, omega, phase } => a + b * (omega * t + phase).cos(),
            BoundFunction::Unbounded => f64::INFINITY,
        }
    }

    /// `dh/dt`; zero for the constant and unbounded variants.
    pub fn derivative(&self, t: f64) -> f64 {
        match *self {
            BoundFunction::Constant { .. } | BoundFunction::Unbounded => 0.0,
            BoundFunction::Sinusoid { b, omega, phase, .. } => b * omega * (omega * t + phase).cos(),
            BoundFunction::Cosinusoid { b, omega, phase, .. } => {
                -b * omega * (omega * t + phase).sin()
            }
        }
    }
}

/// Bound values and rates at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Limits {
    pub lower: f64,
    pub upper: f64,
    pub lower_rate: f64,
    pub upper_rate: f64,
}

/// `xi`, `phi` and `psi` evaluated together.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transformed {
    pub xi: f64,
    pub phi: f64,
    pub psi: f64,
}

/// The pair `(h1, h2)` describing `-h1(t) < x < h2(t)`.
///
/// Either both sides are bounded or both are [`BoundFunction::Unbounded`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBounds", into = "RawBounds")]
pub struct ConstraintBounds {
    lower: BoundFunction,
    upper: BoundFunction,
}

#[derive(Serialize, Deserialize)]
struct RawBounds {
    lower: BoundFunction,
    upper: BoundFunction,
}

impl TryFrom<RawBounds> for ConstraintBounds {
    type Error = Error;

    fn try_from(raw: RawBounds) -> Result<Self> {
        ConstraintBounds::new(raw.lower, raw.upper)
    }
}

impl From<ConstraintBounds> for RawBounds {
    fn from(b: ConstraintBounds) -> Self {
        RawBounds {
            lower: b.lower,
            upper: b.upper,
        }
    }
}

impl ConstraintBounds {
    pub fn new(lower: BoundFunction, upper: BoundFunction) -> Result<Self> {
        lower.validate()?;
        upper.validate()?;
        if lower.is_unbounded() != upper.is_unbounded() {
            return Err(Error::invalid(
                "one-sided constraints are not supported: both bounds must be finite or both unbounded",
            ));
        }
        Ok(Self { lower, upper })
    }

    pub fn unbounded() -> Self {
        Self {
            lower: BoundFunction::Unbounded,
            upper: BoundFunction::Unbounded,
        }
    }

    /// Same function on both sides, `-h(t) < x < h(t)`.
    pub fn symmetric(h: BoundFunction) -> Result<Self> {
        Self::new(h, h)
    }

    pub fn lower(&self) -> BoundFunction {
        self.lower
    }

    pub fn upper(&self) -> BoundFunction {
        self.upper
    }

    pub fn is_bounded(&self) -> bool {
        !self.lower.is_unbounded()
    }

    pub fn limits(&self, t: f64) -> Option<Limits> {
        self.is_bounded().then(|| Limits {
            lower: self.lower.value(t),
            upper: self.upper.value(t),
            lower_rate: self.lower.derivative(t),
            upper_rate: self.upper.derivative(t),
        })
    }

    /// The open interval `(-h1(t), h2(t))`.
    pub fn interval(&self, t: f64) -> (f64, f64) {
        (-self.lower.value(t), self.upper.value(t))
    }

    /// `min(x + h1, h2 - x)`: positive iff `x` is strictly inside. `+inf` when unbounded.
    pub fn margin(&self, x: f64, t: f64) -> f64 {
        let (lo, hi) = self.interval(t);
        (x - lo).min(hi - x)
    }

    fn checked_limits(&self, x: f64, t: f64) -> Result<Option<Limits>> {
        if !x.is_finite() {
            return Err(Error::NonFinite("state"));
        }
        match self.limits(t) {
            None => Ok(None),
            Some(l) if -l.lower < x && x < l.upper => Ok(Some(l)),
            Some(l) => Err(Error::ConstraintViolated {
                x,
                lower: -l.lower,
                upper: l.upper,
            }),
        }
    }

    pub fn transform(&self, x: f64, t: f64) -> Result<Transformed> {
        let Some(l) = self.checked_limits(x, t)? else {
            return Ok(Transformed {
                xi: x,
                phi: 1.0,
                psi: 0.0,
            });
        };
        let near = l.lower + x;
        let far = l.upper - x;
        let log_ratio = log_ratio(near, far);
        let width = l.lower + l.upper;
        Ok(Transformed {
            xi: 0.25 * width * log_ratio,
            phi: width * width / (4.0 * near * far),
            psi: 0.25 * width * (l.lower_rate / near - l.upper_rate / far)
                + 0.25 * (l.lower_rate + l.upper_rate) * log_ratio,
        })
    }

    pub fn xi(&self, x: f64, t: f64) -> Result<f64> {
        Ok(self.transform(x, t)?.xi)
    }

    pub fn phi(&self, x: f64, t: f64) -> Result<f64> {
        Ok(self.transform(x, t)?.phi)
    }

    pub fn psi(&self, x: f64, t: f64) -> Result<f64> {
        Ok(self.transform(x, t)?.psi)
    }

    /// Closed-form inverse of [`xi`](Self::xi): `x = (h2 e^u - h1)/(1 + e^u)`,
    /// `u = 4 xi/(h1 + h2)`.
    ///
    /// The result is kept strictly inside the interval. For `|u|` beyond
    /// roughly 36 the distance to the boundary falls below one ulp of `h`, so
    /// the result sits on the float next to the boundary.
    pub fn xi_inverse(&self, xi: f64, t: f64) -> f64 {
        let Some(l) = self.limits(t) else {
            return xi;
        };
        let width = l.lower + l.upper;
        let u = 4.0 * xi / width;
        let x = if u >= 0.0 {
            l.upper - width / (1.0 + u.exp())
        } else {
            -l.lower + width / (1.0 + (-u).exp())
        };
        x.clamp((-l.lower).next_up(), l.upper.next_down())
    }
}

// ln(near/far), switching to ln_1p when the ratio is close to one so that
// very wide bounds reproduce the identity map without cancellation.
fn log_ratio(near: f64, far: f64) -> f64 {
    let diff = near - far;
    if diff.abs() < 0.5 * far {
        (diff / far).ln_1p()
    } else {
        (near / far).ln()
    }
}
