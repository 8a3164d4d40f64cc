//! Gaussian radial basis functions.
//!
//! Only the basis vector `S(x)` and the amplification `mu(x) = ||S(x)|| + 1`
//! exist here. The control law bounds each unknown nonlinearity by
//! `w * mu(x)` and never needs the network weights themselves.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Centers and widths of `S_i(x) = exp(-|x - c_i|^2 / w_i^2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct RbfNetworkSpec {
    centers: Vec<Vec<f64>>,
    widths: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    centers: Vec<Vec<f64>>,
    widths: Vec<f64>,
}

impl TryFrom<RawSpec> for RbfNetworkSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        RbfNetworkSpec::new(raw.centers, raw.widths)
    }
}

impl From<RbfNetworkSpec> for RawSpec {
    fn from(s: RbfNetworkSpec) -> Self {
        RawSpec {
            centers: s.centers,
            widths: s.widths,
        }
    }
}

impl RbfNetworkSpec {
    pub fn new(centers: Vec<Vec<f64>>, widths: Vec<f64>) -> Result<Self> {
        let Some(first) = centers.first() else {
            return Err(Error::invalid("an RBF network needs at least one center"));
        };
        let dim = first.len();
        if dim == 0 {
            return Err(Error::invalid("RBF centers must have dimension >= 1"));
        }
        if widths.len() != centers.len() {
            return Err(Error::invalid(format!(
                "{} centers but {} widths",
                centers.len(),
                widths.len()
            )));
        }
        if let Some(c) = centers.iter().find(|c| c.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: c.len(),
            });
        }
        if centers.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::invalid("RBF centers must be finite"));
        }
        if widths.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::invalid("RBF widths must be positive and finite"));
        }
        Ok(Self { centers, widths })
    }

    /// Centers `k * pattern` for `k = 1..=count`, all with the same width.
    ///
    /// `pattern = [-1, 0, 1]` gives the centers `[-k, 0, k]`.
    pub fn scaled_pattern(pattern: &[f64], count: usize, width: f64) -> Result<Self> {
        let centers = (1..=count)
            .map(|k| pattern.iter().map(|p| p * k as f64).collect())
            .collect();
        Self::new(centers, vec![width; count])
    }

    pub fn dim(&self) -> usize {
        self.centers[0].len()
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn centers(&self) -> &[Vec<f64>] {
        &self.centers
    }

    pub fn widths(&self) -> &[f64] {
        &self.widths
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(())
    }

    pub fn basis(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        Ok(self
            .centers
            .iter()
            .zip(&self.widths)
            .map(|(c, w)| {
                let d2: f64 = c.iter().zip(x).map(|(ci, xi)| (xi - ci) * (xi - ci)).sum();
                (-d2 / (w * w)).exp()
            })
            .collect())
    }

    /// `||S(x)||_2 + 1`.
    pub fn mu(&self, x: &[f64]) -> Result<f64> {
        let s = self.basis(x)?;
        Ok(s.iter().map(|v| v * v).sum::<f64>().sqrt() + 1.0)
    }
}
