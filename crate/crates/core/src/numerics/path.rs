//! Discretized curves `y(x)` on a uniform abscissa grid and the polyline
//! functionals used by the path benchmarks.

use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};

/// Curve with pinned endpoints and `M` free interior ordinates at spacing
/// `h = (x_hi - x_lo) / (M + 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Path {
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
    pub interior: Vec<f64>,
}

impl Path {
    pub fn new(x_lo: f64, x_hi: f64, y_lo: f64, y_hi: f64, interior: Vec<f64>) -> Result<Self> {
        if interior.is_empty() {
            return Err(BenchError::contract("a path needs at least one interior node"));
        }
        if !(x_hi > x_lo) || !x_lo.is_finite() || !x_hi.is_finite() {
            return Err(BenchError::contract(format!(
                "path abscissa range [{x_lo}, {x_hi}] is empty"
            )));
        }
        Ok(Self {
            x_lo,
            x_hi,
            y_lo,
            y_hi,
            interior,
        })
    }

    /// Samples `f` at the interior grid abscissae.
    pub fn sampled<F: Fn(f64) -> f64>(
        x_lo: f64,
        x_hi: f64,
        y_lo: f64,
        y_hi: f64,
        m: usize,
        f: F,
    ) -> Result<Self> {
        let h = (x_hi - x_lo) / (m as f64 + 1.0);
        let interior = (1..=m).map(|i| f(x_lo + i as f64 * h)).collect();
        Self::new(x_lo, x_hi, y_lo, y_hi, interior)
    }

    pub fn interior_len(&self) -> usize {
        self.interior.len()
    }

    pub fn spacing(&self) -> f64 {
        (self.x_hi - self.x_lo) / (self.interior.len() as f64 + 1.0)
    }

    /// All `M + 2` ordinates, endpoints included.
    pub fn ordinates(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.interior.len() + 2);
        v.push(self.y_lo);
        v.extend_from_slice(&self.interior);
        v.push(self.y_hi);
        v
    }

    /// Abscissae of the interior nodes.
    pub fn interior_abscissae(&self) -> Vec<f64> {
        let h = self.spacing();
        (1..=self.interior.len())
            .map(|i| self.x_lo + i as f64 * h)
            .collect()
    }

    /// Same grid and endpoints, new interior.
    pub fn with_interior(&self, interior: &[f64]) -> Result<Self> {
        if interior.len() != self.interior.len() {
            return Err(BenchError::contract(format!(
                "expected {} interior ordinates, got {}",
                self.interior.len(),
                interior.len()
            )));
        }
        Ok(Self {
            interior: interior.to_vec(),
            ..self.clone()
        })
    }
}

/// Discrete functionals with analytic gradients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Functional {
    Length,
    Energy,
    /// `length - L`; its gradient does not depend on `L`.
    LengthResidual,
}

/// Polyline length `sum sqrt(h^2 + dy_i^2)`.
pub fn path_length(p: &Path) -> f64 {
    let h = p.spacing();
    let y = p.ordinates();
    y.windows(2).map(|w| h.hypot(w[1] - w[0])).sum()
}

/// Midpoint-weighted polyline energy `sum (y_i + y_{i+1})/2 * sqrt(h^2 + dy_i^2)`.
pub fn path_energy(p: &Path) -> f64 {
    let h = p.spacing();
    let y = p.ordinates();
    y.windows(2)
        .map(|w| 0.5 * (w[0] + w[1]) * h.hypot(w[1] - w[0]))
        .sum()
}

pub fn path_length_residual(p: &Path, target: f64) -> f64 {
    path_length(p) - target
}

/// Gradient of the chosen functional with respect to the interior ordinates.
pub fn functional_gradient(p: &Path, functional: Functional) -> Vec<f64> {
    let h = p.spacing();
    let y = p.ordinates();
    let seg: Vec<(f64, f64)> = y
        .windows(2)
        .map(|w| {
            let d = w[1] - w[0];
            (d, h.hypot(d))
        })
        .collect();
    (1..=p.interior.len())
        .map(|j| {
            let (dl, ll) = seg[j - 1];
            let (dr, lr) = seg[j];
            match functional {
                Functional::Length | Functional::LengthResidual => dl / ll - dr / lr,
                Functional::Energy => {
                    let ml = 0.5 * (y[j - 1] + y[j]);
                    let mr = 0.5 * (y[j] + y[j + 1]);
                    0.5 * ll + ml * dl / ll + 0.5 * lr - mr * dr / lr
                }
            }
        })
        .collect()
}
