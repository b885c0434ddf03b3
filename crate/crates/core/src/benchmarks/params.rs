//! Parameter records for each benchmark family. Every record validates its
//! own domain in `validate`.

use crate::error::{BenchError, Result};
use crate::numerics::DEFAULT_STEP;

fn need(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(BenchError::contract(msg()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoisyParams {
    pub dim: usize,
}

impl Default for NoisyParams {
    fn default() -> Self {
        Self { dim: 5 }
    }
}

impl NoisyParams {
    pub fn validate(&self) -> Result<()> {
        need(self.dim >= 1, || format!("noisy family needs D >= 1, got {}", self.dim))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinkParams {
    pub dim: usize,
}

impl Default for KinkParams {
    fn default() -> Self {
        Self { dim: 3 }
    }
}

impl KinkParams {
    pub fn validate(&self) -> Result<()> {
        need(self.dim >= 1, || format!("kinked family needs D >= 1, got {}", self.dim))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsolatedParams {
    pub dim: usize,
    pub a: f64,
}

impl Default for IsolatedParams {
    fn default() -> Self {
        Self { dim: 2, a: 1.0 }
    }
}

impl IsolatedParams {
    pub fn validate(&self) -> Result<()> {
        need(self.dim >= 1, || format!("f3 needs D >= 1, got {}", self.dim))?;
        need(self.a >= 1.0 && self.a.is_finite(), || format!("f3 needs a >= 1, got {}", self.a))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPeaksParams {
    pub n: i64,
    pub a: f64,
}

impl Default for GridPeaksParams {
    fn default() -> Self {
        Self { n: 100, a: 10.0 }
    }
}

impl GridPeaksParams {
    pub fn validate(&self) -> Result<()> {
        need(self.n >= 1, || format!("f4 needs N >= 1, got {}", self.n))?;
        need(self.a > 0.0 && self.a.is_finite(), || format!("f4 needs a > 0, got {}", self.a))
    }

    /// Number of isolated feasible diamonds, `(2N+1)^2`.
    pub fn region_count(&self) -> u64 {
        let side = (2 * self.n + 1) as u64;
        side * side
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperboloidParams {
    pub dim: usize,
    pub a: f64,
    pub b: f64,
    /// Box half-width; defaults to `10 a`.
    pub half_width: Option<f64>,
}

impl Default for HyperboloidParams {
    fn default() -> Self {
        Self {
            dim: 3,
            a: 1.0,
            b: 1.0,
            half_width: None,
        }
    }
}

impl HyperboloidParams {
    pub fn width(&self) -> f64 {
        self.half_width.unwrap_or(10.0 * self.a)
    }

    pub fn validate(&self) -> Result<()> {
        need(self.dim >= 3, || format!("f5 needs D >= 3, got {}", self.dim))?;
        need(self.a >= 1.0 && self.b >= 1.0 && self.a.is_finite() && self.b.is_finite(), || {
            format!("f5 needs a, b >= 1, got a={} b={}", self.a, self.b)
        })?;
        need(self.width() >= self.a, || {
            format!("f5 box half-width {} must contain the optimum radius {}", self.width(), self.a)
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloorParams {
    pub dim: usize,
}

impl Default for FloorParams {
    fn default() -> Self {
        Self { dim: 1 }
    }
}

impl FloorParams {
    pub fn validate(&self) -> Result<()> {
        need(self.dim >= 1, || format!("floor family needs D >= 1, got {}", self.dim))
    }
}

/// Measured step response of the vibrating system.
pub const VIBRATION_TIMES: [f64; 11] = [0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0];
pub const VIBRATION_DATA: [f64; 11] = [
    0.0, 1.0706, 1.3372, 0.8277, 0.9507, 1.0848, 0.9814, 0.9769, 1.0169, 1.0012, 0.9933,
];

#[derive(Debug, Clone, PartialEq)]
pub struct VibrationParams {
    pub times: Vec<f64>,
    pub data: Vec<f64>,
    pub step: f64,
}

impl Default for VibrationParams {
    fn default() -> Self {
        Self {
            times: VIBRATION_TIMES.to_vec(),
            data: VIBRATION_DATA.to_vec(),
            step: DEFAULT_STEP,
        }
    }
}

impl VibrationParams {
    pub fn validate(&self) -> Result<()> {
        need(!self.times.is_empty() && self.times.len() == self.data.len(), || {
            format!(
                "f7 data table needs matching non-empty columns, got {} times and {} values",
                self.times.len(),
                self.data.len()
            )
        })?;
        need(self.step > 0.0 && self.step.is_finite(), || format!("f7 step must be > 0, got {}", self.step))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralParams {
    pub beta_max: f64,
    pub k_min: u32,
    pub k_max: u32,
    pub tol: f64,
}

impl Default for IntegralParams {
    fn default() -> Self {
        Self {
            beta_max: 10.0,
            k_min: 1,
            k_max: 10,
            tol: 1e-10,
        }
    }
}

impl IntegralParams {
    pub fn validate(&self) -> Result<()> {
        need(self.beta_max > 0.0 && self.beta_max <= 10.0, || {
            format!("f8 beta range must be [0, b] with 0 < b <= 10, got b={}", self.beta_max)
        })?;
        need(1 <= self.k_min && self.k_min <= self.k_max && self.k_max <= 10, || {
            format!("f8 k range must lie in 1..=10, got {}..={}", self.k_min, self.k_max)
        })?;
        need(self.tol >= 1e-12, || format!("f8 tolerance must be >= 1e-12, got {}", self.tol))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathParams {
    pub nodes: usize,
}

impl Default for PathParams {
    fn default() -> Self {
        Self { nodes: 16 }
    }
}

impl PathParams {
    pub fn validate(&self) -> Result<()> {
        need(self.nodes >= 4, || format!("path problems need M >= 4, got {}", self.nodes))
    }
}

/// Rope hinged at `(-a, 0)` and `(a, 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RopeParams {
    pub a: f64,
    pub length: f64,
    pub nodes: usize,
}

impl Default for RopeParams {
    fn default() -> Self {
        Self {
            a: 1.0,
            length: 2.3504,
            nodes: 32,
        }
    }
}

impl RopeParams {
    pub fn validate(&self) -> Result<()> {
        need(self.a > 0.0 && self.a.is_finite(), || format!("rope needs a > 0, got {}", self.a))?;
        need(self.length > 2.0 * self.a, || {
            format!("rope needs L > 2a, got L={} a={}", self.length, self.a)
        })?;
        need(self.nodes >= 4, || format!("path problems need M >= 4, got {}", self.nodes))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        NoisyParams::default().validate().unwrap();
        KinkParams::default().validate().unwrap();
        IsolatedParams::default().validate().unwrap();
        GridPeaksParams::default().validate().unwrap();
        HyperboloidParams::default().validate().unwrap();
        FloorParams::default().validate().unwrap();
        VibrationParams::default().validate().unwrap();
        IntegralParams::default().validate().unwrap();
        PathParams::default().validate().unwrap();
        RopeParams::default().validate().unwrap();
    }

    #[test]
    fn domain_violations() {
        assert!(NoisyParams { dim: 0 }.validate().is_err());
        assert!(IsolatedParams { dim: 2, a: 0.5 }.validate().is_err());
        assert!(GridPeaksParams { n: 0, a: 10.0 }.validate().is_err());
        assert!(HyperboloidParams { dim: 2, ..Default::default() }.validate().is_err());
        assert!(HyperboloidParams { b: 0.5, ..Default::default() }.validate().is_err());
        assert!(RopeParams { length: 2.0, ..Default::default() }.validate().is_err());
        assert!(PathParams { nodes: 3 }.validate().is_err());
        let bad = VibrationParams {
            data: vec![0.0; 3],
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        assert!(IntegralParams { k_max: 11, ..Default::default() }.validate().is_err());
    }

    #[test]
    fn grid_region_count() {
        assert_eq!(GridPeaksParams::default().region_count(), 40_401);
    }
}
