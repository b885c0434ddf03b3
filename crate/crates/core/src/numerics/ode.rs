//! Step response of the damped second-order oscillator
//! `y''/w^2 + 2 z y'/w + y = u(t)` with a unit step input.

use crate::error::{BenchError, Result};

/// Default RK4 step (seconds).
pub const DEFAULT_STEP: f64 = 0.01;

/// Displacement samples at the requested times.
#[derive(Debug, Clone, PartialEq)]
pub struct OdeSamples {
    pub t: Vec<f64>,
    pub y: Vec<f64>,
}

/// Integrates the step response with classical fixed-step RK4 from rest
/// (`y(0) = 0`, `y'(0) = 0`) and samples it at `t_grid`.
///
/// Grid times are snapped to the nearest multiple of `h`.
pub fn rk4_step_response(zeta: f64, omega: f64, t_grid: &[f64], h: f64) -> Result<OdeSamples> {
    if !(zeta > 0.0 && zeta.is_finite()) {
        return Err(BenchError::contract(format!("damping ratio must be > 0, got {zeta}")));
    }
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(BenchError::contract(format!(
            "natural frequency must be > 0, got {omega}"
        )));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(BenchError::contract(format!("step must be > 0, got {h}")));
    }
    let mut steps = Vec::with_capacity(t_grid.len());
    for (i, &t) in t_grid.iter().enumerate() {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(BenchError::contract(format!("sample time {t} is negative")));
        }
        if i > 0 && t <= t_grid[i - 1] {
            return Err(BenchError::contract("sample times must be strictly increasing"));
        }
        steps.push((t / h).round() as u64);
    }

    let w2 = omega * omega;
    let c = 2.0 * zeta * omega;
    // state (y, v); u = 1 for t >= 0
    let rhs = |y: f64, v: f64| (v, w2 * (1.0 - y) - c * v);

    let mut y = 0.0;
    let mut v = 0.0;
    let mut n = 0u64;
    let mut out = Vec::with_capacity(t_grid.len());
    for &target in &steps {
        while n < target {
            let (k1y, k1v) = rhs(y, v);
            let (k2y, k2v) = rhs(y + 0.5 * h * k1y, v + 0.5 * h * k1v);
            let (k3y, k3v) = rhs(y + 0.5 * h * k2y, v + 0.5 * h * k2v);
            let (k4y, k4v) = rhs(y + h * k3y, v + h * k3v);
            y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
            v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
            n += 1;
        }
        out.push(y);
    }
    Ok(OdeSamples {
        t: t_grid.to_vec(),
        y: out,
    })
}

/// Closed-form underdamped step response
/// `1 - exp(-z w t) [cos(wd t) + (z w / wd) sin(wd t)]`, `wd = w sqrt(1 - z^2)`.
pub fn analytic_step_response(zeta: f64, omega: f64, t: f64) -> Result<f64> {
    if !(zeta > 0.0 && zeta < 1.0) {
        return Err(BenchError::contract(format!(
            "analytic response needs 0 < zeta < 1, got {zeta}"
        )));
    }
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(BenchError::contract(format!(
            "natural frequency must be > 0, got {omega}"
        )));
    }
    if !(t >= 0.0) {
        return Err(BenchError::contract(format!("time must be >= 0, got {t}")));
    }
    let wd = omega * (1.0 - zeta * zeta).sqrt();
    let s = zeta * omega;
    Ok(1.0 - (-s * t).exp() * ((wd * t).cos() + s / wd * (wd * t).sin()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn starts_at_rest() {
        let s = rk4_step_response(0.25, 2.0, &[0.0], 0.01).unwrap();
        assert_eq!(s.y[0], 0.0);
        assert_eq!(analytic_step_response(0.25, 2.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn first_table_entry() {
        let s = rk4_step_response(0.25, 2.0, &[0.0, 1.0], 0.01).unwrap();
        assert!((s.y[1] - 1.0706).abs() < 2e-3);
        let a = analytic_step_response(0.25, 2.0, 1.0).unwrap();
        assert!((a - 1.0706).abs() < 1e-3);
        let a10 = analytic_step_response(0.25, 2.0, 10.0).unwrap();
        assert!((a10 - 0.9933).abs() < 1e-3);
    }

    #[test]
    fn rk4_matches_closed_form_at_t3() {
        let s = rk4_step_response(0.25, 2.0, &[3.0], 0.01).unwrap();
        let a = analytic_step_response(0.25, 2.0, 3.0).unwrap();
        assert!((s.y[0] - a).abs() < 1e-6);
    }

    #[test]
    fn rk4_matches_closed_form_on_parameter_grid() {
        let grid: Vec<f64> = (0..=10).map(f64::from).collect();
        let mut worst: f64 = 0.0;
        for i in 0..5 {
            let zeta = 0.1 + 0.2 * i as f64;
            for j in 0..5 {
                let omega = 0.5 + 0.875 * j as f64;
                let s = rk4_step_response(zeta, omega, &grid, 0.01).unwrap();
                for (t, y) in grid.iter().zip(&s.y) {
                    let a = analytic_step_response(zeta, omega, *t).unwrap();
                    worst = worst.max((y - a).abs());
                }
            }
        }
        assert!(worst <= 1e-6, "worst {worst}");
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(rk4_step_response(0.0, 2.0, &[1.0], 0.01).is_err());
        assert!(rk4_step_response(0.25, -1.0, &[1.0], 0.01).is_err());
        assert!(rk4_step_response(0.25, 2.0, &[1.0], 0.0).is_err());
        assert!(rk4_step_response(0.25, 2.0, &[2.0, 1.0], 0.01).is_err());
        assert!(analytic_step_response(1.0, 2.0, 1.0).is_err());
        assert!(analytic_step_response(0.0, 2.0, 1.0).is_err());
    }
}
