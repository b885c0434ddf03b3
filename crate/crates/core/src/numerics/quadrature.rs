//! `I(beta, k) = ∫_0^∞ sin(k x) exp(-beta x) / x dx`.
//!
//! The half-axis is cut at the zeros `m pi / k` of `sin(k x)`. Each half
//! period is integrated with a fixed 24-point Gauss–Legendre rule, which makes
//! the integral an alternating series `a_0 + a_1 + ...`. With enough damping
//! the tail bound `exp(-beta X) / (beta X)` drops below the tolerance and the
//! series is simply truncated; otherwise the partial sums are accelerated by
//! the Euler transform (repeated averaging of neighbouring partial sums).

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

use super::gauss::GaussLegendre;
use crate::error::{BenchError, Result};

const RULE_POINTS: usize = 24;
/// Half periods examined by the truncation branch before switching to Euler.
const TRUNCATION_SEGMENTS: usize = 64;
const EULER_START: usize = 16;
const EULER_GROW: usize = 8;
const SEGMENT_BUDGET: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub est_error: f64,
    pub segments_used: usize,
}

fn rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(RULE_POINTS))
}

pub fn oscillatory_integral(beta: f64, k: u32, tol: f64) -> Result<QuadratureResult> {
    if !(0.0..=10.0).contains(&beta) {
        return Err(BenchError::contract(format!("beta must lie in [0, 10], got {beta}")));
    }
    if !(1..=10).contains(&k) {
        return Err(BenchError::contract(format!("k must lie in 1..=10, got {k}")));
    }
    if !(tol >= 1e-12) {
        return Err(BenchError::contract(format!("tolerance must be >= 1e-12, got {tol}")));
    }

    let kf = f64::from(k);
    let half = PI / kf;
    // split strongly damped half periods so the rule sees a mild exponential
    let pieces = ((beta * half) / 4.0).ceil().max(1.0) as usize;
    let integrand = |x: f64| {
        let s = if x == 0.0 { kf } else { (kf * x).sin() / x };
        s * (-beta * x).exp()
    };
    let segment = |m: usize| {
        let lo = m as f64 * half;
        rule().integrate_composite(lo, lo + half, pieces, integrand)
    };

    let mut terms: Vec<f64> = Vec::with_capacity(EULER_START);

    if beta > 0.0 {
        let mut sum = 0.0;
        for m in 0..TRUNCATION_SEGMENTS {
            let a = segment(m);
            terms.push(a);
            sum += a;
            let x = (m + 1) as f64 * half;
            let tail = (-beta * x).exp() / (beta * x);
            if tail <= 0.25 * tol {
                return Ok(QuadratureResult {
                    value: sum,
                    est_error: tail,
                    segments_used: m + 1,
                });
            }
        }
    }

    let mut n = EULER_START.max(terms.len());
    loop {
        while terms.len() < n {
            terms.push(segment(terms.len()));
        }
        let (value, est_error) = euler_accelerate(&terms);
        if est_error <= tol {
            return Ok(QuadratureResult {
                value,
                est_error,
                segments_used: n,
            });
        }
        if n >= SEGMENT_BUDGET {
            return Err(BenchError::Convergence {
                reason: format!("oscillatory integral beta={beta} k={k} within {n} half periods"),
                best: value,
                est_error,
            });
        }
        n = (n + EULER_GROW).min(SEGMENT_BUDGET);
    }
}

/// Euler transform of an alternating series given by its terms: repeatedly
/// average adjacent partial sums. Returns the last entry of the final level
/// and its distance from the last entry of the level before.
fn euler_accelerate(terms: &[f64]) -> (f64, f64) {
    let mut level: Vec<f64> = terms
        .iter()
        .scan(0.0, |s, &a| {
            *s += a;
            Some(*s)
        })
        .collect();
    let mut prev_last = *level.last().unwrap_or(&0.0);
    let mut diff = f64::INFINITY;
    while level.len() > 1 {
        for i in 0..level.len() - 1 {
            level[i] = 0.5 * (level[i] + level[i + 1]);
        }
        level.pop();
        let last = *level.last().unwrap();
        diff = (last - prev_last).abs();
        prev_last = last;
    }
    (prev_last, diff)
}

/// `pi/2 - arctan(beta)`. Equals `I(beta, k)` only for `k = 1` or `beta = 0`;
/// see [`sinc_laplace_integral`] for general `k`.
pub fn closed_form_integral(beta: f64) -> f64 {
    FRAC_PI_2 - beta.atan()
}

/// Exact value of `I(beta, k) = arctan(k / beta)` (`pi/2` at `beta = 0`).
pub fn sinc_laplace_integral(beta: f64, k: f64) -> f64 {
    k.atan2(beta)
}
