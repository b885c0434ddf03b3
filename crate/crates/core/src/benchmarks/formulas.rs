//! Closed-form objective and constraint formulas, free of any problem
//! plumbing so tests can call them with hand-picked noise factors.

use std::f64::consts::PI;

/// `sum eps_n x_n^2`.
pub fn noisy_sphere(x: &[f64], eps: &[f64]) -> f64 {
    x.iter().zip(eps).map(|(v, e)| e * v * v).sum()
}

/// `sum x_n^(2n) - exp(-sum eps_n x_n^(2n))`, `n` counted from 1.
pub fn f1(x: &[f64], eps: &[f64]) -> f64 {
    let mut plain = 0.0;
    let mut weighted = 0.0;
    for (n, (v, e)) in x.iter().zip(eps).enumerate() {
        let p = v.powi(2 * (n as i32 + 1));
        plain += p;
        weighted += e * p;
    }
    plain - (-weighted).exp()
}

pub fn abs_sum(x: &[f64]) -> f64 {
    x.iter().map(|v| v.abs()).sum()
}

/// `(sum |x_n - n pi|) exp(-sum |sin |x_n - n pi||)`.
pub fn f2(x: &[f64]) -> f64 {
    let mut s = 0.0;
    let mut e = 0.0;
    for (i, v) in x.iter().enumerate() {
        let d = (v - (i + 1) as f64 * PI).abs();
        s += d;
        e += d.sin().abs();
    }
    s * (-e).exp()
}

/// `x_1^2 + sum_{n>=2} |x_n^3|`.
pub fn f3(x: &[f64]) -> f64 {
    x[0] * x[0] + x[1..].iter().map(|v| (v * v * v).abs()).sum::<f64>()
}

/// Diamond clause `|x_1 - 2a| + sum_{n>=2} |x_n| - a`.
pub fn f3_diamond(x: &[f64], a: f64) -> f64 {
    (x[0] - 2.0 * a).abs() + x[1..].iter().map(|v| v.abs()).sum::<f64>() - a
}

/// Ball clause `sum (x_n - 5a)^2 - a^2`.
pub fn f3_ball(x: &[f64], a: f64) -> f64 {
    x.iter().map(|v| (v - 5.0 * a).powi(2)).sum::<f64>() - a * a
}

/// Lattice sum `sum_{i,j} (|i|+|j|) exp(-a (x-i)^2 - a (y-j)^2)` over
/// `-N <= i, j <= N`, restricted to lattice points within L∞ distance 2 of
/// `(x, y)`; farther terms carry weight below `exp(-9a)`.
pub fn f4(x: f64, y: f64, n: i64, a: f64) -> f64 {
    let range = |c: f64| {
        let lo = ((c - 2.0).ceil() as i64).max(-n);
        let hi = ((c + 2.0).floor() as i64).min(n);
        lo..=hi
    };
    let mut s = 0.0;
    for i in range(x) {
        let wx = (-a * (x - i as f64).powi(2)).exp();
        for j in range(y) {
            let w = (i.abs() + j.abs()) as f64;
            if w != 0.0 {
                s += w * wx * (-a * (y - j as f64).powi(2)).exp();
            }
        }
    }
    s
}

/// `min over lattice diamonds of |x-i| + |y-j| - 1/a`; non-positive exactly
/// on the union of the `(2N+1)^2` diamonds.
pub fn f4_diamond_residual(x: f64, y: f64, n: i64, a: f64) -> f64 {
    let cands = |c: f64| {
        let f = c.floor() as i64;
        [f.clamp(-n, n), (f + 1).clamp(-n, n)]
    };
    let mut best = f64::INFINITY;
    for i in cands(x) {
        for j in cands(y) {
            best = best.min((x - i as f64).abs() + (y - j as f64).abs());
        }
    }
    best - 1.0 / a
}

/// `1 + x_D^2 / b^2 - sum_{n<D} x_n^2 / a^2` (feasible when `<= 0`).
pub fn f5_hyperboloid(x: &[f64], a: f64, b: f64) -> f64 {
    let (last, head) = x.split_last().expect("non-empty point");
    1.0 + last * last / (b * b) - head.iter().map(|v| v * v).sum::<f64>() / (a * a)
}

/// `(sum_{n<D} x_n^2 - a^2)^2 + x_D^2`, zero exactly on the optimal sphere.
pub fn f5_manifold(x: &[f64], a: f64) -> f64 {
    let (last, head) = x.split_last().expect("non-empty point");
    (head.iter().map(|v| v * v).sum::<f64>() - a * a).powi(2) + last * last
}

pub fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

pub fn floor_sphere(x: &[f64]) -> f64 {
    sphere(x).floor()
}

/// One term `|x| + cos(x^2)` of the f6 sum.
pub fn f6_term(x: f64) -> f64 {
    x.abs() + (x * x).cos()
}

pub fn f6_inner(x: &[f64]) -> f64 {
    x.iter().map(|&v| f6_term(v)).sum()
}

pub fn f6(x: &[f64]) -> f64 {
    f6_inner(x).floor()
}
