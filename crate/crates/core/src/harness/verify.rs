//! Build-time oracle suite behind `bench verify`.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::benchmarks::{self, formulas, Overrides, F6_REPORTED_ENDPOINTS, VIBRATION_DATA, VIBRATION_TIMES};
use crate::error::Result;
use crate::noise::{self, NoiseKey, NoisePolicy};
use crate::numerics::{
    analytic_step_response, closed_form_integral, functional_gradient, oscillatory_integral, path_energy,
    path_length, path_length_residual, rk4_step_response, sinc_laplace_integral, Functional, Path, DEFAULT_STEP,
};
use crate::problem::{OptimumSpec, OPTIMUM_VALUE_TOL};

/// Upper 0.1% point of the chi-square distribution with 15 degrees of freedom.
pub const CHI2_15_P001: f64 = 37.697;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn within(&mut self, name: impl Into<String>, measured: f64, tolerance: f64) {
        self.checks.push(CheckResult {
            name: name.into(),
            measured,
            tolerance,
            passed: measured <= tolerance,
        });
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{} {:<58} measured {:<12.4e} tol {:.1e}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.measured,
                c.tolerance
            )?;
        }
        let failed = self.failures().count();
        write!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

fn optimum_checks(report: &mut VerifyReport) -> Result<()> {
    for id in benchmarks::CATALOG {
        let p = benchmarks::build_default(id)?;
        let measured = match &p.optimum {
            OptimumSpec::PointSet { points, value } => {
                let mut worst: f64 = 0.0;
                for x in points {
                    worst = worst.max((p.evaluate_expected(x)? - value).abs());
                    if !p.is_feasible(x)?.feasible {
                        worst = f64::INFINITY;
                    }
                }
                worst
            }
            _ => match p.self_check() {
                Ok(()) => 0.0,
                Err(_) => f64::INFINITY,
            },
        };
        report.within(format!("optimum self-check {id}"), measured, OPTIMUM_VALUE_TOL);
    }
    Ok(())
}

fn ode_checks(report: &mut VerifyReport) -> Result<()> {
    let sim = rk4_step_response(0.25, 2.0, &VIBRATION_TIMES, DEFAULT_STEP)?;
    let mut rk: f64 = 0.0;
    let mut table: f64 = 0.0;
    for ((t, y), d) in VIBRATION_TIMES.iter().zip(&sim.y).zip(&VIBRATION_DATA) {
        let exact = analytic_step_response(0.25, 2.0, *t)?;
        rk = rk.max((y - exact).abs());
        table = table.max((exact - d).abs());
    }
    report.within("rk4 vs analytic at table times (zeta=0.25, omega=2)", rk, 1e-6);
    report.within("analytic response vs measured table", table, 1.5e-3);

    let times: Vec<f64> = (0..=10).map(f64::from).collect();
    let mut grid: f64 = 0.0;
    for i in 0..5 {
        for j in 0..5 {
            let (z, w) = (0.1 + 0.2 * i as f64, 0.5 + 0.875 * j as f64);
            let sim = rk4_step_response(z, w, &times, DEFAULT_STEP)?;
            for (t, y) in times.iter().zip(&sim.y) {
                grid = grid.max((y - analytic_step_response(z, w, *t)?).abs());
            }
        }
    }
    report.within("rk4 vs analytic on 5x5 (zeta, omega) grid", grid, 1e-6);
    Ok(())
}

fn quadrature_checks(report: &mut VerifyReport) -> Result<()> {
    let betas = [0.0, 0.25, 0.5, 1.0, 2.0];
    let ks = [1u32, 3, 5, 10];
    let mut exact: f64 = 0.0;
    let mut k_one: f64 = 0.0;
    for &b in &betas {
        for &k in &ks {
            let v = oscillatory_integral(b, k, 1e-10)?.value;
            exact = exact.max((v - sinc_laplace_integral(b, f64::from(k))).abs());
            if k == 1 {
                k_one = k_one.max((v - closed_form_integral(b)).abs());
            }
        }
    }
    report.within("quadrature vs arctan(k/beta) on 20-point grid", exact, 1e-8);
    report.within("quadrature at k=1 vs pi/2 - arctan(beta)", k_one, 1e-8);
    let origin = oscillatory_integral(0.0, 1, 1e-10)?.value;
    report.within("quadrature at (beta=0, k=1) vs pi/2", (origin - FRAC_PI_2).abs(), 1e-8);

    let f8 = benchmarks::build_default("f8")?;
    let mut rises: f64 = 0.0;
    for k in 1..=10 {
        let mut prev = f64::INFINITY;
        for i in 0..=20 {
            let v = f8.evaluate_expected(&[0.5 * i as f64, f64::from(k)])?;
            rises = rises.max(v - prev);
            prev = v;
        }
    }
    report.within("f8 non-increasing in beta at fixed k", rises.max(0.0), 0.0);
    Ok(())
}

fn gradient_check(report: &mut VerifyReport) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e37);
    let step = 1e-6;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let ys: Vec<f64> = (0..8).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let p = Path::new(-1.0, 1.0, 0.0, 0.0, ys)?;
        let checks: [(Functional, fn(&Path) -> f64); 3] = [
            (Functional::Length, path_length),
            (Functional::Energy, path_energy),
            (Functional::LengthResidual, |q| path_length_residual(q, 2.3504)),
        ];
        for (which, f) in checks {
            let g = functional_gradient(&p, which);
            for (i, gi) in g.iter().enumerate() {
                let mut a = p.clone();
                let mut b = p.clone();
                a.interior[i] += step;
                b.interior[i] -= step;
                let fd = (f(&a) - f(&b)) / (2.0 * step);
                worst = worst.max((gi - fd).abs() / gi.abs().max(1.0));
            }
        }
    }
    report.within("path gradients vs central differences (100 paths, M=8)", worst, 1e-6);
    Ok(())
}

fn f6_checks(report: &mut VerifyReport) {
    let inner = benchmarks::f6_boundary_root(1.3, 1.5);
    let outer = benchmarks::f6_boundary_root(1.8, 2.0);
    let (lo, hi) = F6_REPORTED_ENDPOINTS;
    report.within("f6 inner endpoint: bisection root vs 1.41299", (inner - lo).abs(), 5e-6);
    report.within("f6 outer endpoint: bisection root vs 1.89714", (outer - hi).abs(), 5e-6);
    let residual = (formulas::f6_term(inner) - 1.0).abs().max((formulas::f6_term(outer) - 1.0).abs());
    report.within("f6 endpoint residual |x| + cos(x^2) - 1", residual, 1e-12);
}

fn noise_checks(report: &mut VerifyReport) -> Result<()> {
    let mut diff: f64 = 0.0;
    for i in 0..1000 {
        let k = NoiseKey::new(42, i);
        if noise::uniform(k, 3).to_bits() != noise::uniform(k, 3).to_bits() {
            diff += 1.0;
        }
    }
    report.within("noise bit-identical for equal keys", diff, 0.0);

    let f1 = benchmarks::build("f1", &Overrides::new(), NoisePolicy::PerEvaluation)?;
    let origin = vec![0.0; f1.dimension];
    let mut dev: f64 = 0.0;
    for i in 0..1000 {
        dev = dev.max((f1.evaluate(&origin, NoiseKey::new(7, i))? + 1.0).abs());
    }
    report.within("f1 at origin equals -1 under 1000 keys", dev, 0.0);

    let n = 100_000u64;
    let mut bins = [0u64; 16];
    for i in 0..n {
        let u = noise::uniform(NoiseKey::new(2024, i), 0);
        bins[((u * 16.0) as usize).min(15)] += 1;
    }
    let expect = n as f64 / 16.0;
    let chi2: f64 = bins.iter().map(|&c| (c as f64 - expect).powi(2) / expect).sum();
    report.within("noise chi-square, 16 bins, 1e5 draws (p=0.001)", chi2, CHI2_15_P001);
    Ok(())
}

fn feasibility_checks(report: &mut VerifyReport) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for a in [1.0, 2.0, 5.0] {
        let mut o = Overrides::new();
        o.insert("a".into(), a);
        let p = benchmarks::build("f3", &o, NoisePolicy::default())?;
        let w = 6.0 * a;
        let mut overlap = 0u64;
        for _ in 0..1_000_000 {
            let x = [rng.gen_range(-w..=w), rng.gen_range(-w..=w)];
            let d = formulas::f3_diamond(&x, a) <= 0.0;
            let b = formulas::f3_ball(&x, a) <= 0.0;
            if d && b {
                overlap += 1;
            }
            if p.is_feasible(&x)?.feasible != (d || b) {
                overlap += 1;
            }
        }
        report.within(format!("f3 union disjoint and exact (a={a}, 1e6 samples)"), overlap as f64, 0.0);
    }

    let f4 = benchmarks::build_default("f4")?;
    let (n, inv_a) = (100.0f64, 0.1);
    let w = n + inv_a;
    let mut mismatch = 0u64;
    for _ in 0..100_000 {
        let x = [rng.gen_range(-w..=w), rng.gen_range(-w..=w)];
        let i = x[0].round().clamp(-n, n);
        let j = x[1].round().clamp(-n, n);
        let direct = (x[0] - i).abs() + (x[1] - j).abs() <= inv_a;
        if f4.is_feasible(&x)?.feasible != direct {
            mismatch += 1;
        }
    }
    report.within("f4 diamond membership vs direct recomputation (1e5)", mismatch as f64, 0.0);
    let corner = f4.evaluate_expected(&[n, n])?;
    report.within("f4 corner value vs 200", (corner - 200.0).abs(), 0.02);
    Ok(())
}

/// Runs every oracle check; failures are entries of the report, not errors.
pub fn verify_suite() -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    optimum_checks(&mut report)?;
    ode_checks(&mut report)?;
    quadrature_checks(&mut report)?;
    gradient_check(&mut report)?;
    f6_checks(&mut report);
    noise_checks(&mut report)?;
    feasibility_checks(&mut report)?;
    Ok(report)
}
