//! Augmented-Lagrangian outer loop for the path problems. Each inner solve
//! minimizes `f + lambda h + mu/2 h^2` over the interior ordinates: a
//! derivative-free warm start on the first pass, then projected gradient
//! descent with Barzilai-Borwein steps and Armijo backtracking.

use std::fmt;

use super::{de, nm, random_point, reserve, rng_for, Evaluator, SolveResult, SolverConfig};
use crate::error::{BenchError, Result};
use crate::numerics::{functional_gradient, Functional};
use crate::problem::{Direction, Problem};

/// Share of the budget spent on the derivative-free warm start.
const WARM_START_SHARE: f64 = 0.3;
const ARMIJO: f64 = 1e-4;
/// Consecutive negligible improvements that end an inner solve.
const STALL_LIMIT: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InnerSolver {
    DifferentialEvolution,
    NelderMead,
}

impl fmt::Display for InnerSolver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InnerSolver::DifferentialEvolution => "de",
            InnerSolver::NelderMead => "nm",
        })
    }
}

pub fn augmented_lagrangian_path(problem: &Problem, inner: InnerSolver, cfg: &SolverConfig) -> Result<SolveResult> {
    let spec = problem
        .path
        .as_ref()
        .ok_or_else(|| BenchError::usage(format!("{} is not a path problem; use de, sa or nm", problem.id)))?;
    if problem.equalities.len() > 1 {
        return Err(BenchError::contract(format!(
            "{} has {} equality residuals, expected at most one",
            problem.id,
            problem.equalities.len()
        )));
    }
    if problem.direction != Direction::Minimize {
        return Err(BenchError::contract(format!("{} must be a minimization", problem.id)));
    }
    cfg.validate(problem.dimension)?;
    let usable = reserve(problem, cfg)?;
    let constrained = !problem.equalities.is_empty();
    let residual_functional = Functional::LengthResidual;

    let mut ev = Evaluator::new(problem, cfg.seed, usable);
    ev.set_incumbent_eq_tol(Some(cfg.al_tol_eq));
    let mut lambda = cfg.al_lambda0;
    let mut mu = if constrained { cfg.al_mu0 } else { 0.0 };
    if !constrained {
        lambda = 0.0;
    }
    ev.set_lagrangian(Some((lambda, mu)));

    let warm = ((usable as f64) * WARM_START_SHARE) as usize;
    match inner {
        InnerSolver::DifferentialEvolution => de::run(&mut ev, cfg, warm)?,
        InnerSolver::NelderMead => {
            let start = random_point(problem, &mut rng_for(cfg.seed));
            nm::run(&mut ev, cfg, &start, warm, cfg.nm_step)?;
        }
    }
    let mut x = ev
        .lagrangian_best()
        .map(|(x, _)| x.clone())
        .ok_or_else(|| BenchError::contract("budget too small for the warm start"))?;

    let gradient = |x: &[f64], lambda: f64, mu: f64| -> Result<(Vec<f64>, f64)> {
        let path = spec.path(x)?;
        let mut g = functional_gradient(&path, spec.objective);
        let mut h = 0.0;
        if constrained {
            h = (problem.equalities[0].h)(x);
            let w = lambda + mu * h;
            for (gi, ri) in g.iter_mut().zip(functional_gradient(&path, residual_functional)) {
                *gi += w * ri;
            }
        }
        Ok((g, h))
    };

    let mut prev_h = f64::INFINITY;
    let mut h = 0.0;
    for outer in 0..cfg.al_outer.max(1) {
        let outers_left = cfg.al_outer.max(1) - outer;
        let limit = ev.evals() + (usable - ev.evals()) / outers_left;
        ev.set_lagrangian(Some((lambda, mu)));
        let converged = descend(&mut ev, &mut x, limit, cfg.al_inner_tol, |x| gradient(x, lambda, mu))?;
        h = if constrained { (problem.equalities[0].h)(&x) } else { 0.0 };
        if h.abs() <= cfg.al_tol_eq && converged {
            return ev.finish(cfg);
        }
        if ev.remaining() == 0 {
            break;
        }
        if constrained {
            lambda += mu * h;
            if h.abs() > 0.25 * prev_h.abs() {
                mu *= cfg.al_growth;
            }
            prev_h = h;
        }
    }
    let best = ev.best().map(|(_, s)| s.score).unwrap_or(f64::NAN);
    Err(BenchError::Convergence {
        reason: format!(
            "augmented Lagrangian on {} stopped after {} evaluations with |h| = {:e}",
            problem.id,
            ev.evals(),
            h.abs()
        ),
        best,
        est_error: h.abs(),
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Projected gradient descent on the evaluator's current Lagrangian. Returns
/// whether it stopped on stationarity or stalled improvement rather than on
/// the evaluation limit.
fn descend<G>(ev: &mut Evaluator<'_>, x: &mut Vec<f64>, limit: usize, tol: f64, grad: G) -> Result<bool>
where
    G: Fn(&[f64]) -> Result<(Vec<f64>, f64)>,
{
    let problem = ev.problem;
    if ev.evals() >= limit {
        return Ok(false);
    }
    let mut fx = ev.eval(x)?.score;
    let (mut g, _) = grad(x)?;
    let mut alpha = 1e-2;
    let mut stall = 0;
    let mut trial = x.clone();
    loop {
        for (t, (xi, gi)) in trial.iter_mut().zip(x.iter().zip(&g)) {
            *t = xi - gi;
        }
        problem.snap(&mut trial);
        let pg = trial.iter().zip(x.iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if pg < 1e-12 {
            return Ok(true);
        }

        let mut accepted = None;
        while ev.evals() < limit {
            for (t, (xi, gi)) in trial.iter_mut().zip(x.iter().zip(&g)) {
                *t = xi - alpha * gi;
            }
            problem.snap(&mut trial);
            let s: Vec<f64> = trial.iter().zip(x.iter()).map(|(a, b)| a - b).collect();
            let f = ev.eval(&trial)?.score;
            if f <= fx + ARMIJO * dot(&g, &s) {
                accepted = Some((s, f));
                break;
            }
            alpha *= 0.5;
            if alpha < 1e-20 {
                return Ok(true);
            }
        }
        let Some((s, f)) = accepted else {
            return Ok(false);
        };

        let (gn, _) = grad(&trial)?;
        let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        alpha = if sy > 0.0 { (dot(&s, &s) / sy).clamp(1e-12, 1e6) } else { (alpha * 2.0).min(1e6) };

        let improvement = fx - f;
        x.copy_from_slice(&trial);
        fx = f;
        g = gn;
        if improvement <= tol * (1.0 + fx.abs()) {
            stall += 1;
            if stall >= STALL_LIMIT {
                return Ok(true);
            }
        } else {
            stall = 0;
        }
    }
}
