//! Bounded Nelder-Mead with dimension-adaptive coefficients. Trial points are
//! clamped into the box and vertices are ordered by feasibility rules.

use std::cmp::Ordering;

use super::{feasibility_compare, reserve, Evaluator, Scored, SolveResult, SolverConfig};
use crate::error::{BenchError, Result};
use crate::problem::Problem;

/// Polishes from `start` until the simplex collapses or the budget runs out.
pub fn nelder_mead_polish(problem: &Problem, start: &[f64], cfg: &SolverConfig) -> Result<SolveResult> {
    if start.len() != problem.dimension {
        return Err(BenchError::contract(format!(
            "start has {} coordinates, {} expects {}",
            start.len(),
            problem.id,
            problem.dimension
        )));
    }
    if cfg.max_evals == 0 {
        return Err(BenchError::contract("evaluation budget must be positive"));
    }
    let usable = reserve(problem, cfg)?;
    let mut ev = Evaluator::new(problem, cfg.seed, usable);
    run(&mut ev, cfg, start, usable, cfg.nm_step)?;
    ev.finish(cfg)
}

fn better(a: &Scored, b: &Scored) -> bool {
    feasibility_compare(a, b) == Ordering::Less
}

fn try_eval(ev: &mut Evaluator<'_>, x: &[f64], limit: usize) -> Result<Option<Scored>> {
    if ev.evals() >= limit {
        return Ok(None);
    }
    ev.eval(x).map(Some)
}

/// Runs the simplex with up to `cfg.nm_restarts` restarts around the best
/// vertex, stopping early when a restart brings no improvement.
pub(crate) fn run(
    ev: &mut Evaluator<'_>,
    cfg: &SolverConfig,
    start: &[f64],
    limit: usize,
    step: f64,
) -> Result<()> {
    let mut x0 = start.to_vec();
    ev.problem.snap(&mut x0);
    let mut last: Option<Scored> = None;
    for _ in 0..=cfg.nm_restarts {
        let Some((x, s)) = simplex(ev, cfg, &x0, limit, step)? else {
            return Ok(());
        };
        if let Some(prev) = last {
            if !better(&s, &prev) {
                return Ok(());
            }
        }
        last = Some(s);
        x0 = x;
    }
    Ok(())
}

fn simplex(
    ev: &mut Evaluator<'_>,
    cfg: &SolverConfig,
    x0: &[f64],
    limit: usize,
    step: f64,
) -> Result<Option<(Vec<f64>, Scored)>> {
    let problem = ev.problem;
    let n = problem.dimension;
    let nf = n as f64;
    let (alpha, gamma) = (1.0, 1.0 + 2.0 / nf);
    let (rho, sigma) = (0.75 - 1.0 / (2.0 * nf), 1.0 - 1.0 / nf);
    let (rho, sigma) = if n == 1 { (0.5, 0.5) } else { (rho, sigma) };

    let snap = |mut v: Vec<f64>| {
        problem.snap(&mut v);
        v
    };

    let mut verts: Vec<(Vec<f64>, Scored)> = Vec::with_capacity(n + 1);
    let Some(s0) = try_eval(ev, x0, limit)? else {
        return Ok(None);
    };
    verts.push((x0.to_vec(), s0));
    for i in 0..n {
        let b = problem.bounds[i];
        let mut delta = step * b.width();
        if problem.integer_coords.contains(&i) {
            delta = delta.max(1.0);
        }
        let mut v = x0.to_vec();
        v[i] = if x0[i] + delta <= b.hi { x0[i] + delta } else { x0[i] - delta };
        let v = snap(v);
        let Some(s) = try_eval(ev, &v, limit)? else {
            return Ok(best_of(&verts));
        };
        verts.push((v, s));
    }

    loop {
        verts.sort_by(|a, b| feasibility_compare(&a.1, &b.1));
        let diameter = verts[1..]
            .iter()
            .flat_map(|(v, _)| v.iter().zip(&verts[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        let spread_small = verts.iter().all(|(_, s)| s.feasible())
            && (verts[n].1.score - verts[0].1.score).abs() <= cfg.nm_ftol;
        if diameter < cfg.nm_xtol || spread_small || ev.evals() >= limit {
            return Ok(best_of(&verts));
        }

        let mut c = vec![0.0; n];
        for (v, _) in &verts[..n] {
            for (ci, vi) in c.iter_mut().zip(v) {
                *ci += vi / nf;
            }
        }
        let worst = verts[n].clone();
        let along = |t: f64| snap(c.iter().zip(&worst.0).map(|(ci, wi)| ci + t * (ci - wi)).collect());

        let xr = along(alpha);
        let Some(fr) = try_eval(ev, &xr, limit)? else {
            return Ok(best_of(&verts));
        };
        if better(&fr, &verts[0].1) {
            let xe = along(alpha * gamma);
            let Some(fe) = try_eval(ev, &xe, limit)? else {
                verts[n] = (xr, fr);
                return Ok(best_of(&verts));
            };
            verts[n] = if better(&fe, &fr) { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if better(&fr, &verts[n - 1].1) {
            verts[n] = (xr, fr);
            continue;
        }
        let outside = better(&fr, &worst.1);
        let xc = if outside { along(alpha * rho) } else { along(-rho) };
        let Some(fc) = try_eval(ev, &xc, limit)? else {
            return Ok(best_of(&verts));
        };
        let accept = if outside { !better(&fr, &fc) } else { better(&fc, &worst.1) };
        if accept {
            verts[n] = (xc, fc);
            continue;
        }
        let best = verts[0].0.clone();
        for k in 1..=n {
            let v = snap(best.iter().zip(&verts[k].0).map(|(b, x)| b + sigma * (x - b)).collect());
            let Some(s) = try_eval(ev, &v, limit)? else {
                return Ok(best_of(&verts));
            };
            verts[k] = (v, s);
        }
    }
}

fn best_of(verts: &[(Vec<f64>, Scored)]) -> Option<(Vec<f64>, Scored)> {
    verts
        .iter()
        .min_by(|a, b| feasibility_compare(&a.1, &b.1))
        .cloned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks;
    use crate::problem::{Interval, OptimumSpec};

    fn bowl() -> Problem {
        Problem::builder("bowl", "quadratic bowl", vec![Interval::new(-2.0, 2.0); 2])
            .objective(|x, _| Ok(x.iter().map(|v| v * v).sum()))
            .optimum(OptimumSpec::PointSet {
                points: vec![vec![0.0, 0.0]],
                value: 0.0,
            })
            .build()
            .unwrap()
    }

    #[test]
    fn bowl_from_one_one() {
        let r = nelder_mead_polish(&bowl(), &[1.0, 1.0], &SolverConfig::default()).unwrap();
        assert!(r.best_point.iter().all(|v| v.abs() < 1e-6), "{:?}", r.best_point);
    }

    #[test]
    fn vibration_polish() {
        let p = benchmarks::build_default("f7").unwrap();
        let cfg = SolverConfig {
            max_evals: 2_000,
            ..Default::default()
        };
        let r = nelder_mead_polish(&p, &[0.3, 1.8], &cfg).unwrap();
        assert!((r.best_point[0] - 0.25).abs() < 5e-3, "{:?}", r.best_point);
        assert!((r.best_point[1] - 2.0).abs() < 5e-3, "{:?}", r.best_point);
    }

    #[test]
    fn shortest_path_from_random_start() {
        use rand::Rng;
        let p = benchmarks::build_default("f9").unwrap();
        let mut rng = crate::solvers::rng_for(5);
        let start: Vec<f64> = (0..p.dimension).map(|_| rng.gen_range(0.0..2.0)).collect();
        let cfg = SolverConfig {
            max_evals: 60_000,
            ..Default::default()
        };
        let r = nelder_mead_polish(&p, &start, &cfg).unwrap();
        assert!(r.best_value <= 2f64.sqrt() + 1e-3, "{}", r.best_value);
    }

    #[test]
    fn trace_is_monotone_and_ends_at_best() {
        let r = nelder_mead_polish(&bowl(), &[1.5, -0.7], &SolverConfig::default()).unwrap();
        assert!(r.trace.windows(2).all(|w| w[1].best <= w[0].best));
        assert_eq!(r.trace.last().unwrap().best, r.best_value);
    }

    #[test]
    fn stops_on_budget() {
        let cfg = SolverConfig {
            max_evals: 7,
            ..Default::default()
        };
        let r = nelder_mead_polish(&bowl(), &[1.0, 1.0], &cfg).unwrap();
        assert_eq!(r.evals, 7);
    }

    #[test]
    fn rejects_wrong_start() {
        assert!(nelder_mead_polish(&bowl(), &[1.0], &SolverConfig::default()).is_err());
    }
}
