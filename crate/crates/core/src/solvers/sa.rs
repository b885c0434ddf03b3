//! Simulated annealing with Gaussian proposals that shrink with the
//! temperature, geometric cooling and optional random restarts.

use rand::Rng;
use rand_distr::StandardNormal;

use super::{feasibility_compare, random_point, reflect, reserve, rng_for, Evaluator, Scored, SolveResult, SolverConfig};
use crate::error::Result;
use crate::problem::Problem;

/// Temperature reduction over one restart segment when no ratio is given.
const COOLING_SPAN: f64 = 1e-6;

pub fn simulated_annealing(problem: &Problem, cfg: &SolverConfig) -> Result<SolveResult> {
    cfg.validate(problem.dimension)?;
    let usable = reserve(problem, cfg)?;
    let mut ev = Evaluator::new(problem, cfg.seed, usable);
    run(&mut ev, cfg, usable)?;
    ev.finish(cfg)
}

/// Metropolis step on the direction-normalized score. While the chain sits
/// on a feasible point, infeasible proposals are rejected; an infeasible
/// chain accepts anything no worse under feasibility rules.
fn accept(cur: &Scored, cand: &Scored, t: f64, u: f64) -> bool {
    if cur.feasible() {
        if !cand.feasible() {
            return false;
        }
        let delta = cand.score - cur.score;
        delta <= 0.0 || u < (-delta / t).exp()
    } else {
        feasibility_compare(cand, cur) != std::cmp::Ordering::Greater
    }
}

pub(crate) fn run(ev: &mut Evaluator<'_>, cfg: &SolverConfig, limit: usize) -> Result<()> {
    let problem = ev.problem;
    let d = problem.dimension;
    let mut rng = rng_for(cfg.seed);

    let t0 = match cfg.sa_t0 {
        Some(t) => t,
        None => {
            let m = (10 * d).clamp(10, 50).min(limit.saturating_sub(ev.evals()) / 4);
            let mut scores = Vec::with_capacity(m);
            for _ in 0..m {
                let x = random_point(problem, &mut rng);
                scores.push(ev.eval(&x)?.score);
            }
            spread(&scores)
        }
    };

    let segments = cfg.sa_restarts + 1;
    let first = ev.evals();
    for seg in 0..segments {
        let seg_limit = first + (limit - first) * (seg + 1) / segments;
        if ev.evals() >= seg_limit {
            continue;
        }
        let mut x = random_point(problem, &mut rng);
        let mut fx = ev.eval(&x)?;
        let steps = seg_limit.saturating_sub(ev.evals()).max(1);
        let ratio = cfg.sa_ratio.unwrap_or(COOLING_SPAN.powf(1.0 / steps as f64));
        let mut t = t0;
        let mut y = x.clone();
        while ev.evals() < seg_limit {
            let shrink = (t / t0).sqrt();
            for j in 0..d {
                let b = problem.bounds[j];
                let sigma = cfg.sa_step * b.width() * shrink;
                let z: f64 = rng.sample(StandardNormal);
                y[j] = reflect(x[j] + sigma * z, b.lo, b.hi);
            }
            problem.snap(&mut y);
            let fy = ev.eval(&y)?;
            let u: f64 = rng.gen();
            if accept(&fx, &fy, t, u) {
                x.copy_from_slice(&y);
                fx = fy;
            }
            t *= ratio;
        }
    }
    Ok(())
}

/// Standard deviation of the finite scores, or 1 when they carry no spread.
fn spread(scores: &[f64]) -> f64 {
    let v: Vec<f64> = scores.iter().copied().filter(|s| s.is_finite()).collect();
    if v.len() < 2 {
        return 1.0;
    }
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    let var = v.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (v.len() - 1) as f64;
    if var > 0.0 {
        var.sqrt()
    } else {
        1.0
    }
}
