//! `rand/1/bin` differential evolution with feasibility-rule selection.

use std::cmp::Ordering;

use rand::seq::index;
use rand::Rng;

use super::{feasibility_compare, random_point, reflect, reserve, rng_for, Evaluator, SolveResult, SolverConfig};
use crate::error::Result;
use crate::problem::Problem;

/// Population spread, relative to each coordinate range, below which the
/// population is re-seeded around its best member.
const COLLAPSE_SPREAD: f64 = 1e-6;

pub fn differential_evolution(problem: &Problem, cfg: &SolverConfig) -> Result<SolveResult> {
    cfg.validate(problem.dimension)?;
    let usable = reserve(problem, cfg)?;
    let mut ev = Evaluator::new(problem, cfg.seed, usable);
    run(&mut ev, cfg, usable)?;
    ev.finish(cfg)
}

/// Evolves until `ev` has spent `limit` evaluations.
pub(crate) fn run(ev: &mut Evaluator<'_>, cfg: &SolverConfig, limit: usize) -> Result<()> {
    let problem = ev.problem;
    let d = problem.dimension;
    let np = cfg.population_for(d).min(limit.saturating_sub(ev.evals())).max(1);
    let mut rng = rng_for(cfg.seed);

    let mut pop = Vec::with_capacity(np);
    let mut fit = Vec::with_capacity(np);
    for _ in 0..np {
        if ev.evals() >= limit {
            break;
        }
        let x = random_point(problem, &mut rng);
        fit.push(ev.eval(&x)?);
        pop.push(x);
    }
    let np = pop.len();
    if np < 4 {
        return Ok(());
    }

    let mut trial = vec![0.0; d];
    while ev.evals() < limit {
        if collapsed(problem, &pop) {
            let best = (0..np)
                .min_by(|&a, &b| feasibility_compare(&fit[a], &fit[b]))
                .expect("non-empty population");
            for i in (0..np).filter(|&i| i != best) {
                if ev.evals() >= limit {
                    return Ok(());
                }
                pop[i] = random_point(problem, &mut rng);
                fit[i] = ev.eval(&pop[i])?;
            }
        }
        for i in 0..np {
            if ev.evals() >= limit {
                return Ok(());
            }
            let (r1, r2, r3) = loop {
                let picks = index::sample(&mut rng, np, 3);
                let (a, b, c) = (picks.index(0), picks.index(1), picks.index(2));
                if a != i && b != i && c != i {
                    break (a, b, c);
                }
            };
            let jrand = rng.gen_range(0..d);
            for j in 0..d {
                trial[j] = if j == jrand || rng.gen::<f64>() < cfg.de_cr {
                    let v = pop[r1][j] + cfg.de_f * (pop[r2][j] - pop[r3][j]);
                    let b = problem.bounds[j];
                    reflect(v, b.lo, b.hi)
                } else {
                    pop[i][j]
                };
            }
            problem.snap(&mut trial);
            let s = ev.eval(&trial)?;
            if feasibility_compare(&s, &fit[i]) != Ordering::Greater {
                pop[i].copy_from_slice(&trial);
                fit[i] = s;
            }
        }
    }
    Ok(())
}

fn collapsed(problem: &Problem, pop: &[Vec<f64>]) -> bool {
    problem.bounds.iter().enumerate().all(|(j, b)| {
        let (lo, hi) = pop
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x[j]), hi.max(x[j])));
        hi - lo <= COLLAPSE_SPREAD * b.width()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::{self, Overrides};
    use crate::noise::NoisePolicy;
    use crate::problem::{Candidate, OptimumSpec};

    fn problem(id: &str, kv: &[(&str, f64)]) -> Problem {
        let o: Overrides = kv.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        benchmarks::build(id, &o, NoisePolicy::default()).unwrap()
    }

    fn cfg(budget: usize, seed: u64) -> SolverConfig {
        SolverConfig {
            max_evals: budget,
            seed,
            ..Default::default()
        }
    }

    #[test]
    fn abs_sum_warm_up() {
        let p = problem("abs_sum", &[("D", 5.0)]);
        let r = differential_evolution(&p, &cfg(10_000, 3)).unwrap();
        assert!(r.best_value <= 1e-3, "{}", r.best_value);
        assert!(r.evals <= 10_000);
    }

    #[test]
    fn vibration_parameters_recovered() {
        let p = benchmarks::build_default("f7").unwrap();
        let r = differential_evolution(&p, &cfg(20_000, 1)).unwrap();
        let (z, w) = (r.best_point[0], r.best_point[1]);
        assert!((z - 0.25).abs() <= 0.02 && (w - 2.0).abs() <= 0.02, "{z} {w}");
    }

    #[test]
    fn hyperboloid_reaches_manifold() {
        let p = problem("f5", &[("D", 3.0), ("a", 1.0), ("b", 1.0)]);
        let r = differential_evolution(&p, &cfg(30_000, 5)).unwrap();
        let g = p.optimum_gap(Candidate::Point(&r.best_point)).unwrap();
        assert!(g.feasible);
        assert!(g.objective_gap <= 1e-3, "{g:?}");
        assert!(g.location_gap <= 5e-2, "{g:?}");
        assert!(matches!(p.optimum, OptimumSpec::Manifold { .. }));
    }

    #[test]
    fn zero_budget_is_a_contract_violation() {
        let p = benchmarks::build_default("abs_sum").unwrap();
        assert!(differential_evolution(&p, &cfg(0, 1)).is_err());
    }

    #[test]
    fn deterministic_given_seed() {
        let p = benchmarks::build_default("f3").unwrap();
        let a = differential_evolution(&p, &cfg(2_000, 11)).unwrap();
        let b = differential_evolution(&p, &cfg(2_000, 11)).unwrap();
        assert_eq!(a, b);
    }
}
