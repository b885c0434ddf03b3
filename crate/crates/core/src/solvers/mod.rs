//! Reference derivative-free solvers: differential evolution, simulated
//! annealing, a Nelder-Mead polish and an augmented-Lagrangian loop for the
//! path problems.
//!
//! All solvers minimize the direction-normalized score and compare
//! candidates with feasibility rules.

mod al;
mod de;
mod nm;
mod sa;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};
use crate::noise::NoiseKey;
use crate::numerics::Path;
use crate::problem::{FeasibilityReport, Problem};

pub use al::{augmented_lagrangian_path, InnerSolver};
pub use de::differential_evolution;
pub use nm::nelder_mead_polish;
pub use sa::simulated_annealing;

/// Tunables shared by every solver. `None` fields are derived from the
/// problem at run time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// DE population; defaults to `10 * dimension` (at least 5).
    pub population: Option<usize>,
    pub max_evals: usize,
    pub de_f: f64,
    pub de_cr: f64,
    /// SA initial temperature; estimated from a random sample when absent.
    pub sa_t0: Option<f64>,
    /// SA cooling ratio per step; chosen so the temperature falls by `1e-6`
    /// over one restart segment when absent.
    pub sa_ratio: Option<f64>,
    /// SA proposal width as a fraction of each coordinate range.
    pub sa_step: f64,
    pub sa_restarts: usize,
    /// Initial simplex edge as a fraction of each coordinate range.
    pub nm_step: f64,
    pub nm_xtol: f64,
    pub nm_ftol: f64,
    pub nm_restarts: usize,
    pub al_lambda0: f64,
    pub al_mu0: f64,
    pub al_growth: f64,
    pub al_outer: usize,
    pub al_tol_eq: f64,
    /// Inner-loop stopping tolerance on the improvement of the Lagrangian.
    pub al_inner_tol: f64,
    /// Share of the budget given to the Nelder-Mead polish after DE or SA on
    /// smooth problems.
    pub polish_fraction: f64,
    pub polish: bool,
    /// Re-evaluations averaged into the reported value of noisy problems.
    pub noise_reevals: usize,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            population: None,
            max_evals: 20_000,
            de_f: 0.7,
            de_cr: 0.9,
            sa_t0: None,
            sa_ratio: None,
            sa_step: 0.2,
            sa_restarts: 0,
            nm_step: 0.05,
            nm_xtol: 1e-10,
            nm_ftol: 1e-14,
            nm_restarts: 3,
            al_lambda0: 0.0,
            al_mu0: 10.0,
            al_growth: 10.0,
            al_outer: 30,
            al_tol_eq: 1e-6,
            al_inner_tol: 1e-10,
            polish_fraction: 0.1,
            polish: true,
            noise_reevals: 32,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn population_for(&self, dimension: usize) -> usize {
        self.population.unwrap_or((10 * dimension).max(5))
    }

    pub fn validate(&self, dimension: usize) -> Result<()> {
        let pop = self.population_for(dimension);
        if self.max_evals == 0 {
            return Err(BenchError::contract("evaluation budget must be positive"));
        }
        if self.max_evals < pop {
            return Err(BenchError::contract(format!(
                "evaluation budget {} is below the population size {pop}",
                self.max_evals
            )));
        }
        if pop < 4 {
            return Err(BenchError::contract(format!("population {pop} is below 4")));
        }
        if !(self.al_growth > 1.0) {
            return Err(BenchError::contract(format!(
                "penalty growth factor must exceed 1, got {}",
                self.al_growth
            )));
        }
        if !(self.de_f > 0.0 && self.de_f <= 2.0) || !(0.0..=1.0).contains(&self.de_cr) {
            return Err(BenchError::contract(format!(
                "DE weights out of range: F={} CR={}",
                self.de_f, self.de_cr
            )));
        }
        if let Some(r) = self.sa_ratio {
            if !(r > 0.0 && r < 1.0) {
                return Err(BenchError::contract(format!("SA cooling ratio must lie in (0, 1), got {r}")));
            }
        }
        if !(0.0..1.0).contains(&self.polish_fraction) {
            return Err(BenchError::contract(format!(
                "polish fraction must lie in [0, 1), got {}",
                self.polish_fraction
            )));
        }
        Ok(())
    }

    /// Applies one `key = value` override.
    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        let count = |v: f64| -> Result<usize> {
            if v >= 0.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(BenchError::usage(format!("{key} needs a non-negative integer, got {v}")))
            }
        };
        match key {
            "population" => self.population = Some(count(value)?),
            "max_evals" => self.max_evals = count(value)?,
            "de_f" => self.de_f = value,
            "de_cr" => self.de_cr = value,
            "sa_t0" => self.sa_t0 = Some(value),
            "sa_ratio" => self.sa_ratio = Some(value),
            "sa_step" => self.sa_step = value,
            "sa_restarts" => self.sa_restarts = count(value)?,
            "nm_step" => self.nm_step = value,
            "nm_xtol" => self.nm_xtol = value,
            "nm_ftol" => self.nm_ftol = value,
            "nm_restarts" => self.nm_restarts = count(value)?,
            "al_lambda0" => self.al_lambda0 = value,
            "al_mu0" => self.al_mu0 = value,
            "al_growth" => self.al_growth = value,
            "al_outer" => self.al_outer = count(value)?,
            "al_tol_eq" => self.al_tol_eq = value,
            "al_inner_tol" => self.al_inner_tol = value,
            "polish_fraction" => self.polish_fraction = value,
            "polish" => self.polish = value != 0.0,
            "noise_reevals" => self.noise_reevals = count(value)?,
            "seed" => self.seed = count(value)? as u64,
            _ => return Err(BenchError::usage(format!("unknown solver setting `{key}`"))),
        }
        Ok(())
    }

    pub const KEYS: [&'static str; 22] = [
        "population",
        "max_evals",
        "de_f",
        "de_cr",
        "sa_t0",
        "sa_ratio",
        "sa_step",
        "sa_restarts",
        "nm_step",
        "nm_xtol",
        "nm_ftol",
        "nm_restarts",
        "al_lambda0",
        "al_mu0",
        "al_growth",
        "al_outer",
        "al_tol_eq",
        "al_inner_tol",
        "polish_fraction",
        "polish",
        "noise_reevals",
        "seed",
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SolverId {
    #[serde(rename = "de")]
    De,
    #[serde(rename = "sa")]
    Sa,
    #[serde(rename = "nm")]
    Nm,
    #[serde(rename = "al+de")]
    AlDe,
    #[serde(rename = "al+nm")]
    AlNm,
}

impl SolverId {
    pub const ALL: [SolverId; 5] = [SolverId::De, SolverId::Sa, SolverId::Nm, SolverId::AlDe, SolverId::AlNm];

    pub fn as_str(self) -> &'static str {
        match self {
            SolverId::De => "de",
            SolverId::Sa => "sa",
            SolverId::Nm => "nm",
            SolverId::AlDe => "al+de",
            SolverId::AlNm => "al+nm",
        }
    }
}

impl fmt::Display for SolverId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SolverId {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        SolverId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<_> = SolverId::ALL.iter().map(|id| id.as_str()).collect();
                BenchError::usage(format!("unknown solver `{s}`; available: {}", names.join(", ")))
            })
    }
}

/// Score and total violation of one evaluated point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scored {
    pub score: f64,
    pub violation: f64,
}

impl Scored {
    pub fn feasible(&self) -> bool {
        self.violation == 0.0
    }
}

/// Feasibility rules: a feasible point beats an infeasible one, two
/// feasible points compare by score, two infeasible ones by violation.
/// `Less` means `a` is better.
pub fn feasibility_compare(a: &Scored, b: &Scored) -> Ordering {
    match (a.feasible(), b.feasible()) {
        (true, true) => a.score.total_cmp(&b.score),
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        (false, false) => a.violation.total_cmp(&b.violation),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub evals: usize,
    pub best: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub best_point: Vec<f64>,
    /// Set for path problems.
    pub best_path: Option<Path>,
    /// Direction-normalized score of the incumbent as seen during the search.
    pub best_value: f64,
    /// Objective in the problem's own direction; the mean of fresh
    /// re-evaluations for noisy problems.
    pub reported_value: f64,
    pub feasibility: FeasibilityReport,
    pub evals: usize,
    /// Best feasible score each time it improved.
    pub trace: Vec<TracePoint>,
}

/// Budgeted, counting evaluator that tracks the incumbent. Every call uses a
/// fresh `eval_index`, so noisy objectives get an independent draw.
pub(crate) struct Evaluator<'a> {
    pub problem: &'a Problem,
    seed: u64,
    evals: usize,
    budget: usize,
    best: Option<(Vec<f64>, Scored)>,
    trace: Vec<TracePoint>,
    /// `(lambda, mu)`: when set, `eval` returns the augmented Lagrangian
    /// `f + lambda h + mu/2 h^2` of the first equality, reported as feasible.
    lagrangian: Option<(f64, f64)>,
    lagrangian_best: Option<(Vec<f64>, Scored)>,
    /// Equality tolerance applied to the incumbent in place of the problem's own.
    incumbent_eq_tol: Option<f64>,
}

impl<'a> Evaluator<'a> {
    pub fn new(problem: &'a Problem, seed: u64, budget: usize) -> Self {
        Self {
            problem,
            seed,
            evals: 0,
            budget,
            best: None,
            trace: Vec::new(),
            lagrangian: None,
            lagrangian_best: None,
            incumbent_eq_tol: None,
        }
    }

    pub fn set_incumbent_eq_tol(&mut self, tol: Option<f64>) {
        self.incumbent_eq_tol = tol;
    }

    pub fn set_lagrangian(&mut self, weights: Option<(f64, f64)>) {
        self.lagrangian = weights;
        self.lagrangian_best = None;
    }

    /// Best point under the current Lagrangian weights.
    pub fn lagrangian_best(&self) -> Option<&(Vec<f64>, Scored)> {
        self.lagrangian_best.as_ref()
    }

    pub fn evals(&self) -> usize {
        self.evals
    }

    pub fn remaining(&self) -> usize {
        self.budget - self.evals
    }

    /// Scores `x`, which must already be snapped into the box.
    pub fn eval(&mut self, x: &[f64]) -> Result<Scored> {
        if self.evals >= self.budget {
            return Err(BenchError::contract("evaluation budget exhausted"));
        }
        let key = NoiseKey::new(self.seed, self.evals as u64);
        let value = self.problem.evaluate(x, key)?;
        self.evals += 1;
        let report = self.problem.is_feasible(x)?;
        let s = Scored {
            score: self.problem.score(value),
            violation: report.violation,
        };
        match self.incumbent_eq_tol {
            Some(tol) => {
                let extra: f64 = report.equality_residuals.iter().map(|h| (h.abs() - tol).max(0.0)).sum();
                self.offer(
                    x,
                    Scored {
                        violation: s.violation + extra,
                        ..s
                    },
                );
            }
            None => self.offer(x, s),
        }
        let Some((lambda, mu)) = self.lagrangian else {
            return Ok(s);
        };
        let h = report.equality_residuals.first().copied().unwrap_or(0.0);
        let phi = Scored {
            score: s.score + lambda * h + 0.5 * mu * h * h,
            violation: 0.0,
        };
        if self.lagrangian_best.as_ref().is_none_or(|(_, b)| phi.score < b.score) {
            self.lagrangian_best = Some((x.to_vec(), phi));
        }
        Ok(phi)
    }

    fn offer(&mut self, x: &[f64], s: Scored) {
        let better = match &self.best {
            None => true,
            Some((_, b)) => feasibility_compare(&s, b) == Ordering::Less,
        };
        if better {
            if s.feasible() {
                self.trace.push(TracePoint {
                    evals: self.evals,
                    best: s.score,
                });
            }
            self.best = Some((x.to_vec(), s));
        }
    }

    pub fn best(&self) -> Option<&(Vec<f64>, Scored)> {
        self.best.as_ref()
    }

    pub fn finish(self, cfg: &SolverConfig) -> Result<SolveResult> {
        let problem = self.problem;
        let (point, scored) = self
            .best
            .clone()
            .ok_or_else(|| BenchError::contract("solver finished without evaluating a point"))?;
        let mut evals = self.evals;
        let reported_value = if problem.is_noisy() && cfg.noise_reevals > 0 {
            let mut sum = 0.0;
            for _ in 0..cfg.noise_reevals {
                sum += problem.evaluate(&point, NoiseKey::new(self.seed, evals as u64))?;
                evals += 1;
            }
            sum / cfg.noise_reevals as f64
        } else {
            problem.score(scored.score)
        };
        let best_path = match &problem.path {
            Some(spec) => Some(spec.path(&point)?),
            None => None,
        };
        Ok(SolveResult {
            feasibility: problem.is_feasible(&point)?,
            best_point: point,
            best_path,
            best_value: scored.score,
            reported_value,
            evals,
            trace: self.trace,
        })
    }
}

/// Evaluations held back for the final re-evaluation of noisy problems.
pub(crate) fn reserve(problem: &Problem, cfg: &SolverConfig) -> Result<usize> {
    let reserve = if problem.is_noisy() { cfg.noise_reevals } else { 0 };
    if cfg.max_evals <= reserve {
        return Err(BenchError::contract(format!(
            "budget {} leaves nothing after reserving {reserve} re-evaluations",
            cfg.max_evals
        )));
    }
    Ok(cfg.max_evals - reserve)
}

pub(crate) fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn random_point(problem: &Problem, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut x: Vec<f64> = problem
        .bounds
        .iter()
        .map(|b| if b.width() > 0.0 { rng.gen_range(b.lo..=b.hi) } else { b.lo })
        .collect();
    problem.snap(&mut x);
    x
}

/// Mirrors a coordinate back into `[lo, hi]`; falls back to a clamp when the
/// overshoot exceeds the range.
pub(crate) fn reflect(v: f64, lo: f64, hi: f64) -> f64 {
    let r = if v < lo {
        2.0 * lo - v
    } else if v > hi {
        2.0 * hi - v
    } else {
        v
    };
    r.clamp(lo, hi)
}

/// Runs solver `id` on `problem`. DE and SA hand a share of the budget to a
/// Nelder-Mead polish on smooth problems; `nm` starts from a seeded random
/// point.
pub fn solve(problem: &Problem, id: SolverId, cfg: &SolverConfig) -> Result<SolveResult> {
    match id {
        SolverId::De | SolverId::Sa => {
            cfg.validate(problem.dimension)?;
            let usable = reserve(problem, cfg)?;
            let polish = cfg.polish && problem.smooth && !problem.is_noisy();
            let polish_budget = if polish {
                (usable as f64 * cfg.polish_fraction) as usize
            } else {
                0
            };
            let mut ev = Evaluator::new(problem, cfg.seed, usable);
            let global = usable - polish_budget;
            match id {
                SolverId::De => de::run(&mut ev, cfg, global)?,
                _ => sa::run(&mut ev, cfg, global)?,
            }
            if polish_budget > 0 {
                let start = ev.best().map(|(x, _)| x.clone()).expect("global phase evaluated");
                nm::run(&mut ev, cfg, &start, usable, cfg.nm_step * 0.1)?;
            }
            ev.finish(cfg)
        }
        SolverId::Nm => {
            let mut rng = rng_for(cfg.seed);
            let start = random_point(problem, &mut rng);
            nelder_mead_polish(problem, &start, cfg)
        }
        SolverId::AlDe => augmented_lagrangian_path(problem, InnerSolver::DifferentialEvolution, cfg),
        SolverId::AlNm => augmented_lagrangian_path(problem, InnerSolver::NelderMead, cfg),
    }
}
