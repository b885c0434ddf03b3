//! Experiment orchestration: seeded trial batches, aggregate statistics,
//! CSV/JSON reports and the oracle verification suite.

mod report;
mod verify;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::benchmarks::{self, Overrides};
use crate::error::{BenchError, Result};
use crate::noise::NoisePolicy;
use crate::numerics::Path;
use crate::problem::{Candidate, Direction, FeasibilityReport, OptimumKind, Problem};
use crate::solvers::{self, SolverConfig, SolverId};

pub use report::{emit_report, Format, CSV_COLUMNS};
pub use verify::{verify_suite, CheckResult, VerifyReport};

/// One batch of trials of a solver on a benchmark.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: String,
    pub params: Overrides,
    pub noise_policy: NoisePolicy,
    pub solver: SolverId,
    /// Applied on top of [`default_solver_config`].
    pub solver_overrides: BTreeMap<String, f64>,
    pub trials: usize,
    pub base_seed: u64,
    pub eps_f: f64,
    pub eps_x: f64,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn new(problem: &str, solver: SolverId) -> Self {
        Self {
            problem: problem.to_string(),
            params: Overrides::new(),
            noise_policy: NoisePolicy::default(),
            solver,
            solver_overrides: BTreeMap::new(),
            trials: 10,
            base_seed: 0,
            eps_f: 1e-3,
            eps_x: 1e-2,
            out: None,
            format: Format::Csv,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(BenchError::usage("trial count must be at least 1"));
        }
        if !(self.eps_f > 0.0 && self.eps_x > 0.0) {
            return Err(BenchError::usage(format!(
                "success thresholds must be positive, got eps_f={} eps_x={}",
                self.eps_f, self.eps_x
            )));
        }
        Ok(())
    }

    /// Applies one entry of the flat override map. Run keys (`problem`,
    /// `solver`, `trials`, `seed`, `eps_f`, `eps_x`, `out`, `format`,
    /// `noise_policy`) set run fields, solver setting names go to the solver
    /// and any other numeric key is a problem parameter.
    pub fn set(&mut self, key: &str, value: &Value) -> Result<()> {
        let text = || -> Result<String> {
            match value {
                Value::String(s) => Ok(s.clone()),
                other => Err(BenchError::usage(format!("{key} needs a string, got {other}"))),
            }
        };
        let number = || -> Result<f64> {
            match value {
                Value::Number(n) => n.as_f64().ok_or_else(|| BenchError::usage(format!("{key}: bad number"))),
                Value::Bool(b) => Ok(if *b { 1.0 } else { 0.0 }),
                Value::String(s) => s
                    .trim()
                    .parse()
                    .map_err(|_| BenchError::usage(format!("{key} needs a number, got `{s}`"))),
                other => Err(BenchError::usage(format!("{key} needs a number, got {other}"))),
            }
        };
        let count = |v: f64| -> Result<u64> {
            if v >= 0.0 && v.fract() == 0.0 && v <= u64::MAX as f64 {
                Ok(v as u64)
            } else {
                Err(BenchError::usage(format!("{key} needs a non-negative integer, got {v}")))
            }
        };
        match key {
            "problem" => self.problem = text()?,
            "solver" => self.solver = text()?.parse()?,
            "trials" => self.trials = count(number()?)? as usize,
            "seed" => self.base_seed = count(number()?)?,
            "eps_f" => self.eps_f = number()?,
            "eps_x" => self.eps_x = number()?,
            "out" => self.out = Some(PathBuf::from(text()?)),
            "format" => self.format = text()?.parse()?,
            "noise_policy" => self.noise_policy = text()?.parse().map_err(BenchError::Usage)?,
            k if SolverConfig::KEYS.contains(&k) => {
                let v = number()?;
                SolverConfig::default().set(k, v)?;
                self.solver_overrides.insert(k.to_string(), v);
            }
            k => {
                self.params.insert(k.to_string(), number()?);
            }
        }
        Ok(())
    }

    /// Applies every entry of a JSON object, in key order.
    pub fn apply_json(&mut self, text: &str) -> Result<()> {
        let v: Value = serde_json::from_str(text)?;
        let Value::Object(map) = v else {
            return Err(BenchError::usage("config file must hold a JSON object"));
        };
        for (k, v) in &map {
            self.set(k, v)?;
        }
        Ok(())
    }

    pub fn build_problem(&self) -> Result<Problem> {
        benchmarks::build(&self.problem, &self.params, self.noise_policy)
    }

    /// Solver settings for trial seed `seed`.
    pub fn solver_config(&self, seed: u64) -> Result<SolverConfig> {
        let mut c = default_solver_config(&self.problem);
        for (k, v) in &self.solver_overrides {
            c.set(k, *v)?;
        }
        c.seed = seed;
        Ok(c)
    }
}

/// Per-benchmark budgets and settings used when the run does not override them.
pub fn default_solver_config(problem: &str) -> SolverConfig {
    let max_evals = match problem {
        "abs_sum" | "f3" => 10_000,
        "f4" => 50_000,
        "f5" => 30_000,
        "floor_sphere" | "f6" => 5_000,
        "f8" => 3_000,
        "f9" | "f10" => 40_000,
        _ => 20_000,
    };
    SolverConfig {
        max_evals,
        sa_restarts: if problem == "f4" { 4 } else { 0 },
        ..Default::default()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub problem: String,
    pub solver: String,
    pub trial: usize,
    pub seed: u64,
    pub best_point: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub best_path: Option<Path>,
    /// Objective in the problem's own direction.
    pub best_value: f64,
    pub objective_gap: f64,
    /// Absent when the solver reported non-convergence without a point.
    pub location_gap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub curve_l2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub in_region: Option<bool>,
    pub feasible: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub feasibility: Option<FeasibilityReport>,
    pub evals: usize,
    /// Evaluations until the best-so-far score first came within `eps_f`
    /// of the optimum; successful trials only.
    pub evals_to_success: Option<usize>,
    pub wall_ms: f64,
    pub noise_policy: String,
    pub success: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregates {
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub best_value: Option<f64>,
    pub median_value: Option<f64>,
    pub worst_value: Option<f64>,
    pub median_evals_to_success: Option<f64>,
    /// Point-set optima only.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mean_location_gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialTable {
    pub problem: String,
    pub solver: String,
    pub direction: Direction,
    pub optimum_kind: OptimumKind,
    pub eps_f: f64,
    pub eps_x: f64,
    pub records: Vec<TrialRecord>,
    pub aggregates: Aggregates,
}

fn median(v: &mut [f64]) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 { v[n / 2] } else { 0.5 * (v[n / 2 - 1] + v[n / 2]) })
}

impl TrialTable {
    pub fn new(
        problem: &str,
        solver: &str,
        direction: Direction,
        optimum_kind: OptimumKind,
        eps_f: f64,
        eps_x: f64,
        records: Vec<TrialRecord>,
    ) -> Self {
        let aggregates = Self::aggregate(&records, direction, optimum_kind);
        Self {
            problem: problem.to_string(),
            solver: solver.to_string(),
            direction,
            optimum_kind,
            eps_f,
            eps_x,
            records,
            aggregates,
        }
    }

    pub fn aggregate(records: &[TrialRecord], direction: Direction, kind: OptimumKind) -> Aggregates {
        let trials = records.len();
        let successes = records.iter().filter(|r| r.success).count();
        let mut scores: Vec<f64> = records.iter().map(|r| direction.normalize(r.best_value)).collect();
        let back = |s: f64| direction.normalize(s);
        let best = scores.iter().copied().min_by(f64::total_cmp).map(back);
        let worst = scores.iter().copied().max_by(f64::total_cmp).map(back);
        let med = median(&mut scores).map(back);
        let mut ets: Vec<f64> = records
            .iter()
            .filter_map(|r| r.evals_to_success.map(|e| e as f64))
            .collect();
        let mean_location_gap = match kind {
            OptimumKind::PointSet => {
                let gaps: Vec<f64> = records.iter().filter_map(|r| r.location_gap).collect();
                (!gaps.is_empty()).then(|| gaps.iter().sum::<f64>() / gaps.len() as f64)
            }
            _ => None,
        };
        Aggregates {
            trials,
            successes,
            success_rate: if trials == 0 { 0.0 } else { successes as f64 / trials as f64 },
            best_value: best,
            median_value: med,
            worst_value: worst,
            median_evals_to_success: median(&mut ets),
            mean_location_gap,
        }
    }

    pub fn success_rate(&self) -> f64 {
        self.aggregates.success_rate
    }
}

/// Success: objective gap within `eps_f`, feasible, and the location
/// criterion of the optimum kind (region membership, manifold residual or
/// curve L∞ deviation within `eps_x`; none for point sets).
pub fn is_success(
    kind: OptimumKind,
    objective_gap: f64,
    feasible: bool,
    location_gap: f64,
    in_region: Option<bool>,
    eps_f: f64,
    eps_x: f64,
) -> bool {
    let located = match kind {
        OptimumKind::PointSet => true,
        OptimumKind::FlatRegions => in_region == Some(true),
        OptimumKind::Manifold | OptimumKind::Curve => location_gap <= eps_x,
    };
    objective_gap <= eps_f && feasible && located
}

fn policy_label(problem: &Problem) -> String {
    problem.noise.map_or("none", |p| p.as_str()).to_string()
}

fn run_one(problem: &Problem, cfg: &RunConfig, trial: usize) -> Result<TrialRecord> {
    let seed = cfg.base_seed.wrapping_add(trial as u64);
    let scfg = cfg.solver_config(seed)?;
    let kind = problem.optimum.kind();
    let target = problem.score(problem.optimum.value());
    let start = Instant::now();
    let outcome = solvers::solve(problem, cfg.solver, &scfg);
    let wall_ms = start.elapsed().as_micros() as f64 / 1000.0;
    let mut record = TrialRecord {
        problem: problem.id.clone(),
        solver: cfg.solver.to_string(),
        trial,
        seed,
        best_point: Vec::new(),
        best_path: None,
        best_value: f64::NAN,
        objective_gap: f64::NAN,
        location_gap: None,
        curve_l2: None,
        in_region: None,
        feasible: false,
        feasibility: None,
        evals: 0,
        evals_to_success: None,
        wall_ms,
        noise_policy: policy_label(problem),
        success: false,
        error: None,
    };
    match outcome {
        Ok(r) => {
            let gap = match &r.best_path {
                Some(p) => problem.optimum_gap(Candidate::Path(p))?,
                None => problem.optimum_gap(Candidate::Point(&r.best_point))?,
            };
            let success = is_success(
                kind,
                gap.objective_gap,
                gap.feasible,
                gap.location_gap,
                gap.in_region,
                cfg.eps_f,
                cfg.eps_x,
            );
            let evals_to_success = success.then(|| {
                r.trace
                    .iter()
                    .find(|t| (t.best - target).abs() <= cfg.eps_f)
                    .map_or(r.evals, |t| t.evals)
            });
            record.best_point = r.best_point;
            record.best_path = r.best_path;
            record.best_value = r.reported_value;
            record.objective_gap = gap.objective_gap;
            record.location_gap = Some(gap.location_gap);
            record.curve_l2 = gap.curve_l2;
            record.in_region = gap.in_region;
            record.feasible = gap.feasible;
            record.feasibility = Some(r.feasibility);
            record.evals = r.evals;
            record.evals_to_success = evals_to_success;
            record.success = success;
        }
        Err(BenchError::Convergence { reason, best, .. }) => {
            record.best_value = problem.direction.normalize(best);
            record.objective_gap = (best - target).abs();
            record.evals = scfg.max_evals;
            record.error = Some(reason);
        }
        Err(e) => return Err(e),
    }
    Ok(record)
}

/// Runs `cfg.trials` independent trials (trial `i` uses seed
/// `base_seed + i`) in parallel and returns them in trial order. Writes the
/// report to `cfg.out` when set.
pub fn run_trials(cfg: &RunConfig) -> Result<TrialTable> {
    cfg.validate()?;
    let problem = cfg.build_problem()?;
    let probe = cfg.solver_config(cfg.base_seed)?;
    if cfg.solver != SolverId::Nm {
        probe.validate(problem.dimension)?;
    }
    if matches!(cfg.solver, SolverId::AlDe | SolverId::AlNm) && !problem.is_path() {
        return Err(BenchError::usage(format!(
            "solver {} needs a path problem; {} is not one",
            cfg.solver, problem.id
        )));
    }
    let records = (0..cfg.trials)
        .into_par_iter()
        .map(|i| run_one(&problem, cfg, i))
        .collect::<Result<Vec<_>>>()?;
    let table = TrialTable::new(
        &problem.id,
        cfg.solver.as_str(),
        problem.direction,
        problem.optimum.kind(),
        cfg.eps_f,
        cfg.eps_x,
        records,
    );
    if let Some(path) = &cfg.out {
        std::fs::write(path, emit_report(&table, cfg.format)?)?;
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_problem_is_usage_error() {
        let cfg = RunConfig::new("f99", SolverId::De);
        match run_trials(&cfg) {
            Err(BenchError::Usage(msg)) => assert!(msg.contains("f10")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn flat_override_routing() {
        let mut c = RunConfig::new("f3", SolverId::De);
        c.apply_json(r#"{"a": 2, "max_evals": 500, "trials": 3, "seed": 9, "solver": "sa", "format": "json"}"#)
            .unwrap();
        assert_eq!(c.params.get("a"), Some(&2.0));
        assert_eq!(c.solver_overrides.get("max_evals"), Some(&500.0));
        assert_eq!((c.trials, c.base_seed, c.solver, c.format), (3, 9, SolverId::Sa, Format::Json));
        assert_eq!(c.solver_config(4).unwrap().max_evals, 500);
        assert!(c.apply_json("[1]").is_err());
        assert!(c.set("solver", &Value::from("cmaes")).is_err());
        assert!(c.set("max_evals", &Value::from(-1.0)).is_err());
    }

    #[test]
    fn invariants_checked() {
        let mut c = RunConfig::new("f3", SolverId::De);
        c.trials = 0;
        assert!(matches!(run_trials(&c), Err(BenchError::Usage(_))));
        c.trials = 1;
        c.eps_f = 0.0;
        assert!(matches!(run_trials(&c), Err(BenchError::Usage(_))));
    }

    #[test]
    fn al_on_vector_problem_is_usage_error() {
        let c = RunConfig::new("f3", SolverId::AlNm);
        assert!(matches!(run_trials(&c), Err(BenchError::Usage(_))));
    }

    #[test]
    fn success_rules_by_kind() {
        assert!(is_success(OptimumKind::PointSet, 1e-4, true, 5.0, None, 1e-3, 1e-2));
        assert!(!is_success(OptimumKind::PointSet, 1e-4, false, 0.0, None, 1e-3, 1e-2));
        assert!(!is_success(OptimumKind::Manifold, 1e-4, true, 0.1, None, 1e-3, 1e-2));
        assert!(is_success(OptimumKind::Curve, 1e-4, true, 1e-3, None, 1e-3, 1e-2));
        assert!(!is_success(OptimumKind::FlatRegions, 0.0, true, 0.0, Some(false), 1e-3, 1e-2));
        assert!(is_success(OptimumKind::FlatRegions, 0.0, true, 0.0, Some(true), 1e-3, 1e-2));
    }

    #[test]
    fn small_batch_is_ordered_and_aggregated() {
        let mut c = RunConfig::new("f6", SolverId::Sa);
        c.trials = 4;
        c.base_seed = 20;
        let t = run_trials(&c).unwrap();
        let seeds: Vec<u64> = t.records.iter().map(|r| r.seed).collect();
        assert_eq!(seeds, vec![20, 21, 22, 23]);
        assert_eq!(t.aggregates, TrialTable::aggregate(&t.records, t.direction, t.optimum_kind));
        assert!(t.aggregates.mean_location_gap.is_none());
    }

    #[test]
    fn maximize_aggregates_keep_natural_direction() {
        let rec = |v: f64| TrialRecord {
            problem: "f4".into(),
            solver: "sa".into(),
            trial: 0,
            seed: 0,
            best_point: vec![],
            best_path: None,
            best_value: v,
            objective_gap: 0.0,
            location_gap: Some(0.0),
            curve_l2: None,
            in_region: None,
            feasible: true,
            feasibility: None,
            evals: 1,
            evals_to_success: None,
            wall_ms: 0.0,
            noise_policy: "none".into(),
            success: false,
            error: None,
        };
        let a = TrialTable::aggregate(&[rec(150.0), rec(200.0), rec(190.0)], Direction::Maximize, OptimumKind::PointSet);
        assert_eq!((a.best_value, a.median_value, a.worst_value), (Some(200.0), Some(190.0), Some(150.0)));
        assert_eq!(a.mean_location_gap, Some(0.0));
    }
}
