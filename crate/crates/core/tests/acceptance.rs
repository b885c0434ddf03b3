//! Acceptance gate: one PASS/FAIL line per criterion.

use std::f64::consts::{FRAC_PI_2, SQRT_2};
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use optbench::benchmarks::{self, formulas, Overrides, F6_REPORTED_ENDPOINTS, VIBRATION_DATA, VIBRATION_TIMES};
use optbench::harness::{run_trials, RunConfig};
use optbench::noise;
use optbench::numerics::{
    analytic_step_response, functional_gradient, oscillatory_integral, path_energy, path_length,
    path_length_residual, rk4_step_response, Functional, Path, DEFAULT_STEP,
};
use optbench::problem::OPTIMUM_VALUE_TOL;
use optbench::solvers::SolverId;
use optbench::{NoiseKey, NoisePolicy, OptimumSpec, Problem};

struct Outcome {
    id: &'static str,
    passed: bool,
    detail: String,
}

struct Check {
    passed: bool,
    notes: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Self {
            passed: true,
            notes: Vec::new(),
        }
    }

    fn require(&mut self, ok: bool, note: String) {
        if !ok {
            self.passed = false;
        }
        self.notes.push(format!("{}{note}", if ok { "" } else { "!" }));
    }
}

fn criterion(id: &'static str, limit_s: Option<f64>, body: impl FnOnce(&mut Check)) -> Outcome {
    let start = Instant::now();
    let mut c = Check::new();
    body(&mut c);
    let secs = start.elapsed().as_secs_f64();
    match limit_s {
        Some(l) => c.require(secs < l, format!("{secs:.2}s < {l}s")),
        None => c.notes.push(format!("{secs:.2}s")),
    }
    let outcome = Outcome {
        id,
        passed: c.passed,
        detail: c.notes.join("; "),
    };
    println!("{} {:>2}: {}", if outcome.passed { "PASS" } else { "FAIL" }, outcome.id, outcome.detail);
    outcome
}

fn build(id: &str, kv: &[(&str, f64)]) -> Problem {
    let o: Overrides = kv.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    benchmarks::build(id, &o, NoisePolicy::default()).unwrap()
}

fn batch(problem: &str, solver: SolverId, seed: u64, eps_f: f64, eps_x: f64) -> RunConfig {
    let mut c = RunConfig::new(problem, solver);
    c.base_seed = seed;
    c.eps_f = eps_f;
    c.eps_x = eps_x;
    c
}

fn optimum_self_checks(c: &mut Check) {
    for id in ["f1", "f2", "f3", "f7", "noisy_sphere", "abs_sum", "f4"] {
        let p = benchmarks::build_default(id).unwrap();
        let OptimumSpec::PointSet { points, value } = &p.optimum else {
            c.require(false, format!("{id} has no point-set optimum"));
            continue;
        };
        let mut err: f64 = 0.0;
        let mut feasible = !points.is_empty();
        for x in points {
            err = err.max((p.evaluate_expected(x).unwrap() - value).abs());
            feasible &= p.is_feasible(x).unwrap().feasible;
        }
        c.require(
            err <= OPTIMUM_VALUE_TOL && feasible,
            format!("{id} {} pts err {err:.1e}", points.len()),
        );
    }
}

fn vibration(c: &mut Check) {
    let sim = rk4_step_response(0.25, 2.0, &VIBRATION_TIMES, DEFAULT_STEP).unwrap();
    let (mut rk, mut table): (f64, f64) = (0.0, 0.0);
    for ((t, y), d) in VIBRATION_TIMES.iter().zip(&sim.y).zip(&VIBRATION_DATA) {
        let exact = analytic_step_response(0.25, 2.0, *t).unwrap();
        rk = rk.max((y - exact).abs());
        table = table.max((exact - d).abs());
    }
    c.require(rk <= 1e-6, format!("rk4 vs analytic {rk:.1e}"));
    c.require(table <= 1.5e-3, format!("analytic vs table {table:.1e}"));

    let t = run_trials(&batch("f7", SolverId::De, 1, 1e-3, 1e-2)).unwrap();
    let hits = t
        .records
        .iter()
        .filter(|r| (r.best_point[0] - 0.25).abs() <= 0.02 && (r.best_point[1] - 2.0).abs() <= 0.02)
        .count();
    let max_evals = t.records.iter().map(|r| r.evals).max().unwrap();
    c.require(hits >= 9, format!("de+polish hits {hits}/10"));
    c.require(max_evals <= 20_000, format!("evals {max_evals}"));
}

fn integral(c: &mut Check) {
    let mut err: f64 = 0.0;
    for b in [0.0, 0.25, 0.5, 1.0, 2.0] {
        for k in [1u32, 3, 5, 10] {
            let v = oscillatory_integral(b, k, 1e-10).unwrap().value;
            err = err.max((v - (FRAC_PI_2 - f64::atan(b))).abs());
        }
    }
    c.require(err <= 1e-8, format!("quadrature vs pi/2 - atan(beta) on grid {err:.1e}"));

    let t = run_trials(&batch("f8", SolverId::De, 1, 1e-6, 1e-2)).unwrap();
    let hits = t
        .records
        .iter()
        .filter(|r| r.objective_gap <= 1e-6 && r.best_point[0] <= 1e-3)
        .count();
    c.require(hits >= 9, format!("beta -> 0 with gap <= 1e-6 in {hits}/10"));
}

fn shortest_path(c: &mut Check) {
    let t = run_trials(&batch("f9", SolverId::AlNm, 7, 1e-3, 1e-2)).unwrap();
    let hits = t.records.iter().filter(|r| r.success).count();
    let worst = t.aggregates.worst_value.unwrap();
    c.require(hits >= 9, format!("al+nm {hits}/10 (worst {worst:.6})"));

    let p = benchmarks::build_default("f9").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut below = 0;
    for _ in 0..1000 {
        let x: Vec<f64> = p.bounds.iter().map(|b| rng.gen_range(b.lo..=b.hi)).collect();
        if p.evaluate_expected(&x).unwrap() < SQRT_2 {
            below += 1;
        }
    }
    c.require(below == 0, format!("{below} of 1000 random paths below sqrt 2"));
}

fn rope(c: &mut Check) {
    let oracle = 1.0 - f64::sinh(2.0) / 2.0;
    let t = run_trials(&batch("f10", SolverId::AlNm, 1, 1e-2, 2e-2)).unwrap();
    let hits = t
        .records
        .iter()
        .filter(|r| {
            let residual = r
                .feasibility
                .as_ref()
                .and_then(|f| f.equality_residuals.first().copied())
                .map_or(f64::INFINITY, f64::abs);
            (r.best_value - oracle).abs() <= 1e-2
                && residual <= 1e-3
                && r.location_gap.is_some_and(|g| g <= 2e-2)
        })
        .count();
    c.require(hits >= 8, format!("al+nm {hits}/10 vs energy {oracle:.5}"));
}

fn flat_regions(c: &mut Check) {
    let inner = benchmarks::f6_boundary_root(1.3, 1.5);
    let outer = benchmarks::f6_boundary_root(1.8, 2.0);
    let (lo, hi) = F6_REPORTED_ENDPOINTS;
    let (di, dout) = ((inner - lo).abs(), (outer - hi).abs());
    c.require(di <= 5e-6, format!("inner root {inner:.8} vs {lo} ({di:.1e})"));
    c.require(dout <= 5e-6, format!("outer root {outer:.8} vs {hi} ({dout:.1e})"));

    let t = run_trials(&batch("f6", SolverId::Sa, 1, 1e-3, 1e-2)).unwrap();
    let hits = t.records.iter().filter(|r| r.in_region == Some(true)).count();
    c.require(hits >= 9, format!("sa in region {hits}/10"));
}

fn noise_invariants(c: &mut Check) {
    let f1 = benchmarks::build("f1", &Overrides::new(), NoisePolicy::PerEvaluation).unwrap();
    let origin = vec![0.0; f1.dimension];
    let off = (0..1000)
        .filter(|&i| f1.evaluate(&origin, NoiseKey::new(i * 7919 + 3, i)).unwrap() != -1.0)
        .count();
    c.require(off == 0, format!("f1 origin off -1 under {off} keys"));

    let x = [0.3, -0.2, 0.1, 0.7, -0.9];
    let differ = (0..1000)
        .filter(|&i| {
            let k = NoiseKey::new(99, i);
            f1.evaluate(&x, k).unwrap().to_bits() != f1.evaluate(&x, k).unwrap().to_bits()
        })
        .count();
    c.require(differ == 0, format!("{differ} non-identical repeats"));

    let n = 100_000u64;
    let mut bins = [0u64; 16];
    for i in 0..n {
        bins[((noise::uniform(NoiseKey::new(5, i), 1) * 16.0) as usize).min(15)] += 1;
    }
    let e = n as f64 / 16.0;
    let chi2: f64 = bins.iter().map(|&b| (b as f64 - e).powi(2) / e).sum();
    c.require(chi2 <= 37.697, format!("chi2 {chi2:.2} <= 37.697"));
}

fn gradients(c: &mut Check) {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let h = 1e-6;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let ys: Vec<f64> = (0..8).map(|_| rng.gen_range(-1.5..1.5)).collect();
        let p = Path::new(-1.0, 1.0, 0.2, -0.3, ys).unwrap();
        let fs: [(Functional, fn(&Path) -> f64); 3] = [
            (Functional::Length, path_length),
            (Functional::Energy, path_energy),
            (Functional::LengthResidual, |q| path_length_residual(q, 3.0)),
        ];
        for (which, f) in fs {
            for (i, g) in functional_gradient(&p, which).iter().enumerate() {
                let (mut a, mut b) = (p.clone(), p.clone());
                a.interior[i] += h;
                b.interior[i] -= h;
                let fd = (f(&a) - f(&b)) / (2.0 * h);
                worst = worst.max((g - fd).abs() / g.abs().max(1.0));
            }
        }
    }
    c.require(worst <= 1e-6, format!("worst relative error {worst:.1e}"));
}

fn feasibility(c: &mut Check) {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for a in [1.0, 2.0, 5.0] {
        let p = build("f3", &[("a", a)]);
        let w = 6.0 * a;
        let mut bad = 0;
        for _ in 0..1_000_000 {
            let x = [rng.gen_range(-w..=w), rng.gen_range(-w..=w)];
            let d = formulas::f3_diamond(&x, a) <= 0.0;
            let b = formulas::f3_ball(&x, a) <= 0.0;
            if (d && b) || p.is_feasible(&x).unwrap().feasible != (d || b) {
                bad += 1;
            }
        }
        c.require(bad == 0, format!("f3 a={a}: {bad} overlaps/mismatches"));
    }

    let f4 = benchmarks::build_default("f4").unwrap();
    let mut bad = 0;
    for _ in 0..100_000 {
        let x: [f64; 2] = [rng.gen_range(-100.1..=100.1), rng.gen_range(-100.1..=100.1)];
        let (i, j) = (x[0].round().clamp(-100.0, 100.0), x[1].round().clamp(-100.0, 100.0));
        let direct = 0.1 - (x[0] - i).abs() - (x[1] - j).abs() >= 0.0;
        if f4.is_feasible(&x).unwrap().feasible != direct {
            bad += 1;
        }
    }
    c.require(bad == 0, format!("f4 membership: {bad} mismatches"));
    let corner = f4.evaluate_expected(&[100.0, 100.0]).unwrap();
    c.require((corner - 200.0).abs() <= 0.02, format!("f4 corner {corner:.4}"));
}

fn strip_wall_ms(csv: &[u8]) -> Vec<String> {
    let text = String::from_utf8(csv.to_vec()).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap_or_default().split(',').collect();
    let col = header.iter().position(|h| *h == "wall_ms").unwrap();
    std::iter::once(header.join(","))
        .chain(lines.map(|l| {
            let mut cells: Vec<&str> = l.split(',').collect();
            cells.remove(col);
            cells.join(",")
        }))
        .collect()
}

fn reproducibility(c: &mut Check) {
    let run = || {
        let out = Command::new(env!("CARGO_BIN_EXE_bench"))
            .args(["run", "--problem", "f3", "--solver", "de", "--trials", "4", "--seed", "3"])
            .args(["--set", "max_evals=3000", "--format", "csv"])
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        out.stdout
    };
    let (a, b) = (strip_wall_ms(&run()), strip_wall_ms(&run()));
    c.require(a.len() == 5, format!("{} csv lines", a.len()));
    c.require(a == b, "identical modulo wall_ms".to_string());
}

#[test]
fn acceptance_criteria() {
    let outcomes = [
        criterion("1", Some(1.0), optimum_self_checks),
        criterion("2", Some(30.0), vibration),
        criterion("3", Some(10.0), integral),
        criterion("4", Some(30.0), shortest_path),
        criterion("5", Some(60.0), rope),
        criterion("6", None, flat_regions),
        criterion("7", None, noise_invariants),
        criterion("8", None, gradients),
        criterion("9", None, feasibility),
        criterion("10", None, reproducibility),
    ];
    let failed: Vec<&str> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    println!("{} of {} criteria passed", outcomes.len() - failed.len(), outcomes.len());
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
