//! The benchmark catalog: ten hard problems plus three warm-ups, each built
//! as a [`Problem`] with a verified optimum description.

pub mod formulas;
pub mod params;

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

pub use params::*;

use crate::error::{BenchError, Result};
use crate::noise::{self, NoiseKey, NoisePolicy};
use crate::numerics::gauss::GaussLegendre;
use crate::numerics::{self, oscillatory_integral, rk4_step_response, Functional, Path};
use crate::problem::{
    ConstraintGroup, Direction, FeasibleRegion, Interval, OptimumSpec, PathSpec, Problem, Region,
    Residual,
};

/// Every benchmark id, in display order.
pub const CATALOG: [&str; 13] = [
    "noisy_sphere",
    "f1",
    "abs_sum",
    "f2",
    "f3",
    "f4",
    "f5",
    "floor_sphere",
    "f6",
    "f7",
    "f8",
    "f9",
    "f10",
];

/// Paper-reported endpoints of the positive f6 flat region (D = 1).
pub const F6_REPORTED_ENDPOINTS: (f64, f64) = (1.41299, 1.89714);

fn noisy_pair(params: NoisyParams, policy: NoisePolicy) -> Result<(Problem, Problem)> {
    params.validate()?;
    let d = params.dim;
    let bounds = vec![Interval::new(-100.0, 100.0); d];
    let draw = move |key: NoiseKey| {
        let mut eps = vec![0.0; d];
        noise::uniform_vec(policy.effective_key(key), &mut eps);
        eps
    };
    let mean = vec![0.5; d];

    let mean_s = mean.clone();
    let sphere = Problem::builder("noisy_sphere", "sphere with uniform multiplicative noise", bounds.clone())
        .objective(move |x, key| Ok(formulas::noisy_sphere(x, &draw(key))))
        .expected(move |x, _| Ok(formulas::noisy_sphere(x, &mean_s)))
        .noise(policy)
        .optimum(OptimumSpec::PointSet {
            points: vec![vec![0.0; d]],
            value: 0.0,
        })
        .param("D", d)
        .build()?;

    let f1 = Problem::builder("f1", "noisy power sum with exponential well", bounds)
        .objective(move |x, key| Ok(formulas::f1(x, &draw(key))))
        .expected(move |x, _| Ok(formulas::f1(x, &mean)))
        .noise(policy)
        .optimum(OptimumSpec::PointSet {
            points: vec![vec![0.0; d]],
            value: -1.0,
        })
        .param("D", d)
        .build()?;
    Ok((sphere, f1))
}

/// Noisy sphere and f1.
pub fn make_noisy(params: NoisyParams, policy: NoisePolicy) -> Result<(Problem, Problem)> {
    noisy_pair(params, policy)
}

/// Absolute-value sum and f2.
pub fn make_kinked(params: KinkParams) -> Result<(Problem, Problem)> {
    params.validate()?;
    let d = params.dim;
    let abs = Problem::builder("abs_sum", "sum of absolute values", vec![Interval::new(-10.0, 10.0); d])
        .objective(|x, _| Ok(formulas::abs_sum(x)))
        .optimum(OptimumSpec::PointSet {
            points: vec![vec![0.0; d]],
            value: 0.0,
        })
        .param("D", d)
        .build()?;
    let w = d as f64 * PI;
    let f2 = Problem::builder("f2", "multi-kink function", vec![Interval::new(-w, w); d])
        .objective(|x, _| Ok(formulas::f2(x)))
        .optimum(OptimumSpec::PointSet {
            points: vec![(1..=d).map(|n| n as f64 * PI).collect()],
            value: 0.0,
        })
        .param("D", d)
        .build()?;
    Ok((abs, f2))
}

/// f3: two disjoint feasible pieces (a diamond and a ball).
pub fn make_isolated(params: IsolatedParams) -> Result<Problem> {
    params.validate()?;
    let IsolatedParams { dim: d, a } = params;
    let mut opt = vec![0.0; d];
    opt[0] = a;
    Problem::builder("f3", "cubic-sum objective on two isolated domains", vec![Interval::new(-6.0 * a, 6.0 * a); d])
        .objective(|x, _| Ok(formulas::f3(x)))
        .feasibility(FeasibleRegion::union(vec![
            ConstraintGroup::new("diamond", vec![Residual::new("|x1-2a|+sum|xn|<=a", move |x| formulas::f3_diamond(x, a))]),
            ConstraintGroup::new("ball", vec![Residual::new("sum(xn-5a)^2<=a^2", move |x| formulas::f3_ball(x, a))]),
        ]))
        .optimum(OptimumSpec::PointSet {
            points: vec![opt],
            value: a * a,
        })
        .param("D", d)
        .param("a", a)
        .build()
}

/// f4: Gaussian peaks on an integer lattice, feasible only on small diamonds
/// around each lattice point. Maximized.
pub fn make_grid_peaks(params: GridPeaksParams) -> Result<Problem> {
    params.validate()?;
    let GridPeaksParams { n, a } = params;
    let w = n as f64 + 1.0 / a;
    let builder = Problem::builder("f4", "lattice of peaks on isolated diamonds", vec![Interval::new(-w, w); 2])
        .direction(Direction::Maximize)
        .objective(move |x, _| Ok(formulas::f4(x[0], x[1], n, a)))
        .feasibility(FeasibleRegion::union(vec![ConstraintGroup::new(
            "lattice diamonds",
            vec![Residual::new("min |x-i|+|y-j| <= 1/a", move |x| formulas::f4_diamond_residual(x[0], x[1], n, a))],
        )]))
        .param("N", n)
        .param("a", a)
        .param("regions", params.region_count());
    let nf = n as f64;
    let corner = formulas::f4(nf, nf, n, a);
    builder
        .optimum(OptimumSpec::PointSet {
            points: vec![vec![nf, nf], vec![-nf, nf], vec![nf, -nf], vec![-nf, -nf]],
            value: corner,
        })
        .build()
}

/// f5: sphere outside a hyperboloid of revolution; optimal on a sphere of radius `a`.
pub fn make_hyperboloid(params: HyperboloidParams) -> Result<Problem> {
    params.validate()?;
    let HyperboloidParams { dim: d, a, b, .. } = params;
    let w = params.width();
    let mut probe = vec![0.0; d];
    probe[0] = a;
    Problem::builder("f5", "sphere with hyperboloid constraint", vec![Interval::new(-w, w); d])
        .objective(|x, _| Ok(formulas::sphere(x)))
        .feasibility(FeasibleRegion::intersection(vec![ConstraintGroup::new(
            "hyperboloid",
            vec![Residual::new("sum x_n^2/a^2 - x_D^2/b^2 >= 1", move |x| formulas::f5_hyperboloid(x, a, b))],
        )]))
        .optimum(OptimumSpec::Manifold {
            residual: Arc::new(move |x| formulas::f5_manifold(x, a)),
            probe,
            value: a * a,
        })
        .smooth(true)
        .param("D", d)
        .param("a", a)
        .param("b", b)
        .param("W", w)
        .build()
}

/// Root of `|x| + cos(x^2) = 1` inside `[lo, hi]` by bisection.
pub fn f6_boundary_root(lo: f64, hi: f64) -> f64 {
    let g = |x: f64| formulas::f6_term(x) - 1.0;
    let (mut lo, mut hi) = (lo, hi);
    let glo = g(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if (g(mid) > 0.0) == (glo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Minimum of `|x| + cos(x^2)` over the real line (attained near |x| = 1.685).
pub fn f6_term_minimum() -> f64 {
    // golden section on the single interior minimum of the flat-region bracket
    let (mut lo, mut hi) = (1.5, 1.85);
    let r = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let m1 = hi - r * (hi - lo);
        let m2 = lo + r * (hi - lo);
        if formulas::f6_term(m1) < formulas::f6_term(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    formulas::f6_term(0.5 * (lo + hi))
}

/// Floor-quantized sphere and f6.
pub fn make_floor(params: FloorParams) -> Result<(Problem, Problem)> {
    params.validate()?;
    let d = params.dim;
    let bounds = vec![Interval::new(-10.0, 10.0); d];
    let sphere = Problem::builder("floor_sphere", "floor of the sphere function", bounds.clone())
        .objective(|x, _| Ok(formulas::floor_sphere(x)))
        .optimum(OptimumSpec::FlatRegions {
            regions: vec![Region::Ball {
                center: vec![0.0; d],
                radius: 1.0,
            }],
            value: 0.0,
        })
        .param("D", d)
        .build()?;

    let (regions, value) = if d == 1 {
        let (lo, hi) = F6_REPORTED_ENDPOINTS;
        let inner = f6_boundary_root(lo - 1e-3, lo + 1e-3);
        let outer = f6_boundary_root(hi - 1e-3, hi + 1e-3);
        (
            vec![
                Region::Box(vec![Interval::new(-outer, -inner)]),
                Region::Box(vec![Interval::new(inner, outer)]),
            ],
            0.0,
        )
    } else {
        let level = (d as f64 * f6_term_minimum()).floor();
        let top = level + 1.0;
        (
            vec![Region::LevelSet {
                name: format!("sum(|x|+cos(x^2)) < {top}"),
                g: Arc::new(move |x| formulas::f6_inner(x) - top),
            }],
            level,
        )
    };
    let f6 = Problem::builder("f6", "floor of |x| + cos(x^2) sums", bounds)
        .objective(|x, _| Ok(formulas::f6(x)))
        .optimum(OptimumSpec::FlatRegions { regions, value })
        .param("D", d)
        .build()?;
    Ok((sphere, f6))
}

/// Sum of squared differences between the simulated step response and the data table.
pub fn vibration_misfit(params: &VibrationParams, zeta: f64, omega: f64) -> Result<f64> {
    let sim = rk4_step_response(zeta, omega, &params.times, params.step)?;
    Ok(sim.y.iter().zip(&params.data).map(|(s, d)| (d - s).powi(2)).sum())
}

/// f7: estimate `(zeta, omega)` of the vibration ODE from the measured table.
pub fn make_vibration(params: VibrationParams) -> Result<Problem> {
    params.validate()?;
    let truth = vec![0.25, 2.0];
    let value = vibration_misfit(&params, truth[0], truth[1])?;
    let p = Arc::new(params);
    let pp = Arc::clone(&p);
    Problem::builder(
        "f7",
        "vibration parameter estimation",
        vec![Interval::new(0.01, 0.99), Interval::new(0.1, 5.0)],
    )
    .objective(move |x, _| vibration_misfit(&pp, x[0], x[1]))
    .optimum(OptimumSpec::PointSet {
        points: vec![truth],
        value,
    })
    .smooth(true)
    .param("h", p.step)
    .param("samples", p.times.len())
    .build()
}

/// f8: maximize the damped sine integral over `beta >= 0` and integer `k`.
pub fn make_integral(params: IntegralParams) -> Result<Problem> {
    params.validate()?;
    let IntegralParams {
        beta_max,
        k_min,
        k_max,
        tol,
    } = params;
    Problem::builder(
        "f8",
        "damped sine integral on the half line",
        vec![
            Interval::new(0.0, beta_max),
            Interval::new(f64::from(k_min), f64::from(k_max)),
        ],
    )
    .direction(Direction::Maximize)
    .objective(move |x, _| Ok(oscillatory_integral(x[0], x[1] as u32, tol)?.value))
    .integer_coords(vec![1])
    .optimum(OptimumSpec::Manifold {
        residual: Arc::new(|x| x[0]),
        probe: vec![0.0, f64::from(k_min)],
        value: FRAC_PI_2,
    })
    .smooth(true)
    .param("beta_max", beta_max)
    .param("k", format!("{k_min}..={k_max}"))
    .param("tol", tol)
    .build()
}

fn path_objective(spec: PathSpec) -> impl Fn(&[f64], NoiseKey) -> Result<f64> + Send + Sync {
    move |x, _| {
        let p = spec.path(x)?;
        Ok(match spec.objective {
            Functional::Length => numerics::path_length(&p),
            Functional::Energy => numerics::path_energy(&p),
            Functional::LengthResidual => numerics::path_length_residual(&p, spec.length_target.unwrap_or(0.0)),
        })
    }
}

/// f9: shortest path from (0, 0) to (1, 1) with `y >= 0`.
pub fn make_shortest_path(params: PathParams) -> Result<Problem> {
    params.validate()?;
    let m = params.nodes;
    let spec = PathSpec {
        x_lo: 0.0,
        x_hi: 1.0,
        y_lo: 0.0,
        y_hi: 1.0,
        objective: Functional::Length,
        length_target: None,
    };
    let line = Path::sampled(0.0, 1.0, 0.0, 1.0, m, |x| x)?;
    Problem::builder("f9", "shortest path between two points", vec![Interval::new(0.0, 5.0); m])
        .objective(path_objective(spec.clone()))
        .path(spec)
        .optimum(OptimumSpec::Curve {
            reference: line.interior,
            value: 2f64.sqrt(),
        })
        .smooth(true)
        .param("M", m)
        .build()
}

/// Scale `c` of the catenary `c cosh(x/c) + const` through `(±a, 0)` with arc length `length`.
pub fn catenary_scale(a: f64, length: f64) -> Result<f64> {
    if !(length > 2.0 * a) {
        return Err(BenchError::contract(format!("catenary needs L > 2a, got L={length} a={a}")));
    }
    // sinh(u)/u = L/(2a) with u = a/c, increasing in u
    let target = length / (2.0 * a);
    let ratio = |u: f64| u.sinh() / u;
    let (mut lo, mut hi) = (1e-12, 1.0);
    while ratio(hi) < target {
        hi *= 2.0;
        if hi > 700.0 {
            return Err(BenchError::contract(format!("rope length {length} too large for a={a}")));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if ratio(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(a / (0.5 * (lo + hi)))
}

/// Potential energy `∫ y sqrt(1 + y'^2) dx` of the catenary with scale `c`,
/// by composite Gauss–Legendre quadrature.
pub fn catenary_energy(a: f64, c: f64) -> f64 {
    let depth = c * (a / c).cosh();
    let rule = GaussLegendre::new(24);
    rule.integrate_composite(-a, a, 64, |x| {
        let ch = (x / c).cosh();
        (c * ch - depth) * ch
    })
}

/// f10: hanging rope of fixed length between (−a, 0) and (a, 0).
pub fn make_rope(params: RopeParams) -> Result<Problem> {
    params.validate()?;
    let RopeParams { a, length, nodes: m } = params;
    let c = catenary_scale(a, length)?;
    let depth = c * (a / c).cosh();
    let reference = Path::sampled(-a, a, 0.0, 0.0, m, |x| c * (x / c).cosh() - depth)?;
    let bounds = vec![Interval::new(-5.0, 5.0); m];
    if let Some(v) = reference.interior.iter().find(|v| !bounds[0].contains(**v)) {
        return Err(BenchError::contract(format!(
            "rope of length {length} sags to {v}, outside the ordinate bounds"
        )));
    }
    let spec = PathSpec {
        x_lo: -a,
        x_hi: a,
        y_lo: 0.0,
        y_hi: 0.0,
        objective: Functional::Energy,
        length_target: Some(length),
    };
    let geometry = spec.clone();
    Problem::builder("f10", "hanging rope of fixed length", bounds)
        .objective(path_objective(spec.clone()))
        .equality("length", 1e-3, move |x| match geometry.path(x) {
            Ok(p) => numerics::path_length_residual(&p, length),
            Err(_) => f64::INFINITY,
        })
        .path(spec)
        .optimum(OptimumSpec::Curve {
            reference: reference.interior,
            value: catenary_energy(a, c),
        })
        .smooth(true)
        .param("a", a)
        .param("L", length)
        .param("M", m)
        .param("catenary_scale", c)
        .build()
}

/// Parameter overrides by name, e.g. `{"D": 5.0, "a": 2.0}`.
pub type Overrides = BTreeMap<String, f64>;

fn take(over: &mut Overrides, key: &str) -> Option<f64> {
    over.remove(key)
}

fn take_usize(over: &mut Overrides, key: &str, default: usize) -> Result<usize> {
    match take(over, key) {
        None => Ok(default),
        Some(v) if v >= 0.0 && v.fract() == 0.0 => Ok(v as usize),
        Some(v) => Err(BenchError::usage(format!("parameter {key} must be a non-negative integer, got {v}"))),
    }
}

fn take_f64(over: &mut Overrides, key: &str, default: f64) -> f64 {
    take(over, key).unwrap_or(default)
}

/// Builds a benchmark by catalog id.
pub fn build(id: &str, overrides: &Overrides, policy: NoisePolicy) -> Result<Problem> {
    let mut o = overrides.clone();
    let problem = match id {
        "noisy_sphere" | "f1" => {
            let p = NoisyParams {
                dim: take_usize(&mut o, "D", NoisyParams::default().dim)?,
            };
            let (s, f) = make_noisy(p, policy)?;
            if id == "f1" {
                f
            } else {
                s
            }
        }
        "abs_sum" | "f2" => {
            let default = if id == "f2" { KinkParams::default().dim } else { 5 };
            let p = KinkParams {
                dim: take_usize(&mut o, "D", default)?,
            };
            let (s, f) = make_kinked(p)?;
            if id == "f2" {
                f
            } else {
                s
            }
        }
        "f3" => {
            let d = IsolatedParams::default();
            make_isolated(IsolatedParams {
                dim: take_usize(&mut o, "D", d.dim)?,
                a: take_f64(&mut o, "a", d.a),
            })?
        }
        "f4" => {
            let d = GridPeaksParams::default();
            make_grid_peaks(GridPeaksParams {
                n: take_usize(&mut o, "N", d.n as usize)? as i64,
                a: take_f64(&mut o, "a", d.a),
            })?
        }
        "f5" => {
            let d = HyperboloidParams::default();
            make_hyperboloid(HyperboloidParams {
                dim: take_usize(&mut o, "D", d.dim)?,
                a: take_f64(&mut o, "a", d.a),
                b: take_f64(&mut o, "b", d.b),
                half_width: take(&mut o, "W"),
            })?
        }
        "floor_sphere" | "f6" => {
            let p = FloorParams {
                dim: take_usize(&mut o, "D", FloorParams::default().dim)?,
            };
            let (s, f) = make_floor(p)?;
            if id == "f6" {
                f
            } else {
                s
            }
        }
        "f7" => make_vibration(VibrationParams {
            step: take_f64(&mut o, "h", numerics::DEFAULT_STEP),
            ..Default::default()
        })?,
        "f8" => {
            let d = IntegralParams::default();
            make_integral(IntegralParams {
                beta_max: take_f64(&mut o, "beta_max", d.beta_max),
                k_min: take_usize(&mut o, "k_min", d.k_min as usize)? as u32,
                k_max: take_usize(&mut o, "k_max", d.k_max as usize)? as u32,
                tol: take_f64(&mut o, "tol", d.tol),
            })?
        }
        "f9" => make_shortest_path(PathParams {
            nodes: take_usize(&mut o, "M", PathParams::default().nodes)?,
        })?,
        "f10" => {
            let d = RopeParams::default();
            make_rope(RopeParams {
                a: take_f64(&mut o, "a", d.a),
                length: take_f64(&mut o, "L", d.length),
                nodes: take_usize(&mut o, "M", d.nodes)?,
            })?
        }
        other => {
            return Err(BenchError::usage(format!(
                "unknown problem '{other}'; available: {}",
                CATALOG.join(", ")
            )))
        }
    };
    if let Some(k) = o.keys().next() {
        return Err(BenchError::usage(format!("problem {id} has no parameter '{k}'")));
    }
    Ok(problem)
}

/// Builds with default parameters and the default noise policy.
pub fn build_default(id: &str) -> Result<Problem> {
    build(id, &Overrides::new(), NoisePolicy::default())
}
