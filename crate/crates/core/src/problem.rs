//! Uniform problem abstraction: bounds, objective, feasibility, and an
//! optimum description that stays meaningful when the optimum is a point set,
//! a manifold, a union of flat regions, or a curve.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};
use crate::noise::{NoiseKey, NoisePolicy};
use crate::numerics::{Functional, Path};

/// Objective evaluator. Deterministic problems ignore the key.
pub type ObjectiveFn = dyn Fn(&[f64], NoiseKey) -> Result<f64> + Send + Sync;
/// Scalar residual of a point.
pub type ResidualFn = dyn Fn(&[f64]) -> f64 + Send + Sync;

/// Slack used when deciding membership and equality of optimum values.
pub const OPTIMUM_VALUE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Minimize,
    Maximize,
}

impl Direction {
    /// Harness-facing score: smaller is always better.
    pub fn normalize(self, value: f64) -> f64 {
        match self {
            Direction::Minimize => value,
            Direction::Maximize => -value,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_open(&self, x: f64) -> bool {
        self.lo < x && x < self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lo, self.hi)
    }

    /// Distance from `x` to the closed interval.
    pub fn distance(&self, x: f64) -> f64 {
        if x < self.lo {
            self.lo - x
        } else if x > self.hi {
            x - self.hi
        } else {
            0.0
        }
    }
}

/// A named inequality `g(x) <= 0`.
#[derive(Clone)]
pub struct Residual {
    pub name: String,
    pub g: Arc<ResidualFn>,
}

impl Residual {
    pub fn new(name: impl Into<String>, g: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            g: Arc::new(g),
        }
    }
}

impl fmt::Debug for Residual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Residual({})", self.name)
    }
}

/// Inequalities that must hold together.
#[derive(Debug, Clone)]
pub struct ConstraintGroup {
    pub name: String,
    pub residuals: Vec<Residual>,
}

impl ConstraintGroup {
    pub fn new(name: impl Into<String>, residuals: Vec<Residual>) -> Self {
        Self {
            name: name.into(),
            residuals,
        }
    }

    /// Largest residual in the group (`-inf` for an empty group).
    pub fn worst(&self, x: &[f64]) -> f64 {
        self.residuals
            .iter()
            .map(|r| (r.g)(x))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Sum of positive parts.
    pub fn violation(&self, x: &[f64]) -> f64 {
        self.residuals.iter().map(|r| (r.g)(x).max(0.0)).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Combinator {
    IntersectionOfGroups,
    UnionOfGroups,
}

#[derive(Debug, Clone)]
pub struct FeasibleRegion {
    pub combinator: Combinator,
    pub groups: Vec<ConstraintGroup>,
}

impl FeasibleRegion {
    pub fn unconstrained() -> Self {
        Self {
            combinator: Combinator::IntersectionOfGroups,
            groups: Vec::new(),
        }
    }

    pub fn intersection(groups: Vec<ConstraintGroup>) -> Self {
        Self {
            combinator: Combinator::IntersectionOfGroups,
            groups,
        }
    }

    pub fn union(groups: Vec<ConstraintGroup>) -> Self {
        Self {
            combinator: Combinator::UnionOfGroups,
            groups,
        }
    }

    pub fn is_unconstrained(&self) -> bool {
        self.groups.is_empty()
    }
}

/// `h(x) = 0`, accepted when `|h(x)| <= tol`.
#[derive(Clone)]
pub struct EqualityConstraint {
    pub name: String,
    pub h: Arc<ResidualFn>,
    pub tol: f64,
}

impl fmt::Debug for EqualityConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EqualityConstraint({}, tol={})", self.name, self.tol)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub feasible: bool,
    /// Largest inequality residual of each group, in group order.
    pub group_worst: Vec<f64>,
    /// Signed equality residuals.
    pub equality_residuals: Vec<f64>,
    /// Total violation used by feasibility-rule comparisons; zero iff feasible.
    pub violation: f64,
}

/// Open region on which a quantized objective attains its optimum.
#[derive(Clone)]
pub enum Region {
    /// Product of open intervals.
    Box(Vec<Interval>),
    /// Open ball.
    Ball { center: Vec<f64>, radius: f64 },
    /// `{x : g(x) < 0}`; `g` also serves as the out-of-region distance proxy.
    LevelSet { name: String, g: Arc<ResidualFn> },
}

impl Region {
    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            Region::Box(iv) => iv.iter().zip(x).all(|(i, &v)| i.contains_open(v)),
            Region::Ball { center, radius } => euclid(center, x) < *radius,
            Region::LevelSet { g, .. } => g(x) < 0.0,
        }
    }

    /// Zero inside, otherwise distance to the closure (or the level-set excess).
    pub fn distance(&self, x: &[f64]) -> f64 {
        if self.contains(x) {
            return 0.0;
        }
        match self {
            Region::Box(iv) => iv
                .iter()
                .zip(x)
                .map(|(i, &v)| i.distance(v).powi(2))
                .sum::<f64>()
                .sqrt(),
            Region::Ball { center, radius } => (euclid(center, x) - radius).max(0.0),
            Region::LevelSet { g, .. } => g(x).max(0.0),
        }
    }
}

impl fmt::Debug for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::Box(iv) => f.debug_tuple("Box").field(iv).finish(),
            Region::Ball { center, radius } => f
                .debug_struct("Ball")
                .field("center", center)
                .field("radius", radius)
                .finish(),
            Region::LevelSet { name, .. } => write!(f, "LevelSet({name})"),
        }
    }
}

/// Where the optimum lies and what it is worth (in the problem's own direction).
#[derive(Clone)]
pub enum OptimumSpec {
    PointSet {
        points: Vec<Vec<f64>>,
        value: f64,
    },
    /// Optimal points satisfy `r(x) = 0`; `probe` is one known such point.
    Manifold {
        residual: Arc<ResidualFn>,
        probe: Vec<f64>,
        value: f64,
    },
    FlatRegions {
        regions: Vec<Region>,
        value: f64,
    },
    /// Reference interior ordinates on the problem's grid.
    Curve {
        reference: Vec<f64>,
        value: f64,
    },
}

impl OptimumSpec {
    pub fn value(&self) -> f64 {
        match self {
            OptimumSpec::PointSet { value, .. }
            | OptimumSpec::Manifold { value, .. }
            | OptimumSpec::FlatRegions { value, .. }
            | OptimumSpec::Curve { value, .. } => *value,
        }
    }

    pub fn kind(&self) -> OptimumKind {
        match self {
            OptimumSpec::PointSet { .. } => OptimumKind::PointSet,
            OptimumSpec::Manifold { .. } => OptimumKind::Manifold,
            OptimumSpec::FlatRegions { .. } => OptimumKind::FlatRegions,
            OptimumSpec::Curve { .. } => OptimumKind::Curve,
        }
    }
}

impl fmt::Debug for OptimumSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OptimumSpec::PointSet { points, value } => f
                .debug_struct("PointSet")
                .field("points", points)
                .field("value", value)
                .finish(),
            OptimumSpec::Manifold { probe, value, .. } => f
                .debug_struct("Manifold")
                .field("probe", probe)
                .field("value", value)
                .finish(),
            OptimumSpec::FlatRegions { regions, value } => f
                .debug_struct("FlatRegions")
                .field("regions", regions)
                .field("value", value)
                .finish(),
            OptimumSpec::Curve { reference, value } => f
                .debug_struct("Curve")
                .field("nodes", &reference.len())
                .field("value", value)
                .finish(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimumKind {
    PointSet,
    Manifold,
    FlatRegions,
    Curve,
}

/// Geometry of a path problem: the decision vector holds the interior
/// ordinates of a [`Path`] with these endpoints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSpec {
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
    pub objective: Functional,
    /// Target length of the equality-constrained variant.
    pub length_target: Option<f64>,
}

impl PathSpec {
    pub fn path(&self, interior: &[f64]) -> Result<Path> {
        Path::new(self.x_lo, self.x_hi, self.y_lo, self.y_hi, interior.to_vec())
    }
}

/// Candidate handed to [`Problem::optimum_gap`].
#[derive(Debug, Clone, Copy)]
pub enum Candidate<'a> {
    Point(&'a [f64]),
    Path(&'a Path),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub objective_gap: f64,
    pub location_gap: f64,
    pub feasible: bool,
    /// Grid-weighted L2 deviation, curve optima only.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub curve_l2: Option<f64>,
    /// Membership in a flat region, flat-region optima only.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub in_region: Option<bool>,
}

/// Immutable benchmark definition.
#[derive(Clone)]
pub struct Problem {
    pub id: String,
    pub title: String,
    pub dimension: usize,
    pub bounds: Vec<Interval>,
    pub direction: Direction,
    objective: Arc<ObjectiveFn>,
    /// Evaluation with every noise factor at its mean; `None` for deterministic problems.
    expected: Option<Arc<ObjectiveFn>>,
    pub feasibility: FeasibleRegion,
    pub equalities: Vec<EqualityConstraint>,
    pub optimum: OptimumSpec,
    pub integer_coords: Vec<usize>,
    pub noise: Option<NoisePolicy>,
    pub path: Option<PathSpec>,
    /// Suited to simplex polishing after a global search.
    pub smooth: bool,
    /// Free-form parameter listing for `describe`.
    pub params: Vec<(String, String)>,
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("id", &self.id)
            .field("dimension", &self.dimension)
            .field("direction", &self.direction)
            .field("optimum", &self.optimum)
            .field("noise", &self.noise)
            .finish_non_exhaustive()
    }
}

/// Builder-style constructor used by the benchmark catalog.
pub struct ProblemBuilder {
    problem: Problem,
}

impl ProblemBuilder {
    pub fn objective(mut self, f: impl Fn(&[f64], NoiseKey) -> Result<f64> + Send + Sync + 'static) -> Self {
        self.problem.objective = Arc::new(f);
        self
    }

    pub fn expected(mut self, f: impl Fn(&[f64], NoiseKey) -> Result<f64> + Send + Sync + 'static) -> Self {
        self.problem.expected = Some(Arc::new(f));
        self
    }

    pub fn direction(mut self, d: Direction) -> Self {
        self.problem.direction = d;
        self
    }

    pub fn feasibility(mut self, region: FeasibleRegion) -> Self {
        self.problem.feasibility = region;
        self
    }

    pub fn equality(mut self, name: impl Into<String>, tol: f64, h: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        self.problem.equalities.push(EqualityConstraint {
            name: name.into(),
            h: Arc::new(h),
            tol,
        });
        self
    }

    pub fn optimum(mut self, o: OptimumSpec) -> Self {
        self.problem.optimum = o;
        self
    }

    pub fn integer_coords(mut self, c: Vec<usize>) -> Self {
        self.problem.integer_coords = c;
        self
    }

    pub fn noise(mut self, p: NoisePolicy) -> Self {
        self.problem.noise = Some(p);
        self
    }

    pub fn path(mut self, p: PathSpec) -> Self {
        self.problem.path = Some(p);
        self
    }

    pub fn smooth(mut self, s: bool) -> Self {
        self.problem.smooth = s;
        self
    }

    pub fn param(mut self, k: &str, v: impl fmt::Display) -> Self {
        self.problem.params.push((k.to_string(), v.to_string()));
        self
    }

    /// Finishes and runs [`Problem::self_check`].
    pub fn build(self) -> Result<Problem> {
        let p = self.problem;
        p.validate_shape()?;
        p.self_check()?;
        Ok(p)
    }

    /// Finishes without the optimum self-check (used when the optimum value
    /// is computed from the problem itself).
    pub fn build_unchecked(self) -> Result<Problem> {
        let p = self.problem;
        p.validate_shape()?;
        Ok(p)
    }

    pub fn peek(&self) -> &Problem {
        &self.problem
    }
}

impl Problem {
    pub fn builder(id: &str, title: &str, bounds: Vec<Interval>) -> ProblemBuilder {
        let dimension = bounds.len();
        ProblemBuilder {
            problem: Problem {
                id: id.to_string(),
                title: title.to_string(),
                dimension,
                bounds,
                direction: Direction::Minimize,
                objective: Arc::new(|_, _| Err(BenchError::contract("objective not set"))),
                expected: None,
                feasibility: FeasibleRegion::unconstrained(),
                equalities: Vec::new(),
                optimum: OptimumSpec::PointSet {
                    points: Vec::new(),
                    value: f64::NAN,
                },
                integer_coords: Vec::new(),
                noise: None,
                path: None,
                smooth: false,
                params: Vec::new(),
            },
        }
    }

    fn validate_shape(&self) -> Result<()> {
        if self.dimension == 0 {
            return Err(BenchError::contract(format!("{}: dimension must be positive", self.id)));
        }
        for (i, b) in self.bounds.iter().enumerate() {
            if !(b.lo.is_finite() && b.hi.is_finite() && b.lo <= b.hi) {
                return Err(BenchError::contract(format!(
                    "{}: bad bounds [{}, {}] at coordinate {i}",
                    self.id, b.lo, b.hi
                )));
            }
        }
        if let Some(&c) = self.integer_coords.iter().find(|&&c| c >= self.dimension) {
            return Err(BenchError::contract(format!("{}: integer coordinate {c} out of range", self.id)));
        }
        Ok(())
    }

    pub fn is_noisy(&self) -> bool {
        self.noise.is_some()
    }

    pub fn is_path(&self) -> bool {
        self.path.is_some()
    }

    fn check_dimension(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dimension {
            return Err(BenchError::contract(format!(
                "{}: expected {} coordinates, got {}",
                self.id,
                self.dimension,
                x.len()
            )));
        }
        Ok(())
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        self.check_dimension(x)?;
        for (i, (&v, b)) in x.iter().zip(&self.bounds).enumerate() {
            if !b.contains(v) {
                return Err(BenchError::contract(format!(
                    "{}: coordinate {i} = {v} outside [{}, {}]",
                    self.id, b.lo, b.hi
                )));
            }
        }
        for &c in &self.integer_coords {
            if x[c].fract() != 0.0 {
                return Err(BenchError::contract(format!(
                    "{}: coordinate {c} must be an integer, got {}",
                    self.id, x[c]
                )));
            }
        }
        Ok(())
    }

    /// Objective value at `x` for the given noise key.
    pub fn evaluate(&self, x: &[f64], key: NoiseKey) -> Result<f64> {
        self.check_point(x)?;
        (self.objective)(x, key)
    }

    /// Noise-free objective: every noise factor replaced by its mean.
    pub fn evaluate_expected(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        match &self.expected {
            Some(f) => f(x, NoiseKey::default()),
            None => (self.objective)(x, NoiseKey::default()),
        }
    }

    /// Direction-normalized score (smaller is better).
    pub fn score(&self, value: f64) -> f64 {
        self.direction.normalize(value)
    }

    pub fn is_feasible(&self, x: &[f64]) -> Result<FeasibilityReport> {
        self.check_dimension(x)?;
        let group_worst: Vec<f64> = self.feasibility.groups.iter().map(|g| g.worst(x)).collect();
        let sat = |w: &f64| *w <= 0.0;
        let (ineq_ok, ineq_violation) = if self.feasibility.groups.is_empty() {
            (true, 0.0)
        } else {
            match self.feasibility.combinator {
                Combinator::IntersectionOfGroups => (
                    group_worst.iter().all(sat),
                    self.feasibility.groups.iter().map(|g| g.violation(x)).sum(),
                ),
                Combinator::UnionOfGroups => (
                    group_worst.iter().any(sat),
                    self.feasibility
                        .groups
                        .iter()
                        .map(|g| g.violation(x))
                        .fold(f64::INFINITY, f64::min),
                ),
            }
        };
        let equality_residuals: Vec<f64> = self.equalities.iter().map(|e| (e.h)(x)).collect();
        let eq_violation: f64 = self
            .equalities
            .iter()
            .zip(&equality_residuals)
            .map(|(e, r)| (r.abs() - e.tol).max(0.0))
            .sum();
        let feasible = ineq_ok && eq_violation == 0.0;
        let violation = if feasible {
            0.0
        } else {
            // a failed union can only be reached with positive residuals
            (ineq_violation + eq_violation).max(f64::MIN_POSITIVE)
        };
        Ok(FeasibilityReport {
            feasible,
            group_worst,
            equality_residuals,
            violation,
        })
    }

    /// Builds the path represented by a decision vector of a path problem.
    pub fn path_of(&self, interior: &[f64]) -> Result<Path> {
        let spec = self
            .path
            .as_ref()
            .ok_or_else(|| BenchError::contract(format!("{} is not a path problem", self.id)))?;
        self.check_dimension(interior)?;
        spec.path(interior)
    }

    pub fn optimum_gap(&self, candidate: Candidate<'_>) -> Result<GapReport> {
        let x: Vec<f64> = match (candidate, &self.path) {
            (Candidate::Point(x), None) => x.to_vec(),
            (Candidate::Path(p), Some(spec)) => {
                let same = p.interior_len() == self.dimension
                    && p.x_lo == spec.x_lo
                    && p.x_hi == spec.x_hi
                    && p.y_lo == spec.y_lo
                    && p.y_hi == spec.y_hi;
                if !same {
                    return Err(BenchError::contract(format!(
                        "{}: path does not match the problem grid or endpoints",
                        self.id
                    )));
                }
                p.interior.clone()
            }
            (Candidate::Point(_), Some(_)) => {
                return Err(BenchError::contract(format!("{} expects a path candidate", self.id)))
            }
            (Candidate::Path(_), None) => {
                return Err(BenchError::contract(format!("{} expects a point candidate", self.id)))
            }
        };
        let value = self.evaluate_expected(&x)?;
        let feasible = self.is_feasible(&x)?.feasible;
        let objective_gap = (self.score(value) - self.score(self.optimum.value())).abs();
        let mut report = GapReport {
            objective_gap,
            location_gap: 0.0,
            feasible,
            curve_l2: None,
            in_region: None,
        };
        match &self.optimum {
            OptimumSpec::PointSet { points, .. } => {
                report.location_gap = points
                    .iter()
                    .map(|p| euclid(p, &x))
                    .fold(f64::INFINITY, f64::min);
            }
            OptimumSpec::Manifold { residual, .. } => {
                report.location_gap = residual(&x).abs();
            }
            OptimumSpec::FlatRegions { regions, .. } => {
                let inside = regions.iter().any(|r| r.contains(&x));
                report.in_region = Some(inside);
                report.location_gap = regions
                    .iter()
                    .map(|r| r.distance(&x))
                    .fold(f64::INFINITY, f64::min);
            }
            OptimumSpec::Curve { reference, .. } => {
                let h = self
                    .path
                    .as_ref()
                    .map(|s| (s.x_hi - s.x_lo) / (self.dimension as f64 + 1.0))
                    .unwrap_or(1.0);
                let mut linf: f64 = 0.0;
                let mut sq = 0.0;
                for (a, b) in x.iter().zip(reference) {
                    let d = (a - b).abs();
                    linf = linf.max(d);
                    sq += d * d;
                }
                report.location_gap = linf;
                report.curve_l2 = Some((h * sq).sqrt());
            }
        }
        Ok(report)
    }

    /// Verifies the declared optimum against the problem itself.
    pub fn self_check(&self) -> Result<()> {
        match &self.optimum {
            OptimumSpec::PointSet { points, value } => {
                if points.is_empty() {
                    return Err(BenchError::contract(format!("{}: empty optimum point set", self.id)));
                }
                for p in points {
                    let v = self.evaluate_expected(p)?;
                    if (v - value).abs() > OPTIMUM_VALUE_TOL {
                        return Err(BenchError::contract(format!(
                            "{}: optimum {p:?} evaluates to {v}, declared {value}",
                            self.id
                        )));
                    }
                    if !self.is_feasible(p)?.feasible {
                        return Err(BenchError::contract(format!(
                            "{}: optimum {p:?} is infeasible",
                            self.id
                        )));
                    }
                }
            }
            OptimumSpec::Manifold {
                residual,
                probe,
                value,
            } => {
                let r = residual(probe);
                if r.abs() > 1e-12 {
                    return Err(BenchError::contract(format!(
                        "{}: manifold probe has residual {r}",
                        self.id
                    )));
                }
                let v = self.evaluate_expected(probe)?;
                if (v - value).abs() > 1e-6 {
                    return Err(BenchError::contract(format!(
                        "{}: manifold probe evaluates to {v}, declared {value}",
                        self.id
                    )));
                }
            }
            OptimumSpec::FlatRegions { regions, .. } => {
                if regions.is_empty() {
                    return Err(BenchError::contract(format!("{}: no flat regions", self.id)));
                }
            }
            OptimumSpec::Curve { reference, .. } => {
                if reference.len() != self.dimension {
                    return Err(BenchError::contract(format!(
                        "{}: reference curve has {} nodes, expected {}",
                        self.id,
                        reference.len(),
                        self.dimension
                    )));
                }
            }
        }
        Ok(())
    }

    /// Clamps into the box and rounds integer coordinates to the nearest
    /// in-range integer.
    pub fn snap(&self, x: &mut [f64]) {
        for (v, b) in x.iter_mut().zip(&self.bounds) {
            *v = b.clamp(*v);
        }
        for &c in &self.integer_coords {
            let b = self.bounds[c];
            let mut r = x[c].round();
            if r < b.lo {
                r = b.lo.ceil();
            }
            if r > b.hi {
                r = b.hi.floor();
            }
            x[c] = r;
        }
    }
}

pub(crate) fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

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
    fn evaluate_checks_dimension_and_bounds() {
        let p = bowl();
        assert!(matches!(p.evaluate(&[0.0], NoiseKey::default()), Err(BenchError::Contract(_))));
        assert!(matches!(p.evaluate(&[3.0, 0.0], NoiseKey::default()), Err(BenchError::Contract(_))));
        assert_eq!(p.evaluate(&[1.0, 1.0], NoiseKey::default()).unwrap(), 2.0);
    }

    #[test]
    fn unconstrained_is_feasible() {
        let r = bowl().is_feasible(&[1.9, -1.9]).unwrap();
        assert!(r.feasible);
        assert_eq!(r.violation, 0.0);
        assert!(bowl().is_feasible(&[1.0]).is_err());
    }

    #[test]
    fn mismatched_candidate_kind() {
        let p = bowl();
        let path = Path::new(0.0, 1.0, 0.0, 1.0, vec![0.5, 0.5]).unwrap();
        assert!(p.optimum_gap(Candidate::Path(&path)).is_err());
        let g = p.optimum_gap(Candidate::Point(&[0.3, 0.4])).unwrap();
        assert!((g.location_gap - 0.5).abs() < 1e-15);
        assert!((g.objective_gap - 0.25).abs() < 1e-15);
    }

    #[test]
    fn direction_normalization() {
        assert_eq!(Direction::Maximize.normalize(3.0), -3.0);
        assert_eq!(Direction::Minimize.normalize(3.0), 3.0);
    }

    #[test]
    fn union_and_intersection_semantics() {
        let left = ConstraintGroup::new("left", vec![Residual::new("x<=-1", |x| x[0] + 1.0)]);
        let right = ConstraintGroup::new("right", vec![Residual::new("x>=1", |x| 1.0 - x[0])]);
        let mk = |region| {
            Problem::builder("t", "t", vec![Interval::new(-3.0, 3.0)])
                .objective(|x, _| Ok(x[0]))
                .feasibility(region)
                .optimum(OptimumSpec::PointSet {
                    points: vec![vec![-3.0]],
                    value: -3.0,
                })
                .build_unchecked()
                .unwrap()
        };
        let u = mk(FeasibleRegion::union(vec![left.clone(), right.clone()]));
        let i = mk(FeasibleRegion::intersection(vec![left, right]));
        assert!(u.is_feasible(&[2.0]).unwrap().feasible);
        assert!(!u.is_feasible(&[0.0]).unwrap().feasible);
        assert!((u.is_feasible(&[0.0]).unwrap().violation - 1.0).abs() < 1e-15);
        assert!(!i.is_feasible(&[2.0]).unwrap().feasible);
    }

    #[test]
    fn snap_rounds_integer_coordinates() {
        let p = Problem::builder("t", "t", vec![Interval::new(0.0, 10.0), Interval::new(1.0, 10.0)])
            .objective(|x, _| Ok(x[0]))
            .integer_coords(vec![1])
            .optimum(OptimumSpec::PointSet {
                points: vec![vec![0.0, 1.0]],
                value: 0.0,
            })
            .build()
            .unwrap();
        let mut x = [11.0, 0.4];
        p.snap(&mut x);
        assert_eq!(x, [10.0, 1.0]);
        let mut y = [0.5, 4.6];
        p.snap(&mut y);
        assert_eq!(y, [0.5, 5.0]);
        assert!(p.evaluate(&[0.5, 4.5], NoiseKey::default()).is_err());
    }

    #[test]
    fn regions() {
        let b = Region::Box(vec![Interval::new(1.0, 2.0)]);
        assert!(b.contains(&[1.5]));
        assert!(!b.contains(&[1.0]));
        assert_eq!(b.distance(&[3.0]), 1.0);
        let ball = Region::Ball {
            center: vec![0.0, 0.0],
            radius: 1.0,
        };
        assert!(ball.contains(&[0.5, 0.5]));
        assert!((ball.distance(&[2.0, 0.0]) - 1.0).abs() < 1e-15);
    }
}
