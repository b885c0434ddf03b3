//! Hard optimization benchmarks with verified optima.
//!
//! The crate provides thirteen benchmark problems (noisy, kinked, isolated
//! feasible domains, manifold and flat-region optima, ODE parameter
//! estimation, an oscillatory integral, and two discretized variational
//! problems), reference derivative-free solvers, and a trial harness that
//! reports success with location metrics matched to the kind of optimum.

pub mod benchmarks;
pub mod error;
pub mod harness;
pub mod noise;
pub mod numerics;
pub mod problem;
pub mod solvers;

pub use error::{BenchError, Result};
pub use noise::{NoiseKey, NoisePolicy};
pub use problem::{
    Candidate, Direction, FeasibilityReport, GapReport, Interval, OptimumKind, OptimumSpec, Problem,
};
