//! Numerical kernels used by the benchmark objectives.

pub mod gauss;
pub mod ode;
pub mod path;
pub mod quadrature;

pub use ode::{analytic_step_response, rk4_step_response, OdeSamples, DEFAULT_STEP};
pub use path::{
    functional_gradient, path_energy, path_length, path_length_residual, Functional, Path,
};
pub use quadrature::{
    closed_form_integral, oscillatory_integral, sinc_laplace_integral, QuadratureResult,
};
