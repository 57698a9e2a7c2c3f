//! Quadrature, finite differences, root finding and the spectral Poincaré oracle.

mod diff;
mod gauss;
mod interval;
mod quadrature;
mod roots;
mod spectral;

pub use diff::{default_step, derivative_fd, gradient_fd, second_derivative_fd};
pub use gauss::GaussLegendre;
pub use interval::Interval;
pub use quadrature::{integrate, integrate_split, quad, Integral, QuadratureSpec};
pub use roots::{brent_root, golden_max, grid_max_refine};
pub use spectral::{neumann_gap, poincare_constant_1d_numeric, TRUNCATION_LEVEL};
