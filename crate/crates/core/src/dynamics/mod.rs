//! Time evolution for `i u_t + Delta u = alpha^4 Q P F(P u)` and its diagnostics.

mod equation;
mod integrator;
mod trajectory;

pub use equation::{linear_propagate, nonlinear_rhs, EquationSpec};
pub use integrator::{step, IntegratorSpec, Scheme, Stepper};
pub use trajectory::{conserved_report, evolve, strichartz_norms, StrichartzNorms, Trajectory};
pub(crate) use trajectory::trapezoid;
