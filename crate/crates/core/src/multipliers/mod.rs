//! Radial bump, Littlewood-Paley and `m_D` multipliers, torus kernels and
//! operator-norm probes.

pub mod bump;
pub mod kernel;
pub mod probe;
pub mod symbol;

pub use bump::{phi_eval, smooth_step};
pub use kernel::{kernel_tail_mass, kernel_torus, log_log_slope, tail_mass_of};
pub use probe::{commutator_norm, estimate_norm, mismatch_norm, plane_torus_gap, OperatorProbe, PowerIteration};
pub use symbol::{
    apply_multiplier, hamiltonian_truncated, lipschitz_defect, md_eval, md_eval_radius, md_eval_telescoped,
    Domain, LipschitzDefect, SymbolFamily, SymbolSpec,
};
