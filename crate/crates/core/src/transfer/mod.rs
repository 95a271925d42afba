//! Pigeonhole cutoffs, motion-of-mass tracking and the covering maps between
//! a small torus and a large box.

pub mod covering;
pub mod cutoff;

pub use covering::{boundary_mass, cover_ratio, pull_back, push_forward, small_grid, Placement};
pub use cutoff::{
    build_cutoffs, find_quiet_interval, mass_outside, CutoffFamily, CutoffParams, CutoffReport, QuietInterval,
};
