//! Pseudospectral laboratory for the 2D cubic Schrodinger equation and its
//! frequency-truncated Hamiltonian approximations on square tori.
//!
//! Conventions: samples sit at `x = k h`, `h = L / n`; Fourier coefficients
//! are `f^(j) = h^2 sum_x f(x) e^{-2 pi i x.j/L}` indexed by `j/L`; the
//! Laplacian has symbol `-4 pi^2 |xi|^2`.

pub mod dynamics;
mod error;
mod fft;
mod field;
mod grid;
pub mod multipliers;
pub mod norms;
mod series;
pub mod snapshot;
pub mod symmetries;
pub mod transfer;

pub use error::{Error, Result};
pub use field::{Field, Representation};
pub use grid::GridSpec;
pub use series::DiagnosticSeries;

pub use num_complex::Complex64;
