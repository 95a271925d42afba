use num_complex::Complex64;

use super::symbol::SymbolSpec;
use crate::{Error, Field, GridSpec, Representation, Result};

/// Convolution kernel `K(x) = L^-2 sum_j m(j/L) e^{2 pi i x.j/L}` of the
/// multiplier on the torus of `grid`, as a physical field in `x`.
pub fn kernel_torus(spec: &SymbolSpec, grid: &GridSpec) -> Result<Field> {
    let symbol = spec.grid_symbol(grid)?;
    let values = symbol.mapv(|m| Complex64::new(m, 0.0));
    Ok(Field::from_values(*grid, Representation::Spectral, values)?.into_physical())
}

/// Periodic sup-coordinate distance from sample `(a, b)` to the origin.
pub fn sup_distance_to_origin(grid: &GridSpec, a: usize, b: usize) -> f64 {
    let d = |k: usize| {
        let x = grid.coord(k);
        x.min(grid.side() - x)
    };
    d(a).max(d(b))
}

/// `h^2 sum_{dist(x, 0) >= A} |K(x)|` for a kernel field.
pub fn tail_mass_of(kernel: &Field, a: f64) -> Result<f64> {
    let g = *kernel.grid();
    if !(a < g.side() / 2.0) {
        return Err(Error::InvalidParameter(format!(
            "tail radius {a} must be below half the side {}",
            g.side() / 2.0
        )));
    }
    let k = kernel.to_physical();
    let mut s = 0.0;
    for ((i, j), z) in k.values().indexed_iter() {
        if sup_distance_to_origin(&g, i, j) >= a {
            s += z.norm();
        }
    }
    Ok(s * g.spacing().powi(2))
}

pub fn kernel_tail_mass(spec: &SymbolSpec, grid: &GridSpec, a: f64) -> Result<f64> {
    tail_mass_of(&kernel_torus(spec, grid)?, a)
}

/// Least-squares slope of `log y` against `log x`.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}
