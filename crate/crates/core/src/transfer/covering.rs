use ndarray::Array2;
use num_complex::Complex64;

use crate::{Error, Field, GridSpec, Representation, Result};

/// Number of small periods per big side, checking that the grids share a spacing.
pub fn cover_ratio(big: &GridSpec, small_side: f64) -> Result<usize> {
    let r = big.side() / small_side;
    let k = r.round();
    if !(k >= 1.0) || (r - k).abs() > 1e-9 * r || big.n() % (k as usize) != 0 {
        return Err(Error::GridMismatch(format!(
            "big side {} is not a commensurate multiple of {small_side} at n = {}",
            big.side(),
            big.n()
        )));
    }
    Ok(k as usize)
}

pub fn small_grid(big: &GridSpec, small_side: f64) -> Result<GridSpec> {
    let k = cover_ratio(big, small_side)?;
    GridSpec::new(small_side, big.n() / k)
}

/// Sums a big-box field over lattice translates: `[p_* f](x) = sum_{y ~ x} f(y)`.
pub fn push_forward(f: &Field, small_side: f64) -> Result<Field> {
    let sg = small_grid(f.grid(), small_side)?;
    let ns = sg.n();
    let phys = f.to_physical();
    let mut out = Array2::<Complex64>::zeros((ns, ns));
    for ((a, b), z) in phys.values().indexed_iter() {
        out[[a % ns, b % ns]] += z;
    }
    Field::from_values(sg, Representation::Physical, out)
}

#[derive(Clone, Debug)]
pub enum Placement {
    /// Periodic extension over the whole box.
    Tile,
    /// Keep one fundamental domain: the `n_small x n_small` block of samples
    /// starting (cyclically) at this index pair.
    Domain([usize; 2]),
    /// Periodic extension multiplied by a weight on the big grid.
    Weight(Field),
}

/// `[p^* g](x) = g(x mod L_small)` restricted by `placement`.
pub fn pull_back(g: &Field, big: &GridSpec, placement: &Placement) -> Result<Field> {
    let k = cover_ratio(big, g.grid().side())?;
    if big.n() / k != g.grid().n() {
        return Err(Error::GridMismatch("spacings of the two grids differ".into()));
    }
    let ns = g.grid().n();
    let n = big.n();
    let gp = g.to_physical();
    let tiled = Array2::from_shape_fn((n, n), |(a, b)| gp.values()[[a % ns, b % ns]]);
    let mut out = Field::from_values(*big, Representation::Physical, tiled)?;
    match placement {
        Placement::Tile => {}
        Placement::Domain([o1, o2]) => {
            let inside = |a: usize, o: usize| (a + n - o % n) % n < ns;
            for ((a, b), z) in out.values_mut().indexed_iter_mut() {
                if !(inside(a, *o1) && inside(b, *o2)) {
                    *z = Complex64::new(0.0, 0.0);
                }
            }
        }
        Placement::Weight(w) => out = out.mul_pointwise(w)?,
    }
    Ok(out)
}

/// `||f||_2^2` restricted to samples with a coordinate in `[0, margin)` or
/// `[side - margin, side)`.
pub fn boundary_mass(f: &Field, margin: f64) -> Result<f64> {
    let g = *f.grid();
    if !(margin >= 0.0 && margin < g.side() / 2.0) {
        return Err(Error::InvalidParameter(format!(
            "margin {margin} must lie in [0, side/2)"
        )));
    }
    let cells = margin / g.spacing();
    let n = g.n() as f64;
    let near = |k: usize| {
        let k = k as f64;
        k < cells - 1e-9 || k >= n - cells - 1e-9
    };
    let p = f.to_physical();
    let s: f64 = p
        .values()
        .indexed_iter()
        .filter(|((a, b), _)| near(*a) || near(*b))
        .map(|(_, z)| z.norm_sqr())
        .sum();
    Ok(s * g.spacing().powi(2))
}
