//! Scaling, translation, Galilean and time-translation operators, the
//! orthogonality functional, and decoupling diagnostics.
//!
//! Scaling by a dyadic `N` maps a field on the torus of side `L` to the torus
//! of side `L/N` with the same sample array times `N`, which is exactly
//! unitary. Frequency shifts `xi` are angular (`e^{i x.xi}`).

use std::f64::consts::PI;

use ndarray::{Array2, Zip};
use num_complex::Complex64;

use crate::dynamics::{linear_propagate, trapezoid, Trajectory};
use crate::norms::mass;
use crate::{Error, Field, GridSpec, Representation, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymParams {
    pub n: f64,
    pub xi: [f64; 2],
    pub x0: [f64; 2],
    pub t0: f64,
}

impl Default for SymParams {
    fn default() -> Self {
        Self::identity()
    }
}

impl SymParams {
    pub fn identity() -> Self {
        Self {
            n: 1.0,
            xi: [0.0; 2],
            x0: [0.0; 2],
            t0: 0.0,
        }
    }

    pub fn new(n: f64, xi: [f64; 2], x0: [f64; 2], t0: f64) -> Self {
        Self { n, xi, x0, t0 }
    }

    /// Grid produced by scaling `grid` by `n`.
    pub fn output_grid(&self, grid: &GridSpec) -> Result<GridSpec> {
        let k = self.n.log2();
        if !(self.n > 0.0) || (k - k.round()).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("scale N = {} is not dyadic", self.n)));
        }
        GridSpec::new(grid.side() / self.n, grid.n())
    }

    fn lattice_index(v: f64, unit: f64, what: &str) -> Result<i64> {
        let r = v / unit;
        let k = r.round();
        if (r - k).abs() > 1e-9 * r.abs().max(1.0) {
            return Err(Error::InvalidParameter(format!("{what} = {v} is not a multiple of {unit}")));
        }
        Ok(k as i64)
    }

    /// Checks lattice compatibility and returns the output grid, the integer
    /// sample shift of `x0` and the mode shift of `xi`.
    fn resolve(&self, grid: &GridSpec) -> Result<(GridSpec, [i64; 2], [i64; 2])> {
        let out = self.output_grid(grid)?;
        let mut shift = [0; 2];
        let mut modes = [0; 2];
        for c in 0..2 {
            shift[c] = Self::lattice_index(self.x0[c], out.spacing(), "translation")?;
            modes[c] = Self::lattice_index(self.xi[c], 2.0 * PI / out.side(), "frequency shift")?;
        }
        Ok((out, shift, modes))
    }
}

/// `N e^{i x.xi} f(N (x - x0))`.
pub fn apply_g(f: &Field, p: &SymParams) -> Result<Field> {
    let (out, shift, _) = p.resolve(f.grid())?;
    let n = out.n() as i64;
    let src = f.to_physical();
    let sv = src.values();
    let values = Array2::from_shape_fn((out.n(), out.n()), |(a, b)| {
        let ia = (a as i64 - shift[0]).rem_euclid(n) as usize;
        let ib = (b as i64 - shift[1]).rem_euclid(n) as usize;
        let phase = out.coord(a) * p.xi[0] + out.coord(b) * p.xi[1];
        sv[[ia, ib]] * Complex64::from_polar(p.n, phase)
    });
    Field::from_values(out, Representation::Physical, values)
}

/// `g e^{i t0 Delta} f`.
#[allow(non_snake_case)]
pub fn apply_G(f: &Field, p: &SymParams) -> Result<Field> {
    apply_g(&linear_propagate(f, p.t0), p)
}

/// Inverse of [`apply_g`]; `f` lives on the scaled grid.
pub fn apply_g_inverse(h: &Field, p: &SymParams) -> Result<Field> {
    let base = GridSpec::new(h.grid().side() * p.n, h.grid().n())?;
    let (out, shift, _) = p.resolve(&base)?;
    out.ensure_same(h.grid())?;
    let n = out.n() as i64;
    let src = h.to_physical();
    let sv = src.values();
    let values = Array2::from_shape_fn((n as usize, n as usize), |(a, b)| {
        let ia = (a as i64 + shift[0]).rem_euclid(n) as usize;
        let ib = (b as i64 + shift[1]).rem_euclid(n) as usize;
        let phase = out.coord(ia) * p.xi[0] + out.coord(ib) * p.xi[1];
        sv[[ia, ib]] * Complex64::from_polar(1.0 / p.n, -phase)
    });
    Field::from_values(base, Representation::Physical, values)
}

#[allow(non_snake_case)]
pub fn apply_G_inverse(h: &Field, p: &SymParams) -> Result<Field> {
    Ok(linear_propagate(&apply_g_inverse(h, p)?, -p.t0))
}

/// Translation by an arbitrary vector, exact for trigonometric polynomials.
pub fn translate(f: &Field, a: [f64; 2]) -> Field {
    let repr = f.representation();
    let g = *f.grid();
    let mut s = f.to_spectral();
    for ((i, j), z) in s.values_mut().indexed_iter_mut() {
        let ph = -2.0 * PI * (g.frequency(i) * a[0] + g.frequency(j) * a[1]);
        *z *= Complex64::from_polar(1.0, ph);
    }
    s.into_repr(repr)
}

/// `N e^{i x.xi} e^{-it|xi|^2} v(t0 + t N^2, N(x - x0 - 2 xi t))` at each `t`.
#[allow(non_snake_case)]
pub fn apply_T(traj: &Trajectory, p: &SymParams, out_times: &[f64]) -> Result<Vec<Field>> {
    let (out, _, _) = p.resolve(traj.first().grid())?;
    let xi2 = p.xi[0] * p.xi[0] + p.xi[1] * p.xi[1];
    out_times
        .iter()
        .map(|&t| {
            let v = traj.sample_at(p.t0 + t * p.n * p.n)?;
            let scaled = Field::from_values(out, Representation::Physical, v.into_values().mapv(|z| z * p.n))?;
            let moved = translate(
                &scaled,
                [p.x0[0] + 2.0 * p.xi[0] * t, p.x0[1] + 2.0 * p.xi[1] * t],
            );
            let c = Complex64::from_polar(1.0, -t * xi2);
            Ok(moved.mul_fn(|x1, x2| c * Complex64::from_polar(1.0, x1 * p.xi[0] + x2 * p.xi[1])))
        })
        .collect()
}

/// `N_p/N_q + N_q/N_p + |xi_p - xi_q|^2/(N_p N_q) + N_p N_q |t_p/N_p^2 - t_q/N_q^2|
/// + N_p N_q |x_p - x_q - 2 (t_p/N_p^2)(xi_p - xi_q)|`.
pub fn orthogonality_gap(p: &SymParams, q: &SymParams) -> f64 {
    let nn = p.n * q.n;
    let dxi = [p.xi[0] - q.xi[0], p.xi[1] - q.xi[1]];
    let sp = p.t0 / (p.n * p.n);
    let sq = q.t0 / (q.n * q.n);
    let dx = [
        p.x0[0] - q.x0[0] - 2.0 * sp * dxi[0],
        p.x0[1] - q.x0[1] - 2.0 * sp * dxi[1],
    ];
    p.n / q.n
        + q.n / p.n
        + (dxi[0] * dxi[0] + dxi[1] * dxi[1]) / nn
        + nn * (sp - sq).abs()
        + nn * dx[0].hypot(dx[1])
}

/// `|| A B ||_{L^2_{t,x}}` by the trapezoid rule in time.
pub fn decoupling_l2(a: &Trajectory, b: &Trajectory) -> Result<f64> {
    if a.len() != b.len()
        || a
            .times()
            .iter()
            .zip(b.times())
            .any(|(x, y)| (x - y).abs() > 1e-12 * x.abs().max(1.0))
    {
        return Err(Error::GridMismatch("trajectories have different time samples".into()));
    }
    let mut vals = Vec::with_capacity(a.len());
    for (fa, fb) in a.snapshots().iter().zip(b.snapshots()) {
        fa.grid().ensure_same(fb.grid())?;
        let mut prod = fa.values().clone();
        Zip::from(&mut prod).and(fb.values()).for_each(|x, &y| *x *= y);
        vals.push(prod.iter().map(|z| z.norm_sqr()).sum::<f64>() * fa.grid().spacing().powi(2));
    }
    if a.len() == 1 {
        return Ok(vals[0].sqrt());
    }
    Ok(trapezoid(a.times(), &vals).sqrt())
}

/// `| || sum_j G_j phi_j ||^2 - sum_j ||phi_j||^2 |`.
pub fn mass_decoupling_defect(profiles: &[(Field, SymParams)]) -> Result<f64> {
    let mut total: Option<Field> = None;
    let mut separate = 0.0;
    for (phi, p) in profiles {
        separate += mass(phi);
        let g = apply_G(phi, p)?;
        total = Some(match total {
            None => g,
            Some(acc) => acc.add(&g)?,
        });
    }
    Ok(total.map_or(0.0, |t| (mass(&t) - separate).abs()))
}
