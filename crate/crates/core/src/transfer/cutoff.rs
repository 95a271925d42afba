use std::f64::consts::PI;
use std::path::Path;

use ndarray::Array2;
use num_complex::Complex64;

use super::covering::{cover_ratio, push_forward, small_grid};
use crate::dynamics::Trajectory;
use crate::multipliers::smooth_step;
use crate::norms::mass;
use crate::snapshot::{save_field, write_manifest};
use crate::{DiagnosticSeries, Error, Field, GridSpec, Representation, Result};

/// Geometry of the pigeonhole cutoffs.
///
/// The layout unit is `stretch * D M T / eta` with `eta = eps^2`. A smooth
/// step across one unit has slope up to `2 / unit`, so `stretch >= 2 sqrt 2`
/// keeps the gradient of the tensor-product cutoffs below `eta / (D M T)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CutoffParams {
    pub d: f64,
    pub m: f64,
    pub t: f64,
    pub eps: f64,
    /// Upper bound on `||u0||_2`.
    pub mass_cap: f64,
    pub stretch: f64,
    /// When set, the unit is multiplied by this factor and the geometric
    /// guarantees become measured quantities.
    pub clamp: Option<f64>,
}

impl CutoffParams {
    pub fn new(d: f64, m: f64, t: f64, eps: f64, mass_cap: f64) -> Self {
        Self {
            d,
            m,
            t,
            eps,
            mass_cap,
            stretch: 3.0,
            clamp: None,
        }
    }

    pub fn eta(&self) -> f64 {
        self.eps * self.eps
    }

    /// `D M T / eta`.
    pub fn nominal_unit(&self) -> f64 {
        self.d * self.m * self.t / self.eta()
    }

    pub fn unit(&self) -> f64 {
        self.nominal_unit() * self.stretch * self.clamp.unwrap_or(1.0)
    }

    /// `eta / (D M T)`.
    pub fn gradient_bound(&self) -> f64 {
        1.0 / self.nominal_unit()
    }

    /// `16 M^2 / eta`.
    pub fn required_count(&self) -> f64 {
        16.0 * self.mass_cap * self.mass_cap / self.eta()
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [("D", self.d), ("M", self.m), ("T", self.t), ("eps", self.eps), ("stretch", self.stretch)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} = {v} must be positive")));
            }
        }
        if let Some(c) = self.clamp {
            if !(c > 0.0 && c <= 1.0) {
                return Err(Error::InvalidParameter(format!("clamp factor {c} must lie in (0, 1]")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuietInterval {
    pub center: f64,
    pub strip_mass: f64,
    pub half_width: f64,
    /// Number of disjoint subintervals that fit in `[L/4, L/2]`.
    pub count: usize,
    pub required_count: f64,
    pub clamped: bool,
}

impl QuietInterval {
    /// True when the pigeonhole argument guarantees `strip_mass <= eps/4`.
    pub fn guaranteed(&self) -> bool {
        !self.clamped && self.count as f64 >= self.required_count
    }
}

/// Squared mass of each grid line orthogonal to `axis`.
fn strip_profile(u0: &Field, axis: usize) -> Vec<f64> {
    let p = u0.to_physical();
    let h2 = u0.grid().spacing().powi(2);
    let n = u0.grid().n();
    (0..n)
        .map(|k| {
            let line = if axis == 1 {
                p.values().row(k).iter().map(|z| z.norm_sqr()).sum::<f64>()
            } else {
                p.values().column(k).iter().map(|z| z.norm_sqr()).sum::<f64>()
            };
            line * h2
        })
        .collect()
}

/// Center of the subinterval of `[L/4, L/2]` (axis 1 or 2) carrying the least
/// mass of `u0`, among grid-aligned centers.
pub fn find_quiet_interval(u0: &Field, axis: usize, params: &CutoffParams) -> Result<QuietInterval> {
    params.validate()?;
    if axis != 1 && axis != 2 {
        return Err(Error::InvalidParameter(format!("axis {axis} must be 1 or 2")));
    }
    let g = *u0.grid();
    let h = g.spacing();
    let w = 10.0 * params.unit();
    let count = ((g.side() / 4.0) / (2.0 * w) + 1e-9).floor() as usize;
    let required = params.required_count();
    let clamped = params.clamp.is_some();
    if !clamped && (count as f64) < required {
        return Err(Error::Geometry(format!(
            "[L/4, L/2] holds {count} subintervals of length {} but {required} are needed",
            2.0 * w
        )));
    }
    let lo = ((g.side() / 4.0 + w) / h - 1e-9).ceil() as usize;
    let hi = ((g.side() / 2.0 - w) / h + 1e-9).floor() as usize;
    if lo > hi {
        return Err(Error::Geometry(format!(
            "no subinterval of half width {w} fits in [L/4, L/2] of side {}",
            g.side()
        )));
    }
    let profile = strip_profile(u0, axis);
    let n = g.n();
    let mut best: Option<(usize, f64)> = None;
    for c in lo..=hi {
        let k0 = ((c as f64 * h - w) / h - 1e-9).ceil() as i64;
        let k1 = ((c as f64 * h + w) / h - 1e-9).ceil() as i64 - 1;
        let s: f64 = (k0..=k1).map(|k| profile[k.rem_euclid(n as i64) as usize]).sum();
        if best.is_none_or(|(_, b)| s < b) {
            best = Some((c, s));
        }
    }
    let (c, s) = best.expect("range is nonempty");
    Ok(QuietInterval {
        center: c as f64 * h,
        strip_mass: s.sqrt(),
        half_width: w,
        count,
        required_count: required,
        clamped,
    })
}

/// The five nested cutoffs on a big box that covers the torus `k x k` times.
#[derive(Clone, Debug)]
pub struct CutoffFamily {
    pub centers: [f64; 2],
    pub params: CutoffParams,
    pub unit: f64,
    pub small_side: f64,
    /// Big-box coordinates where the unwrapped fundamental domain starts.
    pub window_start: [f64; 2],
    pub grid: GridSpec,
    pub levels: Vec<Field>,
}

/// Level-`j` profile along one axis of the window `[s, s + L]`.
fn profile_1d(grid: &GridSpec, start: f64, small: f64, unit: f64, j: usize) -> Vec<f64> {
    let off = (9.0 - 2.0 * j as f64) * unit;
    (0..grid.n())
        .map(|k| {
            let y = (grid.coord(k) - start).rem_euclid(grid.side());
            if y > small {
                return 0.0;
            }
            smooth_step((y - off) / unit) * smooth_step((small - off - y) / unit)
        })
        .collect()
}

/// Builds `chi^0 .. chi^4` cut at `c1` (axis 1) and `c2` (axis 2).
pub fn build_cutoffs(
    centers: [f64; 2],
    params: &CutoffParams,
    small_side: f64,
    big: &GridSpec,
) -> Result<CutoffFamily> {
    params.validate()?;
    let k = cover_ratio(big, small_side)?;
    let unit = params.unit();
    if !(small_side > 20.0 * unit) {
        return Err(Error::Geometry(format!(
            "torus side {small_side} cannot hold the cut layout of width {}",
            20.0 * unit
        )));
    }
    let h = big.spacing();
    let lift = ((k - 1) / 2) as f64 * small_side;
    let mut window_start = [0.0; 2];
    for c in 0..2 {
        let r = centers[c] / h;
        if (r - r.round()).abs() > 1e-9 * r.abs().max(1.0) {
            return Err(Error::Geometry(format!("center {} is not on the grid", centers[c])));
        }
        window_start[c] = centers[c].rem_euclid(small_side) + lift;
        if k > 1 && window_start[c] + small_side > big.side() + 1e-9 * big.side() {
            return Err(Error::Geometry("unwrapped domain leaves the big box".into()));
        }
    }
    let n = big.n();
    let levels = (0..5)
        .map(|j| {
            let p1 = profile_1d(big, window_start[0], small_side, unit, j);
            let p2 = profile_1d(big, window_start[1], small_side, unit, j);
            let v = Array2::from_shape_fn((n, n), |(a, b)| Complex64::new(p1[a] * p2[b], 0.0));
            Field::from_values(*big, Representation::Physical, v)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CutoffFamily {
        centers,
        params: *params,
        unit,
        small_side,
        window_start,
        grid: *big,
        levels,
    })
}

/// Measured values of the nested-cutoff properties.
#[derive(Clone, Debug)]
pub struct CutoffReport {
    pub gradient_max: [f64; 5],
    pub gradient_bound: f64,
    /// `max |chi^i chi^j - chi^i|` over `i < j`.
    pub product_defect: f64,
    /// `min dist(supp chi^i, supp(1 - chi^j))` over `i < j`.
    pub min_distance: f64,
    pub distance_bound: f64,
    /// `||(1 - chi^j) u0||_2` on the torus, when a datum was supplied.
    pub outside_norm: Option<[f64; 5]>,
}

fn spectral_gradient_max(f: &Field) -> f64 {
    let g = *f.grid();
    let s = f.to_spectral();
    let deriv = |axis: usize| {
        let mut d = s.clone();
        for ((a, b), z) in d.values_mut().indexed_iter_mut() {
            let xi = if axis == 0 { g.frequency(a) } else { g.frequency(b) };
            let keep = a != 0 && b != 0;
            *z *= if keep { Complex64::new(0.0, 2.0 * PI * xi) } else { Complex64::new(0.0, 0.0) };
        }
        d.into_physical()
    };
    let d1 = deriv(0);
    let d2 = deriv(1);
    d1.values()
        .iter()
        .zip(d2.values().iter())
        .map(|(x, y)| (x.norm_sqr() + y.norm_sqr()).sqrt())
        .fold(0.0, f64::max)
}

fn axis_profile(f: &Field, axis: usize) -> Vec<f64> {
    let n = f.grid().n();
    // Tensor products: the maximum over the other axis recovers the factor.
    (0..n)
        .map(|k| {
            if axis == 0 {
                f.values().row(k).iter().map(|z| z.re).fold(0.0, f64::max)
            } else {
                f.values().column(k).iter().map(|z| z.re).fold(0.0, f64::max)
            }
        })
        .collect()
}

fn set_distance_1d(a: &[bool], b: &[bool], h: f64) -> f64 {
    let n = a.len();
    let ia: Vec<usize> = (0..n).filter(|&k| a[k]).collect();
    let ib: Vec<usize> = (0..n).filter(|&k| b[k]).collect();
    let mut best = f64::INFINITY;
    for &x in &ia {
        for &y in &ib {
            let d = (x + n - y) % n;
            best = best.min(d.min(n - d) as f64);
        }
    }
    best * h
}

impl CutoffFamily {
    pub fn eta(&self) -> f64 {
        self.params.eta()
    }

    pub fn clamped(&self) -> bool {
        self.params.clamp.is_some()
    }

    /// The level-`j` cutoff folded onto the torus.
    pub fn on_torus(&self, j: usize) -> Result<Field> {
        push_forward(&self.levels[j], self.small_side)
    }

    pub fn verify(&self, u0: Option<&Field>) -> Result<CutoffReport> {
        let mut gradient_max = [0.0; 5];
        for (j, chi) in self.levels.iter().enumerate() {
            gradient_max[j] = spectral_gradient_max(chi);
        }
        let mut product_defect: f64 = 0.0;
        let mut min_distance = f64::INFINITY;
        let h = self.grid.spacing();
        for i in 0..5 {
            for j in (i + 1)..5 {
                for (x, y) in self.levels[i].values().iter().zip(self.levels[j].values().iter()) {
                    product_defect = product_defect.max((x * y - x).norm());
                }
                for axis in 0..2 {
                    let pi = axis_profile(&self.levels[i], axis);
                    let pj = axis_profile(&self.levels[j], axis);
                    let supp: Vec<bool> = pi.iter().map(|&v| v > 0.0).collect();
                    let off: Vec<bool> = pj.iter().map(|&v| v < 1.0).collect();
                    min_distance = min_distance.min(set_distance_1d(&supp, &off, h));
                }
            }
        }
        let outside_norm = match u0 {
            None => None,
            Some(u) => {
                let mut out = [0.0; 5];
                for (j, o) in out.iter_mut().enumerate() {
                    let chi = self.on_torus(j)?;
                    let one = Field::from_fn(*chi.grid(), |_, _| Complex64::new(1.0, 0.0));
                    *o = mass(&one.sub(&chi)?.mul_pointwise(u)?).sqrt();
                }
                Some(out)
            }
        };
        Ok(CutoffReport {
            gradient_max,
            gradient_bound: self.params.gradient_bound(),
            product_defect,
            min_distance,
            distance_bound: self.params.nominal_unit(),
            outside_norm,
        })
    }

    /// Unwraps a torus field onto the big box and multiplies by `chi^j`.
    pub fn unwrap(&self, u0: &Field, j: usize) -> Result<Field> {
        let sg = small_grid(&self.grid, self.small_side)?;
        sg.ensure_same(u0.grid())?;
        super::covering::pull_back(u0, &self.grid, &super::covering::Placement::Weight(self.levels[j].clone()))
    }

    pub fn save(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir)?;
        let p = &self.params;
        let pairs: Vec<(String, String)> = [
            ("c1", self.centers[0]),
            ("c2", self.centers[1]),
            ("D", p.d),
            ("M", p.m),
            ("T", p.t),
            ("eps", p.eps),
            ("eta", p.eta()),
            ("mass_cap", p.mass_cap),
            ("stretch", p.stretch),
            ("clamp", p.clamp.unwrap_or(1.0)),
            ("unit", self.unit),
            ("small_side", self.small_side),
            ("window_start_1", self.window_start[0]),
            ("window_start_2", self.window_start[1]),
            ("side", self.grid.side()),
            ("n", self.grid.n() as f64),
        ]
        .iter()
        .map(|(k, v)| (k.to_string(), format!("{v:.17e}")))
        .collect();
        write_manifest(dir.join("manifest.txt"), &pairs)?;
        for (j, chi) in self.levels.iter().enumerate() {
            save_field(dir.join(format!("chi_{j}.nlsf")), chi)?;
        }
        Ok(())
    }
}

/// `M(t) = int |1 - chi|^2 |u(t)|^2` over the snapshots.
pub fn mass_outside(traj: &Trajectory, chi: &Field) -> Result<DiagnosticSeries> {
    let g = *traj.first().grid();
    g.ensure_same(chi.grid())?;
    let c = chi.to_physical();
    let w: Vec<f64> = c.values().iter().map(|z| (1.0 - z).norm_sqr()).collect();
    let h2 = g.spacing().powi(2);
    let vals = traj
        .snapshots()
        .iter()
        .map(|s| s.values().iter().zip(&w).map(|(z, k)| z.norm_sqr() * k).sum::<f64>() * h2)
        .collect();
    DiagnosticSeries::from_parts("mass outside", traj.times().to_vec(), vals)
}
