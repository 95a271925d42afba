//! Torus flow against the big-box flow transported through the pigeonhole cutoffs.
//!
//! For each rung `(M, L, n)`: cut the torus datum along two quiet lines, unwrap
//! `chi^0 u0` onto a box covering the torus `K x K` times, evolve both truncated
//! systems, and compare `z = P_{<=2DM} p_*(chi^2 u~)` with the torus solution.

use nlslab_core::dynamics::{evolve, EquationSpec, IntegratorSpec};
use nlslab_core::multipliers::{apply_multiplier, SymbolSpec};
use nlslab_core::norms::{inner_product, lebesgue_norm, mass};
use nlslab_core::transfer::{
    boundary_mass, build_cutoffs, find_quiet_interval, pull_back, push_forward, CutoffParams, Placement,
};
use nlslab_core::{Complex64, Field, GridSpec};

use crate::datum::{bump, normalized};
use crate::report::{num, Outcome, Status, Table};
use crate::{Config, ExpError, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rung {
    pub m: f64,
    pub side: f64,
    /// Torus grid points per side; the box has `K` times as many.
    pub points: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Profile {
    /// `u0^(xi) ~ e^{-|xi|^2 / N_d^2}`.
    Gaussian,
    /// `u0^(xi) ~ (1 + |xi/N_d|^2)^-2`.
    Algebraic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Params {
    pub d: u64,
    pub rungs: Vec<Rung>,
    pub cover: usize,
    pub t_final: f64,
    pub dt: f64,
    pub stride: usize,
    pub eps: f64,
    pub mass_cap: f64,
    pub datum_norm: f64,
    pub profile: Profile,
    /// Frequency scale `N_d` of the datum profile.
    pub datum_scale: f64,
    pub stretch: f64,
    /// The cut layout may occupy at most this fraction of `L` (`20 unit <= fraction L`).
    pub layout_fraction: f64,
    /// Width of the monitored box frame, as a fraction of `L`.
    pub margin_fraction: f64,
    /// Boundary mass must stay below `threshold * mass_cap^2`.
    pub boundary_threshold: f64,
    /// Support radius of the test functional as a fraction of `L`; its norm is `ell_norm`.
    pub ell_radius: f64,
    pub ell_norm: f64,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            d: 1,
            rungs: vec![
                Rung { m: 4.0, side: 2.5, points: 128 },
                Rung { m: 8.0, side: 3.0, points: 256 },
                Rung { m: 16.0, side: 3.5, points: 512 },
            ],
            cover: 2,
            t_final: 0.01,
            dt: 5e-5,
            stride: 10,
            eps: 0.5,
            mass_cap: 1.5,
            datum_norm: 1.5,
            profile: Profile::Gaussian,
            datum_scale: 2.0,
            stretch: 3.0,
            layout_fraction: 0.25,
            margin_fraction: 0.125,
            boundary_threshold: 1e-6,
            ell_radius: 0.2,
            ell_norm: 1.0,
        }
    }
}

impl Params {
    pub fn from_config(cfg: &Config, _seed: u64) -> Result<Self> {
        let d = Self::default();
        let ms: Vec<f64> = cfg.get_list("M", &d.rungs.iter().map(|r| r.m).collect::<Vec<_>>())?;
        let ls: Vec<f64> = cfg.get_list("L", &d.rungs.iter().map(|r| r.side).collect::<Vec<_>>())?;
        let ns: Vec<usize> = cfg.get_list("n", &d.rungs.iter().map(|r| r.points).collect::<Vec<_>>())?;
        if ms.len() != ls.len() || ms.len() != ns.len() || ms.is_empty() {
            return Err(ExpError::Config("M, L and n must be lists of equal nonzero length".into()));
        }
        let rungs = (0..ms.len())
            .map(|k| Rung {
                m: ms[k],
                side: ls[k],
                points: ns[k],
            })
            .collect();
        let p = Self {
            d: cfg.get("D", d.d)?,
            rungs,
            cover: cfg.get("K", d.cover)?,
            t_final: cfg.get("T", d.t_final)?,
            dt: cfg.get("dt", d.dt)?,
            stride: cfg.get("stride", d.stride)?,
            eps: cfg.get("eps", d.eps)?,
            mass_cap: cfg.get("mass_cap", d.mass_cap)?,
            datum_norm: cfg.get("datum_norm", d.datum_norm)?,
            profile: match cfg.get_string("profile", "gaussian").as_str() {
                "gaussian" => Profile::Gaussian,
                "algebraic" => Profile::Algebraic,
                other => return Err(ExpError::Config(format!("unknown profile '{other}'"))),
            },
            datum_scale: cfg.get("datum_scale", d.datum_scale)?,
            stretch: cfg.get("stretch", d.stretch)?,
            layout_fraction: cfg.get("layout_fraction", d.layout_fraction)?,
            margin_fraction: cfg.get("margin_fraction", d.margin_fraction)?,
            boundary_threshold: cfg.get("boundary_threshold", d.boundary_threshold)?,
            ell_radius: cfg.get("ell_radius", d.ell_radius)?,
            ell_norm: cfg.get("ell_norm", d.ell_norm)?,
        };
        if p.cover < 2 || !p.cover.is_power_of_two() {
            return Err(ExpError::Config("K must be a power of two >= 2".into()));
        }
        if !(p.ell_radius > 0.0 && p.ell_radius < 0.5) {
            return Err(ExpError::Config("ell_radius must lie in (0, 1/2)".into()));
        }
        Ok(p)
    }
}

/// Torus datum in `H_n`: the profile on `|xi| <= 2DM`, centered at the origin.
pub fn datum(grid: GridSpec, d: u64, m: f64, profile: Profile, scale: f64, norm: f64) -> Field {
    let cut = 2.0 * d as f64 * m;
    let f = Field::from_spectrum(grid, |a, b| {
        let q = (a * a + b * b) / (scale * scale);
        let v = match profile {
            Profile::Gaussian => (-q).exp(),
            Profile::Algebraic => (1.0 + q).powi(-2),
        };
        if q.sqrt() * scale <= cut {
            Complex64::new(v, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    normalized(&f, norm)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SnapshotRow {
    pub t: f64,
    /// `||z(t) - v(t)||_2`.
    pub state: f64,
    pub boundary: f64,
    pub pairing: f64,
    pub budget: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RungResult {
    pub rung: Rung,
    pub centers: [f64; 2],
    pub unit: f64,
    pub clamp: Option<f64>,
    pub strip_mass: [f64; 2],
    /// `sup_t ||z - v||_2`.
    pub linf_l2: f64,
    /// `||z - v||_{L^3_t L^6_x}`.
    pub l3_l6: f64,
    pub ell_term: f64,
    pub box_sup_l2: f64,
    pub max_boundary: f64,
    pub boundary_limit: f64,
    pub snapshots: Vec<SnapshotRow>,
}

impl RungResult {
    pub fn s_norm(&self) -> f64 {
        self.linf_l2 + self.l3_l6
    }

    pub fn boundary_ok(&self) -> bool {
        self.max_boundary <= self.boundary_limit
    }

    /// Every snapshot obeys `pairing <= ||l|| state + ||u~||_{L^inf L^2} ell_term`.
    pub fn budget_ok(&self) -> bool {
        self.snapshots
            .iter()
            .all(|s| s.pairing <= s.budget * (1.0 + 1e-10) + 1e-14)
    }
}

#[derive(Clone, Debug)]
pub struct TorusPlaneResult {
    pub params: Params,
    pub rungs: Vec<RungResult>,
}

pub fn run_rung(p: &Params, rung: &Rung) -> Result<RungResult> {
    let (l, m) = (rung.side, rung.m);
    let d = p.d as f64;
    let torus = GridSpec::new(l, rung.points)?;
    let big = GridSpec::new(p.cover as f64 * l, p.cover * rung.points)?;
    let u0 = datum(torus, p.d, m, p.profile, p.datum_scale, p.datum_norm);
    if p.datum_norm > p.mass_cap {
        return Err(ExpError::Precondition("datum norm exceeds the mass cap".into()));
    }

    let mut cp = CutoffParams::new(d, m, p.t_final, p.eps, p.mass_cap);
    cp.stretch = p.stretch;
    let fit = p.layout_fraction * l / (20.0 * cp.unit());
    if fit < 1.0 {
        cp.clamp = Some(fit);
    }
    let q1 = find_quiet_interval(&u0, 1, &cp)?;
    let q2 = find_quiet_interval(&u0, 2, &cp)?;
    let fam = build_cutoffs([q1.center, q2.center], &cp, l, &big)?;

    let symbol = SymbolSpec::md(p.d, m)?;
    let box_eq = EquationSpec::truncated(symbol);
    let torus_eq = EquationSpec::truncated(symbol.on_torus(l)).with_outer_cut(2.0 * d * m);
    let integ = IntegratorSpec::rk4(p.dt);
    let box_traj = evolve(&fam.unwrap(&u0, 0)?, &box_eq, &integ, p.t_final, p.stride)?;
    let torus_traj = evolve(&u0, &torus_eq, &integ, p.t_final, p.stride)?;

    let proj = SymbolSpec::sharp(2.0 * d * m)?.on_torus(l);
    let chi2 = &fam.levels[2];
    let wc = [l * p.cover as f64 / 2.0; 2];
    let ell = normalized(&bump(big, wc, p.ell_radius * l), p.ell_norm);
    let ell_norm = mass(&ell).sqrt();
    let ell_t = push_forward(&ell, l)?;
    let lifted = pull_back(&apply_multiplier(&ell_t, &proj)?, &big, &Placement::Tile)?;
    let ell_term = mass(&ell.sub(&lifted.mul_pointwise(chi2)?)?).sqrt();
    let box_sup_l2 = box_traj
        .snapshots()
        .iter()
        .map(|f| mass(f).sqrt())
        .fold(0.0, f64::max);

    let margin = p.margin_fraction * l;
    let mut snapshots = Vec::new();
    let mut l6 = Vec::new();
    for ((ub, v), &t) in box_traj
        .snapshots()
        .iter()
        .zip(torus_traj.snapshots())
        .zip(box_traj.times())
    {
        let z = apply_multiplier(&push_forward(&ub.mul_pointwise(chi2)?, l)?, &proj)?;
        let diff = z.sub(v)?;
        l6.push(lebesgue_norm(&diff, 6.0)?.powi(3));
        let state = mass(&diff).sqrt();
        let pairing = (inner_product(&ell_t, v)? - inner_product(&ell, ub)?).norm();
        snapshots.push(SnapshotRow {
            t,
            state,
            boundary: boundary_mass(ub, margin)?,
            pairing,
            budget: ell_norm * state + box_sup_l2 * ell_term,
        });
    }
    let times = box_traj.times();
    let l3_l6 = times
        .windows(2)
        .zip(l6.windows(2))
        .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] + v[1]))
        .sum::<f64>()
        .cbrt();
    Ok(RungResult {
        rung: *rung,
        centers: [q1.center, q2.center],
        unit: fam.unit,
        clamp: cp.clamp,
        strip_mass: [q1.strip_mass, q2.strip_mass],
        linf_l2: snapshots.iter().map(|s| s.state).fold(0.0, f64::max),
        l3_l6,
        ell_term,
        box_sup_l2,
        max_boundary: snapshots.iter().map(|s| s.boundary).fold(0.0, f64::max),
        boundary_limit: p.boundary_threshold * p.mass_cap * p.mass_cap,
        snapshots,
    })
}

pub fn run(p: &Params) -> Result<TorusPlaneResult> {
    let rungs = p.rungs.iter().map(|r| run_rung(p, r)).collect::<Result<Vec<_>>>()?;
    Ok(TorusPlaneResult {
        params: p.clone(),
        rungs,
    })
}

impl TorusPlaneResult {
    pub fn strictly_decreasing(&self) -> bool {
        self.rungs.windows(2).all(|w| w[1].linf_l2 < w[0].linf_l2)
    }

    pub fn outcome(&self) -> Outcome {
        let mut t = Table::new(&["M", "L", "n", "t", "state", "boundary_mass", "pairing", "pairing_budget"]);
        for r in &self.rungs {
            for s in &r.snapshots {
                t.push(vec![
                    num(r.rung.m),
                    num(r.rung.side),
                    r.rung.points.to_string(),
                    num(s.t),
                    num(s.state),
                    num(s.boundary),
                    num(s.pairing),
                    num(s.budget),
                ]);
            }
        }
        let mut o = Outcome::new("torusplane", t);
        o.put("D", self.params.d);
        o.put("K", self.params.cover);
        o.put("T", self.params.t_final);
        for r in &self.rungs {
            let tag = format!("M{}", r.rung.m);
            o.put(&format!("{tag}_L"), r.rung.side);
            o.put(&format!("{tag}_centers"), format!("{:.6}, {:.6}", r.centers[0], r.centers[1]));
            o.put(&format!("{tag}_unit"), num(r.unit));
            o.put(&format!("{tag}_clamp"), r.clamp.map(num).unwrap_or_else(|| "none".into()));
            o.put(&format!("{tag}_strip_mass"), format!("{}, {}", num(r.strip_mass[0]), num(r.strip_mass[1])));
            o.put(&format!("{tag}_linf_l2"), num(r.linf_l2));
            o.put(&format!("{tag}_l3_l6"), num(r.l3_l6));
            o.put(&format!("{tag}_s_norm"), num(r.s_norm()));
            o.put(&format!("{tag}_ell_term"), num(r.ell_term));
            o.put(&format!("{tag}_max_boundary_mass"), num(r.max_boundary));
            o.put(&format!("{tag}_pairing_budget_ok"), r.budget_ok());
            if r.clamp.is_some() {
                o.flag(Status::Clamped);
            }
            if !r.boundary_ok() {
                o.flag(Status::InvalidBoundaryMass);
                o.note(format!("rung M = {}: boundary mass above {}", r.rung.m, num(r.boundary_limit)));
            }
            if !r.budget_ok() {
                o.flag(Status::Error);
                o.note(format!("rung M = {}: pairing exceeds its Cauchy-Schwarz budget", r.rung.m));
            }
        }
        o.put("strictly_decreasing", self.strictly_decreasing());
        if self.rungs.iter().any(|r| r.clamp.is_some()) {
            o.note("cut layout clamped to fit the torus; pigeonhole guarantees are measured, not implied");
        }
        if !self.strictly_decreasing() {
            o.flag(Status::Error);
            o.note("L^inf L^2 discrepancy is not strictly decreasing along the ladder");
        }
        o
    }
}
