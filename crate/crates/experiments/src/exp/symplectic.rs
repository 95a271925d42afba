//! Preservation of `omega = -Im <., .>` by the time-`T` implicit-midpoint flow,
//! with the differential taken by central finite differences.

use nlslab_core::dynamics::{evolve, EquationSpec, IntegratorSpec};
use nlslab_core::multipliers::SymbolSpec;
use nlslab_core::norms::{mass, symplectic_form};
use nlslab_core::{Complex64, Field, GridSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::datum::band_noise;
use crate::report::{num, Outcome, Status, Table};
use crate::{Config, ExpError, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Params {
    pub side: f64,
    pub points: usize,
    pub d: u64,
    pub m: f64,
    pub alpha: f64,
    pub t_final: f64,
    pub dt: f64,
    pub eps: f64,
    pub pairs: usize,
    pub base_norm: f64,
    pub tolerance: f64,
    /// One-sided difference quotients may disagree by `10 * fd_tolerance` (relative).
    pub fd_tolerance: f64,
    pub seed: u64,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            side: 4.0,
            points: 64,
            d: 1,
            m: 1.0,
            alpha: 1.0,
            t_final: 0.5,
            dt: 1e-3,
            eps: 1e-5,
            pairs: 4,
            base_norm: 2.0,
            tolerance: 1e-4,
            fd_tolerance: 1e-3,
            seed: 0,
        }
    }
}

impl Params {
    pub fn from_config(cfg: &Config, seed: u64) -> Result<Self> {
        let d = Self::default();
        let p = Self {
            side: cfg.get("L", d.side)?,
            points: cfg.get("n", d.points)?,
            d: cfg.get("D", d.d)?,
            m: cfg.get("M", d.m)?,
            alpha: cfg.get("alpha", d.alpha)?,
            t_final: cfg.get("T", d.t_final)?,
            dt: cfg.get("dt", d.dt)?,
            eps: cfg.get("fd_eps", d.eps)?,
            pairs: cfg.get("pairs", d.pairs)?,
            base_norm: cfg.get("base_norm", d.base_norm)?,
            tolerance: cfg.get("tolerance", d.tolerance)?,
            fd_tolerance: cfg.get("fd_tolerance", d.fd_tolerance)?,
            seed,
        };
        if !(p.eps > 0.0) || p.pairs == 0 {
            return Err(ExpError::Config("need fd_eps > 0 and pairs >= 1".into()));
        }
        Ok(p)
    }

    pub fn grid(&self) -> Result<GridSpec> {
        Ok(GridSpec::new(self.side, self.points)?)
    }

    pub fn cut(&self) -> f64 {
        2.0 * self.d as f64 * self.m
    }

    pub fn equation(&self) -> Result<EquationSpec> {
        let spec = SymbolSpec::md(self.d, self.m)?.on_torus(self.side);
        Ok(EquationSpec::truncated(spec)
            .with_alpha(self.alpha)
            .with_outer_cut(self.cut()))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairRow {
    pub omega_before: f64,
    pub omega_after: f64,
    pub defect: f64,
    /// Largest relative gap between the two one-sided difference quotients.
    pub fd_gap: f64,
}

#[derive(Clone, Debug)]
pub struct SymplecticResult {
    pub params: Params,
    pub rows: Vec<PairRow>,
}

struct Flow {
    eq: EquationSpec,
    integ: IntegratorSpec,
    t: f64,
}

impl Flow {
    fn apply(&self, f: &Field) -> Result<Field> {
        let steps = (self.t / self.integ.dt).ceil().max(1.0) as usize;
        Ok(evolve(f, &self.eq, &self.integ, self.t, steps)?.last().clone())
    }

    /// Central difference `D Phi(u) v` and the relative gap of the one-sided ones.
    fn differential(&self, u: &Field, phi_u: &Field, v: &Field, eps: f64) -> Result<(Field, f64)> {
        let e = Complex64::new(eps, 0.0);
        let plus = self.apply(&u.combine(Complex64::new(1.0, 0.0), v, e)?)?;
        let minus = self.apply(&u.combine(Complex64::new(1.0, 0.0), v, -e)?)?;
        let central = plus.sub(&minus)?.scaled(Complex64::new(0.5 / eps, 0.0));
        let fwd = plus.sub(phi_u)?;
        let bwd = phi_u.sub(&minus)?;
        let scale = mass(&central).sqrt() * eps;
        let gap = if scale > 0.0 {
            mass(&fwd.sub(&bwd)?).sqrt() / scale
        } else {
            0.0
        };
        Ok((central, gap))
    }
}

pub fn run(p: &Params) -> Result<SymplecticResult> {
    let g = p.grid()?;
    let eq = p.equation()?;
    eq.validate(&g)?;
    let flow = Flow {
        eq,
        integ: IntegratorSpec::midpoint(p.dt),
        t: p.t_final,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let seeds: Vec<[u64; 3]> = (0..p.pairs).map(|_| [rng.random(), rng.random(), rng.random()]).collect();
    let cut = p.cut();
    let rows = seeds
        .par_iter()
        .map(|s| -> Result<PairRow> {
            let u = band_noise(g, 0.0, cut, p.base_norm, s[0]);
            let v = band_noise(g, 0.0, cut, 1.0, s[1]);
            let w = band_noise(g, 0.0, cut, 1.0, s[2]);
            let (dv, dw, gv, gw) = if p.t_final == 0.0 {
                (v.clone(), w.clone(), 0.0, 0.0)
            } else {
                let phi_u = flow.apply(&u)?;
                let (dv, gv) = flow.differential(&u, &phi_u, &v, p.eps)?;
                let (dw, gw) = flow.differential(&u, &phi_u, &w, p.eps)?;
                (dv, dw, gv, gw)
            };
            let before = symplectic_form(&v, &w)?;
            let after = symplectic_form(&dv, &dw)?;
            Ok(PairRow {
                omega_before: before,
                omega_after: after,
                defect: (after - before).abs() / (mass(&v) * mass(&w)).sqrt(),
                fd_gap: gv.max(gw),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SymplecticResult {
        params: p.clone(),
        rows,
    })
}

impl SymplecticResult {
    pub fn max_defect(&self) -> f64 {
        self.rows.iter().map(|r| r.defect).fold(0.0, f64::max)
    }

    pub fn fd_breakdown(&self) -> bool {
        self.rows.iter().any(|r| r.fd_gap > 10.0 * self.params.fd_tolerance)
    }

    pub fn outcome(&self) -> Outcome {
        let mut t = Table::new(&["pair", "omega_before", "omega_after", "defect", "fd_gap"]);
        for (k, r) in self.rows.iter().enumerate() {
            t.push(vec![
                k.to_string(),
                num(r.omega_before),
                num(r.omega_after),
                num(r.defect),
                num(r.fd_gap),
            ]);
        }
        let mut o = Outcome::new("symplectic", t);
        o.put("equation", self.params.equation().map(|e| e.describe()).unwrap_or_default());
        o.put("T", self.params.t_final);
        o.put("fd_eps", num(self.params.eps));
        o.put("max_defect", num(self.max_defect()));
        o.put("tolerance", num(self.params.tolerance));
        if self.fd_breakdown() {
            o.flag(Status::Error);
            o.note("finite-difference breakdown: one-sided quotients disagree");
        }
        if self.max_defect() > self.params.tolerance {
            o.flag(Status::Error);
            o.note("symplectic defect exceeds tolerance");
        }
        o
    }
}
