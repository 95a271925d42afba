//! Time series of Sobolev ratios and band masses along the truncated flow.

use nlslab_core::dynamics::{evolve, EquationSpec, IntegratorSpec};
use nlslab_core::multipliers::{apply_multiplier, SymbolSpec};
use nlslab_core::norms::{mass, sobolev_seminorm};
use nlslab_core::{Field, GridSpec};

use crate::datum::smooth_noise;
use crate::report::{num, Outcome, Status, Table};
use crate::{Config, Result};

pub const EXPONENTS: [f64; 4] = [0.0, 0.25, 0.5, 1.0];

#[derive(Clone, Debug, PartialEq)]
pub struct Params {
    pub side: f64,
    pub points: usize,
    pub d: u64,
    pub m: f64,
    pub alpha: f64,
    pub t_final: f64,
    pub dt: f64,
    pub stride: usize,
    pub datum_norm: f64,
    pub datum_width: f64,
    pub band: f64,
    pub envelope: f64,
    pub seed: u64,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            side: 8.0,
            points: 128,
            d: 1,
            m: 1.0,
            alpha: 1.0,
            t_final: 1.0,
            dt: 2e-3,
            stride: 25,
            datum_norm: 2.0,
            datum_width: 0.5,
            band: 0.5,
            envelope: 10.0,
            seed: 0,
        }
    }
}

impl Params {
    pub fn from_config(cfg: &Config, seed: u64) -> Result<Self> {
        let d = Self::default();
        Ok(Self {
            side: cfg.get("L", d.side)?,
            points: cfg.get("n", d.points)?,
            d: cfg.get("D", d.d)?,
            m: cfg.get("M", d.m)?,
            alpha: cfg.get("alpha", d.alpha)?,
            t_final: cfg.get("T", d.t_final)?,
            dt: cfg.get("dt", d.dt)?,
            stride: cfg.get("stride", d.stride)?,
            datum_norm: cfg.get("datum_norm", d.datum_norm)?,
            datum_width: cfg.get("datum_width", d.datum_width)?,
            band: cfg.get("band", d.band)?,
            envelope: cfg.get("envelope", d.envelope)?,
            seed,
        })
    }

    pub fn equation(&self) -> Result<EquationSpec> {
        let spec = SymbolSpec::md(self.d, self.m)?.on_torus(self.side);
        Ok(EquationSpec::truncated(spec)
            .with_alpha(self.alpha)
            .with_outer_cut(2.0 * self.d as f64 * self.m))
    }

    pub fn datum(&self) -> Result<Field> {
        let g = GridSpec::new(self.side, self.points)?;
        let cut = SymbolSpec::sharp(2.0 * self.d as f64 * self.m)?.on_torus(self.side);
        let f = smooth_noise(g, self.datum_width, 2.0 * self.d as f64 * self.m, self.datum_norm, self.seed);
        Ok(apply_multiplier(&f, &cut)?)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub t: f64,
    /// Ratios for [`EXPONENTS`].
    pub ratios: [f64; 4],
    pub high: f64,
    pub low: f64,
}

#[derive(Clone, Debug)]
pub struct PersistenceResult {
    pub params: Params,
    pub rows: Vec<Row>,
}

pub fn run(p: &Params) -> Result<PersistenceResult> {
    let u0 = p.datum()?;
    let traj = evolve(&u0, &p.equation()?, &IntegratorSpec::rk4(p.dt), p.t_final, p.stride)?;
    let low = SymbolSpec::lp_leq(p.band)?.on_torus(p.side);
    let base: Vec<f64> = EXPONENTS
        .iter()
        .map(|&s| sobolev_seminorm(&u0, s))
        .collect::<nlslab_core::Result<_>>()?;
    let mut rows = Vec::new();
    for (f, &t) in traj.snapshots().iter().zip(traj.times()) {
        let mut ratios = [0.0; 4];
        for (k, &s) in EXPONENTS.iter().enumerate() {
            ratios[k] = sobolev_seminorm(f, s)? / base[k];
        }
        let lo = apply_multiplier(f, &low)?;
        let hi = f.sub(&lo)?;
        rows.push(Row {
            t,
            ratios,
            high: mass(&hi).sqrt(),
            low: mass(&lo).sqrt(),
        });
    }
    Ok(PersistenceResult {
        params: p.clone(),
        rows,
    })
}

impl PersistenceResult {
    /// Largest ratio over `s > 0` and all times.
    pub fn max_ratio(&self) -> f64 {
        self.rows
            .iter()
            .flat_map(|r| r.ratios[1..].iter().copied())
            .fold(0.0, f64::max)
    }

    pub fn outcome(&self) -> Outcome {
        let mut t = Table::new(&["t", "ratio_s0", "ratio_s1_4", "ratio_s1_2", "ratio_s1", "mass_high", "mass_low"]);
        for r in &self.rows {
            let mut row = vec![num(r.t)];
            row.extend(r.ratios.iter().map(|&x| num(x)));
            row.push(num(r.high));
            row.push(num(r.low));
            t.push(row);
        }
        let mut o = Outcome::new("persistence", t);
        o.put("band_N", self.params.band);
        o.put("max_ratio", num(self.max_ratio()));
        o.put("envelope", num(self.params.envelope));
        if self.max_ratio() > self.params.envelope {
            o.flag(Status::Error);
            o.note("a Sobolev ratio left the configured envelope");
        }
        o
    }
}
