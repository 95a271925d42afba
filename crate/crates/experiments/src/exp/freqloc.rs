//! Truncated NLS against NLS with the frozen coupling `alpha = m_D(N0 eta0)`
//! from a datum with spectrum in the band `[N0, N1]`.

use nlslab_core::dynamics::{evolve, EquationSpec, IntegratorSpec};
use nlslab_core::multipliers::{md_eval_radius, SymbolSpec};
use nlslab_core::norms::mass;
use nlslab_core::{Complex64, Field, GridSpec, Representation};
use rayon::prelude::*;

use crate::datum::{band_noise, l2_dist, normalized};
use crate::report::{num, Outcome, Status, Table};
use crate::{Config, ExpError, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Datum {
    /// Seeded noise on the lattice points with `N0 <= |xi| <= N1`.
    Band,
    /// A single Fourier mode `e^{2 pi i j.x/L}`.
    Mode([i64; 2]),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Params {
    pub side: f64,
    pub points: usize,
    pub ds: Vec<u64>,
    pub n0: f64,
    pub n1: f64,
    pub eta0: f64,
    pub datum: Datum,
    pub datum_norm: f64,
    pub t_final: f64,
    pub dt: f64,
    pub stride: usize,
    pub seed: u64,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            side: 0.45,
            points: 256,
            ds: vec![4, 16, 64],
            n0: 2.0,
            n1: 4.0,
            eta0: 0.5,
            datum: Datum::Band,
            datum_norm: 0.25,
            t_final: 0.5,
            dt: 1e-3,
            stride: 10,
            seed: 0,
        }
    }
}

impl Params {
    pub fn from_config(cfg: &Config, seed: u64) -> Result<Self> {
        let d = Self::default();
        let datum = match cfg.get_string("datum", "band").as_str() {
            "band" => Datum::Band,
            "mode" => {
                let j: Vec<i64> = cfg.get_list("mode", &[1, 0])?;
                if j.len() != 2 {
                    return Err(ExpError::Config("mode needs two integers".into()));
                }
                Datum::Mode([j[0], j[1]])
            }
            other => return Err(ExpError::Config(format!("unknown datum '{other}'"))),
        };
        let p = Self {
            side: cfg.get("L", d.side)?,
            points: cfg.get("n", d.points)?,
            ds: cfg.get_list("D", &d.ds)?,
            n0: cfg.get("N0", d.n0)?,
            n1: cfg.get("N1", d.n1)?,
            eta0: cfg.get("eta0", d.eta0)?,
            datum,
            datum_norm: cfg.get("datum_norm", d.datum_norm)?,
            t_final: cfg.get("T", d.t_final)?,
            dt: cfg.get("dt", d.dt)?,
            stride: cfg.get("stride", d.stride)?,
            seed,
        };
        if !(p.n1 >= p.n0 && p.n0 > 0.0) || p.ds.is_empty() {
            return Err(ExpError::Config("need 0 < N0 <= N1 and at least one D".into()));
        }
        Ok(p)
    }

    pub fn datum_field(&self) -> Result<Field> {
        let g = GridSpec::new(self.side, self.points)?;
        let f = match self.datum {
            Datum::Band => band_noise(g, self.n0, self.n1, self.datum_norm, self.seed),
            Datum::Mode(j) => {
                let (a, b) = match (g.index_of_mode(j[0]), g.index_of_mode(j[1])) {
                    (Some(a), Some(b)) => (a, b),
                    _ => return Err(ExpError::Config(format!("mode {j:?} is not on the grid"))),
                };
                let mut f = Field::zeros(g, Representation::Spectral);
                f.values_mut()[[a, b]] = Complex64::new(1.0, 0.0);
                normalized(&f, self.datum_norm)
            }
        };
        if mass(&f) == 0.0 {
            return Err(ExpError::Precondition("no lattice frequency in the datum band".into()));
        }
        Ok(f)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub d: u64,
    pub alpha: f64,
    /// `sup_t ||u(t) - v(t)||_2 / ||u0||_2`.
    pub discrepancy: f64,
}

#[derive(Clone, Debug)]
pub struct FreqlocResult {
    pub params: Params,
    pub rows: Vec<Row>,
}

pub fn run(p: &Params) -> Result<FreqlocResult> {
    let u0 = p.datum_field()?;
    let norm0 = mass(&u0).sqrt();
    let integ = IntegratorSpec::rk4(p.dt);
    let rows = p
        .ds
        .par_iter()
        .map(|&d| -> Result<Row> {
            let alpha = md_eval_radius(d, p.n0 * p.eta0)?;
            let truncated = EquationSpec::truncated(SymbolSpec::md(d, 1.0)?.on_torus(p.side));
            let u = evolve(&u0, &truncated, &integ, p.t_final, p.stride)?;
            let v = evolve(&u0, &EquationSpec::nls_alpha(alpha), &integ, p.t_final, p.stride)?;
            let mut worst: f64 = 0.0;
            for (a, b) in u.snapshots().iter().zip(v.snapshots()) {
                worst = worst.max(l2_dist(a, b)?);
            }
            Ok(Row {
                d,
                alpha,
                discrepancy: worst / norm0,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FreqlocResult {
        params: p.clone(),
        rows,
    })
}

impl FreqlocResult {
    pub fn non_increasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].discrepancy <= w[0].discrepancy)
    }

    pub fn outcome(&self) -> Outcome {
        let mut t = Table::new(&["D", "alpha", "discrepancy"]);
        for r in &self.rows {
            t.push(vec![r.d.to_string(), num(r.alpha), num(r.discrepancy)]);
        }
        let mut o = Outcome::new("freqloc", t);
        let p = &self.params;
        o.put("band", format!("[{}, {}]", p.n0, p.n1));
        o.put("eta0", p.eta0);
        for r in &self.rows {
            o.put(&format!("alpha_D{}", r.d), num(r.alpha));
        }
        o.put("non_increasing", self.non_increasing());
        if !self.non_increasing() {
            o.flag(Status::Error);
            o.note("discrepancy increased along the D ladder");
        }
        o
    }
}
