//! Weak-pairing observable `|<l, u(T)> - alpha|` over a ball of initial data.

use nlslab_core::dynamics::{evolve, linear_propagate, EquationSpec, IntegratorSpec};
use nlslab_core::multipliers::SymbolSpec;
use nlslab_core::norms::{inner_product, mass};
use nlslab_core::{Complex64, Field, GridSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::datum::{band_noise, bump, normalized};
use crate::report::{num, Outcome, Status, Table};
use crate::{Config, ExpError, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Params {
    pub side: f64,
    pub points: usize,
    pub d: u64,
    pub m: f64,
    pub t_final: f64,
    pub dt: f64,
    pub radius: f64,
    pub r: f64,
    pub z_norm: f64,
    pub mass_cap: f64,
    pub alpha: Complex64,
    pub samples: usize,
    /// Support radius of the test functional.
    pub ell_radius: f64,
    pub witness_margin: f64,
    pub seed: u64,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            side: 2.0,
            points: 64,
            d: 1,
            m: 2.0,
            t_final: 0.5,
            dt: 2e-3,
            radius: 1.0,
            r: 0.5,
            z_norm: 1.0,
            mass_cap: 3.0,
            alpha: Complex64::new(0.2, 0.0),
            samples: 64,
            ell_radius: 0.5,
            witness_margin: 1e-3,
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
            t_final: cfg.get("T", d.t_final)?,
            dt: cfg.get("dt", d.dt)?,
            radius: cfg.get("R", d.radius)?,
            r: cfg.get("r", d.r)?,
            z_norm: cfg.get("z_norm", d.z_norm)?,
            mass_cap: cfg.get("mass_cap", d.mass_cap)?,
            alpha: Complex64::new(cfg.get("alpha_re", d.alpha.re)?, cfg.get("alpha_im", d.alpha.im)?),
            samples: cfg.get("samples", d.samples)?,
            ell_radius: cfg.get("ell_radius", d.ell_radius)?,
            witness_margin: cfg.get("witness_margin", d.witness_margin)?,
            seed,
        };
        if !(p.radius > p.r && p.r >= 0.0) {
            return Err(ExpError::Config("need R > r >= 0".into()));
        }
        Ok(p)
    }

    pub fn delta(&self) -> f64 {
        (self.radius - self.r) / 16.0
    }

    pub fn cut(&self) -> f64 {
        2.0 * self.d as f64 * self.m
    }

    pub fn equation(&self) -> Result<EquationSpec> {
        let spec = SymbolSpec::md(self.d, self.m)?.on_torus(self.side);
        Ok(EquationSpec::truncated(spec).with_outer_cut(self.cut()))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub r_prime: f64,
    pub theta: f64,
    /// `|<l, e^{iT Delta} u0> - alpha|`.
    pub value: f64,
    /// `|<e^{-iT Delta} l, z*> - alpha| + R'`.
    pub predicted: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub rho: f64,
    pub value: f64,
}

#[derive(Clone, Debug)]
pub struct NonsqueezeResult {
    pub params: Params,
    pub witness: Witness,
    pub samples: Vec<Sample>,
}

/// Test functional, center of the ball and the sampled initial data.
pub struct Setup {
    pub grid: GridSpec,
    pub ell: Field,
    pub z: Field,
    pub data: Vec<(f64, Field)>,
}

pub fn setup(p: &Params) -> Result<Setup> {
    let g = GridSpec::new(p.side, p.points)?;
    if p.z_norm + p.radius > p.mass_cap {
        return Err(ExpError::Precondition(format!(
            "||z*|| + R = {} exceeds the mass cap {}",
            p.z_norm + p.radius,
            p.mass_cap
        )));
    }
    let c = g.side() / 2.0;
    let ell = normalized(&bump(g, [c, c], p.ell_radius), 1.0);
    if mass(&ell) == 0.0 {
        return Err(ExpError::Precondition("test functional vanishes on the grid".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let z = band_noise(g, 0.0, p.cut(), p.z_norm, rng.random());
    let draws: Vec<(f64, u64)> = (0..p.samples)
        .map(|_| (p.radius * rng.random::<f64>(), rng.random()))
        .collect();
    let data = draws
        .into_iter()
        .map(|(rho, s)| {
            let w = band_noise(g, 0.0, p.cut(), 1.0, s);
            let u0 = z.combine(Complex64::new(1.0, 0.0), &w, Complex64::new(rho, 0.0))?;
            Ok((rho, u0))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Setup { grid: g, ell, z, data })
}

/// `u0 = z* + R' e^{i theta} e^{-iT Delta} l` with `theta` aligning the phases.
pub fn linear_witness(p: &Params, ell: &Field, z: &Field) -> Result<Witness> {
    let back = linear_propagate(ell, -p.t_final);
    let gap = inner_product(&back, z)? - p.alpha;
    let theta = if gap.norm() > 0.0 { gap.arg() } else { 0.0 };
    let r_prime = p.radius - p.witness_margin;
    let u0 = z.combine(Complex64::new(1.0, 0.0), &back, Complex64::from_polar(r_prime, theta))?;
    let value = (inner_product(ell, &linear_propagate(&u0, p.t_final))? - p.alpha).norm();
    Ok(Witness {
        r_prime,
        theta,
        value,
        predicted: gap.norm() + r_prime,
    })
}

pub fn run(p: &Params) -> Result<NonsqueezeResult> {
    let s = setup(p)?;
    let eq = p.equation()?;
    eq.validate(&s.grid)?;
    let witness = linear_witness(p, &s.ell, &s.z)?;
    let integ = IntegratorSpec::rk4(p.dt);
    let steps = (p.t_final / p.dt).ceil().max(1.0) as usize;
    let samples = s
        .data
        .par_iter()
        .map(|(rho, u0)| -> Result<Sample> {
            let ut = evolve(u0, &eq, &integ, p.t_final, steps)?.last().clone();
            Ok(Sample {
                rho: *rho,
                value: (inner_product(&s.ell, &ut)? - p.alpha).norm(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NonsqueezeResult {
        params: p.clone(),
        witness,
        samples,
    })
}

impl NonsqueezeResult {
    pub fn sample_min(&self) -> f64 {
        self.samples.iter().map(|s| s.value).fold(f64::INFINITY, f64::min)
    }

    pub fn witness_ok(&self) -> bool {
        self.witness.value >= self.witness.r_prime - 1e-10
    }

    pub fn outcome(&self) -> Outcome {
        let mut t = Table::new(&["sample", "rho", "value"]);
        for (k, s) in self.samples.iter().enumerate() {
            t.push(vec![k.to_string(), num(s.rho), num(s.value)]);
        }
        let mut o = Outcome::new("nonsqueeze", t);
        let p = &self.params;
        o.put("R", p.radius);
        o.put("r", p.r);
        o.put("delta", num(p.delta()));
        o.put("alpha", format!("{}{:+}i", p.alpha.re, p.alpha.im));
        o.put("witness_R_prime", num(self.witness.r_prime));
        o.put("witness_value", num(self.witness.value));
        o.put("witness_predicted", num(self.witness.predicted));
        o.put("sample_count", self.samples.len());
        o.put("sample_min", num(self.sample_min()));
        let below = self.samples.iter().filter(|s| s.value <= p.r).count();
        o.put("samples_within_r", below);
        o.note("sampled values are observational; no bound is asserted beyond nonnegativity");
        if !self.witness_ok() {
            o.flag(Status::Error);
            o.note("linear witness fell below R'");
        }
        o
    }
}
