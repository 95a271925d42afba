use std::f64::consts::PI;

use ndarray::{Array2, Zip};
use num_complex::Complex64;

use super::equation::{laplacian_weight, EquationSpec, Nonlinearity};
use crate::{Error, Field, GridSpec, Representation, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    Rk4InteractionPicture,
    ImplicitMidpoint,
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Rk4InteractionPicture => "rk4_interaction_picture",
            Scheme::ImplicitMidpoint => "implicit_midpoint",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "rk4_interaction_picture" | "rk4" => Ok(Scheme::Rk4InteractionPicture),
            "implicit_midpoint" | "midpoint" => Ok(Scheme::ImplicitMidpoint),
            other => Err(Error::InvalidParameter(format!("unknown scheme {other}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorSpec {
    pub scheme: Scheme,
    pub dt: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl IntegratorSpec {
    pub fn new(scheme: Scheme, dt: f64) -> Self {
        Self {
            scheme,
            dt,
            tolerance: 1e-12,
            max_iterations: 50,
        }
    }

    pub fn rk4(dt: f64) -> Self {
        Self::new(Scheme::Rk4InteractionPicture, dt)
    }

    pub fn midpoint(dt: f64) -> Self {
        Self::new(Scheme::ImplicitMidpoint, dt)
    }

    /// `0.1 / (4 pi^2 rho^2)` capped at `1e-2`.
    pub fn default_dt(radius: f64) -> f64 {
        (0.1 / (4.0 * PI * PI * radius * radius)).min(1e-2)
    }

    /// `dt 4 pi^2 nyquist^2`: fastest linear phase advanced per step.
    pub fn stiffness(&self, grid: &GridSpec) -> f64 {
        self.dt.abs() * 4.0 * PI * PI * grid.nyquist().powi(2)
    }
}

/// One-step map for a fixed equation, grid and step size.
pub struct Stepper {
    grid: GridSpec,
    nl: Nonlinearity,
    spec: IntegratorSpec,
    half: Array2<Complex64>,
    cayley: Array2<Complex64>,
    resolvent: Array2<Complex64>,
    /// Largest fixed-point residual seen by the midpoint solver.
    pub max_residual: f64,
    pub max_sweeps: usize,
}

fn axpy(y: &Array2<Complex64>, a: Complex64, x: &Array2<Complex64>) -> Array2<Complex64> {
    let mut out = y.clone();
    Zip::from(&mut out).and(x).for_each(|o, &v| *o += a * v);
    out
}

fn hadamard(m: &Array2<Complex64>, x: &Array2<Complex64>) -> Array2<Complex64> {
    let mut out = x.clone();
    Zip::from(&mut out).and(m).for_each(|o, &w| *o *= w);
    out
}

fn sq_norm(x: &Array2<Complex64>) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum()
}

impl Stepper {
    pub fn new(eq: &EquationSpec, spec: &IntegratorSpec, grid: &GridSpec) -> Result<Self> {
        if !(spec.dt.is_finite() && spec.dt != 0.0) {
            return Err(Error::InvalidParameter(format!("dt = {} must be finite and nonzero", spec.dt)));
        }
        let nl = Nonlinearity::new(eq, grid)?;
        let k = laplacian_weight(grid);
        let dt = spec.dt;
        let half = k.mapv(|w| Complex64::from_polar(1.0, -w * dt / 2.0));
        // Symbol of i Delta is lambda = -i k; Cayley factors of the midpoint rule.
        let cayley = k.mapv(|w| {
            let l = Complex64::new(0.0, -w) * (dt / 2.0);
            (1.0 + l) / (1.0 - l)
        });
        let resolvent = k.mapv(|w| dt / (1.0 - Complex64::new(0.0, -w) * (dt / 2.0)));
        Ok(Self {
            grid: *grid,
            nl,
            spec: *spec,
            half,
            cayley,
            resolvent,
            max_residual: 0.0,
            max_sweeps: 0,
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn dt(&self) -> f64 {
        self.spec.dt
    }

    /// `-i N(u)` in spectral form.
    fn g(&self, u: &Array2<Complex64>) -> Array2<Complex64> {
        let mut out = self.nl.eval(u);
        out.mapv_inplace(|z| Complex64::new(z.im, -z.re));
        out
    }

    fn rk4(&self, u: &Array2<Complex64>) -> Array2<Complex64> {
        let dt = self.spec.dt;
        if self.nl.is_zero() {
            return hadamard(&self.half, &hadamard(&self.half, u));
        }
        let c = |x: f64| Complex64::new(x, 0.0);
        let ui = hadamard(&self.half, u);
        let k1 = hadamard(&self.half, &self.g(u));
        let k2 = self.g(&axpy(&ui, c(dt / 2.0), &k1));
        let k3 = self.g(&axpy(&ui, c(dt / 2.0), &k2));
        let k4 = self.g(&hadamard(&self.half, &axpy(&ui, c(dt), &k3)));
        let mut acc = ui;
        Zip::from(&mut acc)
            .and(&k1)
            .and(&k2)
            .and(&k3)
            .for_each(|a, &x1, &x2, &x3| *a += (x1 + 2.0 * x2 + 2.0 * x3) * (dt / 6.0));
        let mut out = hadamard(&self.half, &acc);
        Zip::from(&mut out).and(&k4).for_each(|o, &x4| *o += x4 * (dt / 6.0));
        out
    }

    fn midpoint(&mut self, u: &Array2<Complex64>) -> Result<Array2<Complex64>> {
        let base = hadamard(&self.cayley, u);
        if self.nl.is_zero() {
            return Ok(base);
        }
        let update = |m: &Array2<Complex64>| -> Array2<Complex64> {
            let mut out = self.g(m);
            Zip::from(&mut out)
                .and(&self.resolvent)
                .and(&base)
                .for_each(|o, &r, &b| *o = b + r * *o);
            out
        };
        let mut next = update(u);
        let mut residual = f64::INFINITY;
        for sweep in 1..=self.spec.max_iterations {
            let mut mid = next.clone();
            Zip::from(&mut mid).and(u).for_each(|m, &a| *m = (*m + a) * 0.5);
            let cand = update(&mid);
            let diff: f64 = cand.iter().zip(next.iter()).map(|(a, b)| (a - b).norm_sqr()).sum();
            let scale = sq_norm(&cand).max(f64::MIN_POSITIVE);
            residual = (diff / scale).sqrt();
            next = cand;
            if residual <= self.spec.tolerance {
                self.max_residual = self.max_residual.max(residual);
                self.max_sweeps = self.max_sweeps.max(sweep);
                return Ok(next);
            }
        }
        Err(Error::NonConvergence {
            what: "implicit midpoint fixed point",
            iterations: self.spec.max_iterations,
            residual,
        })
    }

    /// Advances a spectral array by one step.
    pub fn advance(&mut self, u_hat: &Array2<Complex64>) -> Result<Array2<Complex64>> {
        match self.spec.scheme {
            Scheme::Rk4InteractionPicture => Ok(self.rk4(u_hat)),
            Scheme::ImplicitMidpoint => self.midpoint(u_hat),
        }
    }

    pub fn step_field(&mut self, f: &Field) -> Result<Field> {
        self.grid.ensure_same(f.grid())?;
        let repr = f.representation();
        let s = f.to_spectral();
        let out = self.advance(s.values())?;
        Ok(Field::from_values(self.grid, Representation::Spectral, out)?.into_repr(repr))
    }
}

pub fn step(f: &Field, eq: &EquationSpec, integ: &IntegratorSpec) -> Result<Field> {
    Stepper::new(eq, integ, f.grid())?.step_field(f)
}
