//! One-point midpoint rule on the cube `Q = xi0 + [-1/(2L), 1/(2L)]^d` against
//! Gauss-Legendre quadrature.

use std::f64::consts::PI;

use nlslab_core::Complex64;

use crate::report::{num, Outcome, Status, Table};
use crate::{Config, ExpError, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Params {
    pub sides: Vec<f64>,
    pub dims: Vec<usize>,
    /// Frequencies `a` of the family `e^{2 pi i a.xi}` (along the direction `(1, 1/2)` in 2D).
    pub frequencies: Vec<f64>,
    /// `(x, t)` pairs of the phase integrand `e^{2 pi i x.xi - 4 pi^2 i t |xi|^2}`.
    pub phase_points: Vec<(f64, f64)>,
    pub xi0: f64,
    pub nodes: usize,
    pub envelope: f64,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            sides: vec![4.0, 16.0, 64.0],
            dims: vec![1, 2],
            frequencies: vec![0.25, 1.0, 3.0, 10.0, 40.0],
            phase_points: vec![(0.5, 0.1), (2.0, 0.5), (8.0, 1.0), (1.0, 4.0)],
            xi0: 0.3,
            nodes: 48,
            envelope: 0.25,
        }
    }
}

impl Params {
    pub fn from_config(cfg: &Config, _seed: u64) -> Result<Self> {
        let d = Self::default();
        let xs: Vec<f64> = cfg.get_list("phase_x", &d.phase_points.iter().map(|p| p.0).collect::<Vec<_>>())?;
        let ts: Vec<f64> = cfg.get_list("phase_t", &d.phase_points.iter().map(|p| p.1).collect::<Vec<_>>())?;
        if xs.len() != ts.len() {
            return Err(ExpError::Config("phase_x and phase_t differ in length".into()));
        }
        let p = Self {
            sides: cfg.get_list("sides", &d.sides)?,
            dims: cfg.get_list("dims", &d.dims)?,
            frequencies: cfg.get_list("frequencies", &d.frequencies)?,
            phase_points: xs.into_iter().zip(ts).collect(),
            xi0: cfg.get("xi0", d.xi0)?,
            nodes: cfg.get("nodes", d.nodes)?,
            envelope: cfg.get("envelope", d.envelope)?,
        };
        if p.dims.iter().any(|&d| d != 1 && d != 2) {
            return Err(ExpError::Config("dims must be 1 or 2".into()));
        }
        if p.nodes < 2 || p.sides.iter().any(|&l| !(l > 0.0)) {
            return Err(ExpError::Config("need nodes >= 2 and positive sides".into()));
        }
        Ok(p)
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    (x, w)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Affine,
    Quadratic,
    Oscillatory,
    Phase,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Affine => "affine",
            Family::Quadratic => "quadratic",
            Family::Oscillatory => "oscillatory",
            Family::Phase => "phase",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub family: Family,
    pub d: usize,
    pub side: f64,
    pub parameter: String,
    pub error: f64,
    /// `sup_Q |d^2 h|` (operator norm of the Hessian).
    pub hessian: f64,
    /// `error / (L^{-d-2} hessian)`; zero when the Hessian vanishes.
    pub ratio: f64,
    pub closed_form: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct MidpointResult {
    pub params: Params,
    pub rows: Vec<Row>,
    pub affine_max_error: f64,
    /// Largest relative deviation of the quadratic error from `d L^{-d-2}/12`.
    pub quadratic_max_deviation: f64,
    pub oscillatory_max_ratio: f64,
}

type Integrand = Box<dyn Fn(&[f64]) -> Complex64>;

fn integrate(h: &Integrand, center: &[f64], half: f64, rule: &(Vec<f64>, Vec<f64>)) -> Complex64 {
    let (x, w) = rule;
    let mut acc = Complex64::new(0.0, 0.0);
    match center.len() {
        1 => {
            for i in 0..x.len() {
                acc += w[i] * h(&[center[0] + half * x[i]]);
            }
            acc * half
        }
        _ => {
            for i in 0..x.len() {
                for j in 0..x.len() {
                    acc += w[i] * w[j] * h(&[center[0] + half * x[i], center[1] + half * x[j]]);
                }
            }
            acc * half * half
        }
    }
}

/// Corner and interior samples of `Q` used for the sup of the Hessian norm.
fn cube_samples(center: &[f64], half: f64) -> Vec<Vec<f64>> {
    let ticks: Vec<f64> = (0..=8).map(|k| -half + 2.0 * half * k as f64 / 8.0).collect();
    match center.len() {
        1 => ticks.iter().map(|t| vec![center[0] + t]).collect(),
        _ => ticks
            .iter()
            .flat_map(|s| ticks.iter().map(move |t| vec![center[0] + s, center[1] + t]))
            .collect(),
    }
}

pub fn run(p: &Params) -> Result<MidpointResult> {
    let rule = gauss_legendre(p.nodes);
    let mut rows = Vec::new();
    for &d in &p.dims {
        let dir: Vec<f64> = if d == 1 { vec![1.0] } else { vec![1.0, 0.5] };
        let center: Vec<f64> = (0..d).map(|k| p.xi0 * (1.0 + 0.5 * k as f64)).collect();
        for &side in &p.sides {
            let half = 0.5 / side;
            let vol = side.powi(-(d as i32));
            let mut cases: Vec<(Family, String, Integrand, Box<dyn Fn(&[f64]) -> f64>, Option<f64>)> = Vec::new();
            let c0 = center.clone();
            cases.push((
                Family::Affine,
                "1+2xi".into(),
                Box::new(move |xi: &[f64]| {
                    let s: f64 = xi.iter().enumerate().map(|(k, v)| (k as f64 + 2.0) * v).sum();
                    Complex64::new(1.0 + s, -0.5 * s)
                }),
                Box::new(|_: &[f64]| 0.0),
                None,
            ));
            cases.push((
                Family::Quadratic,
                "|xi-xi0|^2".into(),
                Box::new(move |xi: &[f64]| {
                    Complex64::new(xi.iter().zip(&c0).map(|(a, b)| (a - b).powi(2)).sum(), 0.0)
                }),
                Box::new(|_: &[f64]| 2.0),
                Some(d as f64 * side.powi(-(d as i32) - 2) / 12.0),
            ));
            for &a in &p.frequencies {
                let av: Vec<f64> = dir.iter().map(|v| a * v).collect();
                let an2: f64 = av.iter().map(|v| v * v).sum();
                cases.push((
                    Family::Oscillatory,
                    format!("a={a}"),
                    Box::new(move |xi: &[f64]| {
                        let ph: f64 = av.iter().zip(xi).map(|(u, v)| u * v).sum();
                        Complex64::from_polar(1.0, 2.0 * PI * ph)
                    }),
                    Box::new(move |_: &[f64]| 4.0 * PI * PI * an2),
                    None,
                ));
            }
            for &(x, t) in &p.phase_points {
                let xv: Vec<f64> = dir.iter().map(|v| x * v).collect();
                let xv2 = xv.clone();
                cases.push((
                    Family::Phase,
                    format!("x={x};t={t}"),
                    Box::new(move |xi: &[f64]| {
                        let lin: f64 = xv.iter().zip(xi).map(|(u, v)| u * v).sum();
                        let q: f64 = xi.iter().map(|v| v * v).sum();
                        Complex64::from_polar(1.0, 2.0 * PI * lin - 4.0 * PI * PI * t * q)
                    }),
                    Box::new(move |xi: &[f64]| {
                        let g2: f64 = xv2
                            .iter()
                            .zip(xi)
                            .map(|(u, v)| (2.0 * PI * u - 8.0 * PI * PI * t * v).powi(2))
                            .sum();
                        (g2 * g2 + (8.0 * PI * PI * t).powi(2)).sqrt()
                    }),
                    None,
                ));
            }
            for (family, parameter, h, hess, closed) in cases {
                let exact = integrate(&h, &center, half, &rule);
                let mid = h(&center) * vol;
                let error = (exact - mid).norm();
                let hessian = cube_samples(&center, half)
                    .iter()
                    .map(|s| hess(s))
                    .fold(0.0, f64::max);
                let ratio = if hessian > 0.0 {
                    error / (side.powi(-(d as i32) - 2) * hessian)
                } else {
                    0.0
                };
                rows.push(Row {
                    family,
                    d,
                    side,
                    parameter,
                    error,
                    hessian,
                    ratio,
                    closed_form: closed,
                });
            }
        }
    }
    let max_of = |f: &dyn Fn(&Row) -> Option<f64>| rows.iter().filter_map(f).fold(0.0, f64::max);
    let affine_max_error = max_of(&|r| (r.family == Family::Affine).then_some(r.error));
    let quadratic_max_deviation =
        max_of(&|r| r.closed_form.map(|c| (r.error - c).abs() / c));
    let oscillatory_max_ratio =
        max_of(&|r| matches!(r.family, Family::Oscillatory | Family::Phase).then_some(r.ratio));
    Ok(MidpointResult {
        params: p.clone(),
        rows,
        affine_max_error,
        quadratic_max_deviation,
        oscillatory_max_ratio,
    })
}

impl MidpointResult {
    pub fn outcome(&self) -> Outcome {
        let mut t = Table::new(&["family", "d", "L", "parameter", "error", "hessian", "ratio", "closed_form"]);
        for r in &self.rows {
            t.push(vec![
                r.family.name().into(),
                r.d.to_string(),
                num(r.side),
                r.parameter.clone(),
                num(r.error),
                num(r.hessian),
                num(r.ratio),
                r.closed_form.map(num).unwrap_or_default(),
            ]);
        }
        let mut o = Outcome::new("midpoint", t);
        o.put("affine_max_error", num(self.affine_max_error));
        o.put("quadratic_max_relative_deviation", num(self.quadratic_max_deviation));
        o.put("oscillatory_max_ratio", num(self.oscillatory_max_ratio));
        o.put("envelope", num(self.params.envelope));
        if self.oscillatory_max_ratio > self.params.envelope {
            o.flag(Status::Error);
            o.note("oscillatory ratio exceeds the configured envelope");
        }
        o
    }
}
