//! Gauge scaling: `alpha^2 u` solves NLS when `u` solves NLS with coupling `alpha^4`.

use nlslab_core::dynamics::{evolve, linear_propagate, EquationSpec, IntegratorSpec, Scheme, Trajectory};
use nlslab_core::{Complex64, Field, GridSpec};

use crate::datum::{gaussian, l2_dist};
use crate::report::{num, Outcome, Status, Table};
use crate::{Config, ExpError, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Params {
    pub side: f64,
    pub points: usize,
    pub amplitude: f64,
    pub alphas: Vec<f64>,
    pub t_final: f64,
    pub dt: f64,
    pub stride: usize,
    pub tolerance: f64,
    /// Convergence study: final time and coarsest steps per scheme.
    pub order_t: f64,
    pub order_dt_rk4: f64,
    pub order_dt_midpoint: f64,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            side: 8.0,
            points: 64,
            amplitude: 1.0,
            alphas: vec![0.0, 0.25, 0.5, 1.0],
            t_final: 0.25,
            dt: 1e-3,
            stride: 25,
            tolerance: 1e-6,
            order_t: 0.5,
            order_dt_rk4: 0.02,
            order_dt_midpoint: 0.01,
        }
    }
}

impl Params {
    pub fn from_config(cfg: &Config, _seed: u64) -> Result<Self> {
        let d = Self::default();
        let p = Self {
            side: cfg.get("L", d.side)?,
            points: cfg.get("n", d.points)?,
            amplitude: cfg.get("amplitude", d.amplitude)?,
            alphas: cfg.get_list("alphas", &d.alphas)?,
            t_final: cfg.get("T", d.t_final)?,
            dt: cfg.get("dt", d.dt)?,
            stride: cfg.get("stride", d.stride)?,
            tolerance: cfg.get("tolerance", d.tolerance)?,
            order_t: cfg.get("order_T", d.order_t)?,
            order_dt_rk4: cfg.get("order_dt_rk4", d.order_dt_rk4)?,
            order_dt_midpoint: cfg.get("order_dt_midpoint", d.order_dt_midpoint)?,
        };
        if p.alphas.iter().any(|a| *a < 0.0) {
            return Err(ExpError::Config("alphas must be >= 0".into()));
        }
        Ok(p)
    }

    /// Gaussian of width 1 centered in the box, moving with one lattice frequency.
    pub fn datum(&self) -> Result<Field> {
        let g = GridSpec::new(self.side, self.points)?;
        let l = self.side;
        let f = gaussian(g, [l / 2.0, l / 2.0], 1.0, [1.0 / l, 0.0], 1.0);
        let peak = f.values().iter().map(|z| z.norm()).fold(0.0, f64::max);
        Ok(f.scaled(Complex64::new(self.amplitude / peak, 0.0)))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaugeRow {
    pub alpha: f64,
    /// `sup_t ||u(t) - alpha^-2 w(t)||_2 / ||u0||_2`.
    pub discrepancy: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrderRow {
    pub scheme: Scheme,
    pub dt: f64,
    pub error_coarse: f64,
    pub error_fine: f64,
    pub order: f64,
}

#[derive(Clone, Debug)]
pub struct GaugeResult {
    pub params: Params,
    pub gauge: Vec<GaugeRow>,
    pub orders: Vec<OrderRow>,
}

fn sup_distance(a: &Trajectory, b: &[Field]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (x, y) in a.snapshots().iter().zip(b) {
        worst = worst.max(l2_dist(x, y)?);
    }
    Ok(worst)
}

/// `log2(e(dt) / e(dt/2))` against a reference at `dt/8`.
pub fn self_convergence(f0: &Field, spec: IntegratorSpec, t: f64) -> Result<OrderRow> {
    let eq = EquationSpec::nls();
    let run = |h: f64| -> Result<Field> {
        let steps = (t / h).round().max(1.0) as usize;
        Ok(evolve(f0, &eq, &IntegratorSpec { dt: h, ..spec }, t, steps)?.last().clone())
    };
    let reference = run(spec.dt / 8.0)?;
    let e1 = l2_dist(&run(spec.dt)?, &reference)?;
    let e2 = l2_dist(&run(spec.dt / 2.0)?, &reference)?;
    Ok(OrderRow {
        scheme: spec.scheme,
        dt: spec.dt,
        error_coarse: e1,
        error_fine: e2,
        order: (e1 / e2).log2(),
    })
}

pub fn run(p: &Params) -> Result<GaugeResult> {
    let u0 = p.datum()?;
    let norm0 = nlslab_core::norms::mass(&u0).sqrt();
    let integ = IntegratorSpec::rk4(p.dt);
    let mut gauge = Vec::new();
    for &alpha in &p.alphas {
        let u = evolve(&u0, &EquationSpec::nls_alpha(alpha), &integ, p.t_final, p.stride)?;
        let rescaled: Vec<Field> = if alpha == 0.0 {
            u.times().iter().map(|&t| linear_propagate(&u0, t)).collect()
        } else {
            let a2 = Complex64::new(alpha * alpha, 0.0);
            let w = evolve(&u0.scaled(a2), &EquationSpec::nls(), &integ, p.t_final, p.stride)?;
            w.snapshots().iter().map(|f| f.scaled(1.0 / a2)).collect()
        };
        gauge.push(GaugeRow {
            alpha,
            discrepancy: sup_distance(&u, &rescaled)? / norm0,
        });
    }
    let orders = vec![
        self_convergence(&u0, IntegratorSpec::rk4(p.order_dt_rk4), p.order_t)?,
        self_convergence(&u0, IntegratorSpec::midpoint(p.order_dt_midpoint), p.order_t)?,
    ];
    Ok(GaugeResult {
        params: p.clone(),
        gauge,
        orders,
    })
}

impl GaugeResult {
    pub fn max_discrepancy(&self) -> f64 {
        self.gauge.iter().map(|r| r.discrepancy).fold(0.0, f64::max)
    }

    pub fn order(&self, scheme: Scheme) -> Option<f64> {
        self.orders.iter().find(|r| r.scheme == scheme).map(|r| r.order)
    }

    pub fn outcome(&self) -> Outcome {
        let mut t = Table::new(&["kind", "label", "dt", "value", "error_coarse", "error_fine"]);
        for r in &self.gauge {
            t.push(vec![
                "gauge".into(),
                format!("alpha={}", r.alpha),
                num(self.params.dt),
                num(r.discrepancy),
                String::new(),
                String::new(),
            ]);
        }
        for r in &self.orders {
            t.push(vec![
                "order".into(),
                r.scheme.name().into(),
                num(r.dt),
                num(r.order),
                num(r.error_coarse),
                num(r.error_fine),
            ]);
        }
        let mut o = Outcome::new("gauge", t);
        o.put("max_gauge_discrepancy", num(self.max_discrepancy()));
        for r in &self.orders {
            o.put(&format!("order_{}", r.scheme.name()), format!("{:.4}", r.order));
        }
        if self.max_discrepancy() > self.params.tolerance {
            o.flag(Status::Error);
            o.note("gauge discrepancy exceeds tolerance");
        }
        o
    }
}
