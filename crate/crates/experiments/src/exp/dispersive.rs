//! Sup norm of the kernel of `e^{it Delta} P_{<=N}` on a large torus.

use std::f64::consts::PI;

use nlslab_core::multipliers::SymbolSpec;
use nlslab_core::{Complex64, Field, GridSpec, Representation};

use crate::report::{num, Outcome, Status, Table};
use crate::{Config, ExpError, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Params {
    pub n_freq: f64,
    pub side: f64,
    pub points: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub count: usize,
    /// `L0 = factor * (N^2 T^{3/2} + N sqrt T)`.
    pub l0_factor: f64,
    /// Also run on the torus of side `2L` (with `2n` points) and compare.
    pub doubling: bool,
    pub envelope: f64,
    pub doubling_tolerance: f64,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            n_freq: 1.0,
            side: 64.0,
            points: 512,
            t_min: 0.1,
            t_max: 4.0,
            count: 40,
            l0_factor: 8.0,
            doubling: true,
            envelope: 2.0,
            doubling_tolerance: 0.05,
        }
    }
}

impl Params {
    pub fn from_config(cfg: &Config, _seed: u64) -> Result<Self> {
        let d = Self::default();
        let p = Self {
            n_freq: cfg.get("N", d.n_freq)?,
            side: cfg.get("L", d.side)?,
            points: cfg.get("n", d.points)?,
            t_min: cfg.get("t_min", d.t_min)?,
            t_max: cfg.get("T", d.t_max)?,
            count: cfg.get("t_count", d.count)?,
            l0_factor: cfg.get("l0_factor", d.l0_factor)?,
            doubling: cfg.get("doubling", d.doubling)?,
            envelope: cfg.get("envelope", d.envelope)?,
            doubling_tolerance: cfg.get("doubling_tolerance", d.doubling_tolerance)?,
        };
        if !(p.t_min > 0.0 && p.t_max >= p.t_min && p.count >= 2) {
            return Err(ExpError::Config("need 0 < t_min <= T and t_count >= 2".into()));
        }
        Ok(p)
    }

    pub fn l0(&self) -> f64 {
        let (n, t) = (self.n_freq, self.t_max);
        self.l0_factor * (n * n * t.powf(1.5) + n * t.sqrt())
    }

    /// Distance `4 pi rho T` travelled by the fastest retained frequency `rho = 1.42 N`.
    pub fn front(&self) -> Result<f64> {
        Ok(4.0 * PI * SymbolSpec::lp_leq(self.n_freq)?.support_radius() * self.t_max)
    }

    /// Smallest `L 2^k` (with `n 2^k` points) that is at least `L0` and twice the front,
    /// so that the kernel does not wrap around the torus before `T`.
    pub fn doubling_base(&self) -> Result<(f64, usize)> {
        let need = self.l0().max(2.0 * self.front()?);
        let (mut l, mut n) = (self.side, self.points);
        while l < need {
            l *= 2.0;
            n *= 2;
        }
        Ok((l, n))
    }

    /// `t = 0` followed by a log-spaced grid on `[t_min, T]`.
    pub fn times(&self) -> Vec<f64> {
        let r = (self.t_max / self.t_min).ln();
        std::iter::once(0.0)
            .chain((0..self.count).map(|k| self.t_min * (r * k as f64 / (self.count - 1) as f64).exp()))
            .collect()
    }
}

/// `sup_x |k_t(x)|` for the kernel of `e^{it Delta} P_{<=N}` on `grid`.
pub fn kernel_sup(n_freq: f64, grid: &GridSpec, t: f64) -> Result<f64> {
    let symbol = SymbolSpec::lp_leq(n_freq)?.grid_symbol(grid)?;
    let mut spec = symbol.mapv(|m| Complex64::new(m, 0.0));
    let n = grid.n();
    for a in 0..n {
        for b in 0..n {
            let r2 = grid.frequency(a).powi(2) + grid.frequency(b).powi(2);
            spec[[a, b]] *= Complex64::from_polar(1.0, -4.0 * PI * PI * t * r2);
        }
    }
    let k = Field::from_values(*grid, Representation::Spectral, spec)?.into_physical();
    Ok(k.values().iter().map(|z| z.norm()).fold(0.0, f64::max))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub side: f64,
    pub t: f64,
    pub sup: f64,
}

#[derive(Clone, Debug)]
pub struct DispersiveResult {
    pub params: Params,
    pub rows: Vec<Row>,
    /// `max t sup|k|` over `t in [t_min, T]` on the base torus.
    pub max_weighted: f64,
    /// Torus side where the doubling comparison starts.
    pub doubling_side: Option<f64>,
    /// Largest relative change of `t sup|k|` between that side and its double.
    pub doubling_change: Option<f64>,
    pub l0: f64,
}

pub fn run(p: &Params) -> Result<DispersiveResult> {
    let mut sides = vec![(p.side, p.points)];
    let base = p.doubling_base()?;
    if p.doubling {
        if base.0 != p.side {
            sides.push(base);
        }
        sides.push((2.0 * base.0, 2 * base.1));
    }
    let times = p.times();
    let mut rows = Vec::new();
    for &(l, n) in &sides {
        let g = GridSpec::new(l, n)?;
        for &t in &times {
            rows.push(Row {
                side: l,
                t,
                sup: kernel_sup(p.n_freq, &g, t)?,
            });
        }
    }
    let on = |l: f64| -> Vec<&Row> { rows.iter().filter(|r| r.side == l && r.t > 0.0).collect() };
    let max_weighted = on(p.side).iter().map(|r| r.t * r.sup).fold(0.0, f64::max);
    let doubling_change = p.doubling.then(|| {
        on(base.0)
            .iter()
            .zip(on(2.0 * base.0))
            .map(|(a, b)| (a.sup - b.sup).abs() / a.sup)
            .fold(0.0, f64::max)
    });
    Ok(DispersiveResult {
        params: p.clone(),
        rows,
        max_weighted,
        doubling_side: p.doubling.then_some(base.0),
        doubling_change,
        l0: p.l0(),
    })
}

impl DispersiveResult {
    pub fn outcome(&self) -> Outcome {
        let mut t = Table::new(&["L", "t", "sup_k", "t_sup_k"]);
        for r in &self.rows {
            t.push(vec![num(r.side), num(r.t), num(r.sup), num(r.t * r.sup)]);
        }
        let mut o = Outcome::new("dispersive", t);
        o.put("N", self.params.n_freq);
        o.put("L", self.params.side);
        o.put("L0", num(self.l0));
        o.put("max_t_sup_k", num(self.max_weighted));
        o.put("envelope", num(self.params.envelope));
        if let (Some(l), Some(c)) = (self.doubling_side, self.doubling_change) {
            o.put("doubling_from_L", l);
            o.put("doubling_max_relative_change", num(c));
            if c > self.params.doubling_tolerance {
                o.flag(Status::Error);
                o.note("L-doubling changed t sup|k| beyond tolerance");
            }
        }
        if self.params.side < self.l0 {
            o.flag(Status::Clamped);
            o.note(format!(
                "L = {} is below the heuristic L0 = {:.3}; the run is outside the stated regime",
                self.params.side, self.l0
            ));
        }
        if self.max_weighted > self.params.envelope {
            o.flag(Status::Error);
            o.note("max t sup|k| exceeds the envelope");
        }
        o
    }
}
