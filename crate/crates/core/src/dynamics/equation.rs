use std::f64::consts::PI;

use ndarray::{Array2, Zip};
use num_complex::Complex64;

use crate::multipliers::SymbolSpec;
use crate::norms::{gradient_sq, quartic};
use crate::{Error, Field, GridSpec, Representation, Result};

/// `i u_t + Delta u = alpha^4 Q P F(P u)` with `F(u) = |u|^2 u`, where `P`
/// is an optional multiplier and `Q` an optional sharp spectral cut.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EquationSpec {
    pub alpha: f64,
    pub multiplier: Option<SymbolSpec>,
    /// Radius of the sharp outer cut `1_{|xi| <= N}`.
    pub outer_cut: Option<f64>,
}

impl EquationSpec {
    pub fn nls() -> Self {
        Self {
            alpha: 1.0,
            multiplier: None,
            outer_cut: None,
        }
    }

    pub fn linear() -> Self {
        Self {
            alpha: 0.0,
            ..Self::nls()
        }
    }

    pub fn nls_alpha(alpha: f64) -> Self {
        Self { alpha, ..Self::nls() }
    }

    pub fn truncated(spec: SymbolSpec) -> Self {
        Self {
            multiplier: Some(spec),
            ..Self::nls()
        }
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_outer_cut(mut self, radius: f64) -> Self {
        self.outer_cut = Some(radius);
        self
    }

    /// Spectral radius of the cubic term's input, if finite.
    pub fn retained_radius(&self) -> Option<f64> {
        self.multiplier
            .filter(|m| !m.is_identity())
            .map(|m| m.support_radius())
    }

    pub fn validate(&self, grid: &GridSpec) -> Result<()> {
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::InvalidParameter(format!("alpha = {} outside [0, 1]", self.alpha)));
        }
        if let Some(m) = &self.multiplier {
            m.check_grid(grid)?;
        }
        if let Some(rho) = self.retained_radius() {
            if !(3.0 * rho < grid.nyquist()) {
                return Err(Error::Aliasing {
                    radius: rho,
                    nyquist: grid.nyquist(),
                });
            }
        }
        if let Some(q) = self.outer_cut {
            if !(q > 0.0) {
                return Err(Error::InvalidParameter(format!("outer cut radius {q} must be positive")));
            }
            grid.check_nyquist(q)?;
        }
        Ok(())
    }

    /// The conserved Hamiltonian `1/2 ||grad u||^2 + alpha^4/4 ||P u||_4^4`.
    pub fn hamiltonian(&self, f: &Field) -> Result<f64> {
        let quart = match &self.multiplier {
            Some(m) => quartic(&crate::multipliers::apply_multiplier(f, m)?),
            None => quartic(f),
        };
        Ok(0.5 * gradient_sq(f) + 0.25 * self.alpha.powi(4) * quart)
    }

    pub fn describe(&self) -> String {
        let mut s = format!("alpha={}", self.alpha);
        if let Some(m) = &self.multiplier {
            s.push_str(&format!(";P={}", m.describe()));
        }
        if let Some(q) = self.outer_cut {
            s.push_str(&format!(";outer_cut={q}"));
        }
        s
    }
}

/// `4 pi^2 |xi|^2` on the centered lattice.
pub(crate) fn laplacian_weight(grid: &GridSpec) -> Array2<f64> {
    let n = grid.n();
    Array2::from_shape_fn((n, n), |(a, b)| {
        4.0 * PI * PI * (grid.frequency(a).powi(2) + grid.frequency(b).powi(2))
    })
}

/// `e^{it Delta}`: multiplies the spectrum by `e^{-4 pi^2 i t |xi|^2}`.
pub fn linear_propagate(f: &Field, t: f64) -> Field {
    if t == 0.0 {
        return f.clone();
    }
    let repr = f.representation();
    let grid = *f.grid();
    let mut s = f.to_spectral();
    let w = laplacian_weight(&grid);
    Zip::from(s.values_mut())
        .and(&w)
        .for_each(|z, &k| *z *= Complex64::from_polar(1.0, -k * t));
    s.into_repr(repr)
}

/// Precomputed pieces of the nonlinear term for one grid.
pub(crate) struct Nonlinearity {
    grid: GridSpec,
    alpha4: f64,
    inner: Option<Array2<f64>>,
    outer: Option<Array2<f64>>,
}

impl Nonlinearity {
    pub(crate) fn new(eq: &EquationSpec, grid: &GridSpec) -> Result<Self> {
        eq.validate(grid)?;
        let inner = match &eq.multiplier {
            Some(m) if !m.is_identity() => Some(m.grid_symbol(grid)?),
            _ => None,
        };
        let cut = match eq.outer_cut {
            Some(q) => Some(SymbolSpec::sharp(q)?.grid_symbol(grid)?),
            None => None,
        };
        let outer = match (&inner, cut) {
            (Some(p), Some(q)) => Some(p * &q),
            (Some(p), None) => Some(p.clone()),
            (None, q) => q,
        };
        Ok(Self {
            grid: *grid,
            alpha4: eq.alpha.powi(4),
            inner,
            outer,
        })
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.alpha4 == 0.0
    }

    /// Spectrum of `alpha^4 Q P F(P u)` from the spectrum of `u`.
    pub(crate) fn eval(&self, u_hat: &Array2<Complex64>) -> Array2<Complex64> {
        if self.is_zero() {
            return Array2::zeros(u_hat.raw_dim());
        }
        let mut v = u_hat.clone();
        if let Some(p) = &self.inner {
            Zip::from(&mut v).and(p).for_each(|z, &m| *z *= m);
        }
        let mut phys = Field::from_values(self.grid, Representation::Spectral, v)
            .expect("shape matches grid")
            .into_physical();
        phys.values_mut().mapv_inplace(|z| z * z.norm_sqr());
        let mut out = phys.into_spectral().into_values();
        let a4 = self.alpha4;
        match &self.outer {
            Some(q) => Zip::from(&mut out).and(q).for_each(|z, &m| *z *= a4 * m),
            None => out.mapv_inplace(|z| z * a4),
        }
        out
    }
}

/// `alpha^4 Q P F(P f)` in the representation of `f`.
pub fn nonlinear_rhs(f: &Field, eq: &EquationSpec) -> Result<Field> {
    let nl = Nonlinearity::new(eq, f.grid())?;
    let s = f.to_spectral();
    let out = nl.eval(s.values());
    Ok(Field::from_values(*f.grid(), Representation::Spectral, out)?.into_repr(f.representation()))
}
