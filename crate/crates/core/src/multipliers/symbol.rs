use ndarray::Array2;
use num_complex::Complex64;

use super::bump::{phi_eval, OUTER_RADIUS};
use crate::{Error, Field, GridSpec, Representation, Result};

pub fn is_dyadic(d: u64) -> bool {
    d >= 1 && d.is_power_of_two()
}

fn check_dyadic(d: u64) -> Result<()> {
    if is_dyadic(d) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("D = {d} is not a power of two")))
    }
}

/// `m_D` at radius `r`, as the average of dyadic bumps.
pub fn md_eval_radius(d: u64, r: f64) -> Result<f64> {
    check_dyadic(d)?;
    let levels = d.trailing_zeros() + 1;
    let mut s = 0.0;
    let mut n = 1.0;
    for _ in 0..levels {
        s += phi_eval(r / n);
        n *= 2.0;
    }
    Ok(s / levels as f64)
}

pub fn md_eval(d: u64, xi: [f64; 2]) -> Result<f64> {
    md_eval_radius(d, xi[0].hypot(xi[1]))
}

/// Same symbol written as a weighted sum of Littlewood-Paley pieces.
pub fn md_eval_telescoped(d: u64, xi: [f64; 2]) -> Result<f64> {
    check_dyadic(d)?;
    let r = xi[0].hypot(xi[1]);
    let log2d = (d.trailing_zeros() + 1) as f64;
    let mut s = phi_eval(r);
    let mut n = 2u64;
    while n <= d {
        let w = (log2d - n.trailing_zeros() as f64) / log2d;
        s += w * (phi_eval(r / n as f64) - phi_eval(2.0 * r / n as f64));
        n *= 2;
    }
    Ok(s)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SymbolFamily {
    Identity,
    /// `phi(xi / N)`.
    LpLeq { n: f64 },
    /// `phi(xi / N) - phi(2 xi / N)`.
    LpBand { n: f64 },
    /// `m_D(xi / M)`.
    Md { d: u64, m: f64 },
    /// Indicator of `|xi| <= N`.
    Sharp { n: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Domain {
    Plane,
    Torus(f64),
}

/// A radial Fourier multiplier together with the domain it is meant for.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymbolSpec {
    pub family: SymbolFamily,
    pub domain: Domain,
}

impl SymbolSpec {
    pub fn identity() -> Self {
        Self {
            family: SymbolFamily::Identity,
            domain: Domain::Plane,
        }
    }

    pub fn lp_leq(n: f64) -> Result<Self> {
        positive("N", n)?;
        Ok(Self {
            family: SymbolFamily::LpLeq { n },
            domain: Domain::Plane,
        })
    }

    pub fn lp_band(n: f64) -> Result<Self> {
        positive("N", n)?;
        Ok(Self {
            family: SymbolFamily::LpBand { n },
            domain: Domain::Plane,
        })
    }

    pub fn md(d: u64, m: f64) -> Result<Self> {
        check_dyadic(d)?;
        positive("M", m)?;
        Ok(Self {
            family: SymbolFamily::Md { d, m },
            domain: Domain::Plane,
        })
    }

    pub fn sharp(n: f64) -> Result<Self> {
        positive("N", n)?;
        Ok(Self {
            family: SymbolFamily::Sharp { n },
            domain: Domain::Plane,
        })
    }

    pub fn on_torus(mut self, side: f64) -> Self {
        self.domain = Domain::Torus(side);
        self
    }

    pub fn is_identity(&self) -> bool {
        self.family == SymbolFamily::Identity
    }

    pub fn eval_radius(&self, r: f64) -> f64 {
        match self.family {
            SymbolFamily::Identity => 1.0,
            SymbolFamily::LpLeq { n } => phi_eval(r / n),
            SymbolFamily::LpBand { n } => phi_eval(r / n) - phi_eval(2.0 * r / n),
            SymbolFamily::Md { d, m } => md_eval_radius(d, r / m).expect("validated at construction"),
            SymbolFamily::Sharp { n } => {
                if r <= n {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    pub fn eval(&self, xi1: f64, xi2: f64) -> f64 {
        self.eval_radius(xi1.hypot(xi2))
    }

    /// Radius beyond which the symbol vanishes identically.
    pub fn support_radius(&self) -> f64 {
        match self.family {
            SymbolFamily::Identity => f64::INFINITY,
            SymbolFamily::LpLeq { n } | SymbolFamily::LpBand { n } => OUTER_RADIUS * n,
            SymbolFamily::Md { d, m } => OUTER_RADIUS * d as f64 * m,
            SymbolFamily::Sharp { n } => n,
        }
    }

    pub fn check_grid(&self, grid: &GridSpec) -> Result<()> {
        if let Domain::Torus(side) = self.domain {
            if (side - grid.side()).abs() > 1e-12 * side {
                return Err(Error::GridMismatch(format!(
                    "symbol is defined on the torus of side {side}, grid side is {}",
                    grid.side()
                )));
            }
        }
        if !self.is_identity() {
            grid.check_nyquist(self.support_radius())?;
        }
        Ok(())
    }

    /// Symbol sampled on the centered spectral lattice of `grid`, Nyquist row
    /// and column set to zero.
    pub fn grid_symbol(&self, grid: &GridSpec) -> Result<Array2<f64>> {
        self.check_grid(grid)?;
        let n = grid.n();
        Ok(Array2::from_shape_fn((n, n), |(a, b)| {
            if self.is_identity() {
                1.0
            } else if a == 0 || b == 0 {
                0.0
            } else {
                self.eval(grid.frequency(a), grid.frequency(b))
            }
        }))
    }

    pub fn describe(&self) -> String {
        let fam = match self.family {
            SymbolFamily::Identity => "identity".to_string(),
            SymbolFamily::LpLeq { n } => format!("lp_leq(N={n})"),
            SymbolFamily::LpBand { n } => format!("lp_band(N={n})"),
            SymbolFamily::Md { d, m } => format!("mD(D={d};M={m})"),
            SymbolFamily::Sharp { n } => format!("sharp(N={n})"),
        };
        match self.domain {
            Domain::Plane => fam,
            Domain::Torus(l) => format!("{fam}@torus(L={l})"),
        }
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} = {v} must be positive")))
    }
}

/// Multiplies a spectral array (centered storage) by a real symbol in place.
pub(crate) fn multiply_spectrum(values: &mut Array2<Complex64>, symbol: &Array2<f64>) {
    ndarray::Zip::from(values).and(symbol).for_each(|z, &m| *z *= m);
}

/// Applies the multiplier; the output keeps the representation of `f`.
pub fn apply_multiplier(f: &Field, spec: &SymbolSpec) -> Result<Field> {
    let symbol = spec.grid_symbol(f.grid())?;
    Ok(apply_symbol(f, &symbol))
}

pub(crate) fn apply_symbol(f: &Field, symbol: &Array2<f64>) -> Field {
    let repr = f.representation();
    let mut s = f.to_spectral();
    multiply_spectrum(s.values_mut(), symbol);
    if repr == Representation::Physical {
        s.into_physical()
    } else {
        s
    }
}

/// Result of [`lipschitz_defect`].
#[derive(Clone, Copy, Debug)]
pub struct LipschitzDefect {
    pub sup: f64,
    /// `log2(k) / log2(D)`; infinite for `D = 1`.
    pub bound: f64,
}

/// `sup |m_D(xi) - m_D(k xi)|` over `sample_count` log-spaced radii in
/// `[1/(4k), 4D]`.
pub fn lipschitz_defect(d: u64, k: f64, sample_count: usize) -> Result<LipschitzDefect> {
    check_dyadic(d)?;
    if !(k >= 1.0) {
        return Err(Error::InvalidParameter(format!("dilation k = {k} must be >= 1")));
    }
    if sample_count < 2 {
        return Err(Error::InvalidParameter("need at least two samples".into()));
    }
    let lo = (0.25 / k).ln();
    let hi = (4.0 * d as f64).ln();
    let mut sup: f64 = 0.0;
    for i in 0..sample_count {
        let r = (lo + (hi - lo) * i as f64 / (sample_count - 1) as f64).exp();
        let v = (md_eval_radius(d, r)? - md_eval_radius(d, k * r)?).abs();
        sup = sup.max(v);
    }
    let bound = if d == 1 {
        f64::INFINITY
    } else {
        k.log2() / (d as f64).log2()
    };
    Ok(LipschitzDefect { sup, bound })
}

pub fn hamiltonian_truncated(f: &Field, spec: &SymbolSpec) -> Result<f64> {
    let pf = apply_multiplier(f, spec)?;
    Ok(0.5 * crate::norms::gradient_sq(f) + 0.25 * crate::norms::quartic(&pf))
}
