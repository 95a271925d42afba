use crate::{Error, Result};

/// Uniform `n x n` sampling of the square torus `[0, side)^2`.
///
/// Sample `(k1, k2)` sits at `(k1 h, k2 h)` with `h = side / n`. In spectral
/// storage, index `a` carries the integer frequency `a - n/2`, i.e. the
/// physical frequency `(a - n/2) / side` in cycles per unit length.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    side: f64,
    n: usize,
}

impl GridSpec {
    pub fn new(side: f64, n: usize) -> Result<Self> {
        if !(side.is_finite() && side > 0.0) {
            return Err(Error::InvalidGrid(format!("side length {side} must be positive")));
        }
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!("n = {n} must be a power of two >= 2")));
        }
        Ok(Self { side, n })
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        self.side / self.n as f64
    }

    pub fn area(&self) -> f64 {
        self.side * self.side
    }

    /// Largest representable frequency magnitude, `(n/2) / side`.
    pub fn nyquist(&self) -> f64 {
        (self.n / 2) as f64 / self.side
    }

    pub fn coord(&self, k: usize) -> f64 {
        k as f64 * self.spacing()
    }

    pub fn mode(&self, a: usize) -> i64 {
        a as i64 - (self.n / 2) as i64
    }

    pub fn frequency(&self, a: usize) -> f64 {
        self.mode(a) as f64 / self.side
    }

    /// Centered storage index of integer mode `j`, if representable.
    pub fn index_of_mode(&self, j: i64) -> Option<usize> {
        let a = j + (self.n / 2) as i64;
        (a >= 0 && (a as usize) < self.n).then_some(a as usize)
    }

    pub fn check_nyquist(&self, radius: f64) -> Result<()> {
        if radius < self.nyquist() {
            Ok(())
        } else {
            Err(Error::Nyquist {
                radius,
                nyquist: self.nyquist(),
            })
        }
    }

    pub fn same_as(&self, other: &GridSpec) -> bool {
        self.n == other.n && (self.side - other.side).abs() <= 1e-12 * self.side.max(other.side)
    }

    pub fn ensure_same(&self, other: &GridSpec) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "(side {}, n {}) vs (side {}, n {})",
                self.side, self.n, other.side, other.n
            )))
        }
    }
}
