use ndarray::{Array2, Zip};
use num_complex::Complex64;

use crate::fft::{fft2, half_shift};
use crate::{Error, GridSpec, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Representation {
    Physical,
    Spectral,
}

/// Complex field sampled on a [`GridSpec`].
///
/// Spectral values are Fourier coefficients `f^(j) = int f(x) e^{-2 pi i j.x/L} dx`
/// stored with the zero mode at index `n/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    grid: GridSpec,
    repr: Representation,
    values: Array2<Complex64>,
}

impl Field {
    pub fn zeros(grid: GridSpec, repr: Representation) -> Self {
        let n = grid.n();
        Self {
            grid,
            repr,
            values: Array2::zeros((n, n)),
        }
    }

    pub fn from_values(grid: GridSpec, repr: Representation, values: Array2<Complex64>) -> Result<Self> {
        if values.dim() != (grid.n(), grid.n()) {
            return Err(Error::GridMismatch(format!(
                "array shape {:?} does not match n = {}",
                values.dim(),
                grid.n()
            )));
        }
        let values = if values.is_standard_layout() {
            values
        } else {
            values.as_standard_layout().into_owned()
        };
        Ok(Self { grid, repr, values })
    }

    /// Samples `f(x1, x2)` at the grid points.
    pub fn from_fn(grid: GridSpec, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let n = grid.n();
        let values = Array2::from_shape_fn((n, n), |(a, b)| f(grid.coord(a), grid.coord(b)));
        Self {
            grid,
            repr: Representation::Physical,
            values,
        }
    }

    /// Builds a spectral field from its coefficients as a function of the
    /// frequency `(xi1, xi2)` in cycles per unit length.
    pub fn from_spectrum(grid: GridSpec, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let n = grid.n();
        let values = Array2::from_shape_fn((n, n), |(a, b)| f(grid.frequency(a), grid.frequency(b)));
        Self {
            grid,
            repr: Representation::Spectral,
            values,
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn representation(&self) -> Representation {
        self.repr
    }

    pub fn values(&self) -> &Array2<Complex64> {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut Array2<Complex64> {
        &mut self.values
    }

    pub fn into_values(self) -> Array2<Complex64> {
        self.values
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn into_spectral(self) -> Field {
        match self.repr {
            Representation::Spectral => self,
            Representation::Physical => {
                let h2 = self.grid.spacing().powi(2);
                let mut v = self.values;
                fft2(&mut v, false);
                v.mapv_inplace(|z| z * h2);
                Field {
                    grid: self.grid,
                    repr: Representation::Spectral,
                    values: half_shift(&v),
                }
            }
        }
    }

    pub fn into_physical(self) -> Field {
        match self.repr {
            Representation::Physical => self,
            Representation::Spectral => {
                let scale = 1.0 / self.grid.area();
                let mut v = half_shift(&self.values);
                fft2(&mut v, true);
                v.mapv_inplace(|z| z * scale);
                Field {
                    grid: self.grid,
                    repr: Representation::Physical,
                    values: v,
                }
            }
        }
    }

    pub fn to_spectral(&self) -> Field {
        self.clone().into_spectral()
    }

    pub fn to_physical(&self) -> Field {
        self.clone().into_physical()
    }

    pub fn into_repr(self, repr: Representation) -> Field {
        match repr {
            Representation::Physical => self.into_physical(),
            Representation::Spectral => self.into_spectral(),
        }
    }

    pub fn scaled(&self, c: Complex64) -> Field {
        Field {
            grid: self.grid,
            repr: self.repr,
            values: self.values.mapv(|z| z * c),
        }
    }

    fn aligned<'a>(&self, other: &'a Field) -> Result<std::borrow::Cow<'a, Field>> {
        self.grid.ensure_same(&other.grid)?;
        Ok(if other.repr == self.repr {
            std::borrow::Cow::Borrowed(other)
        } else {
            std::borrow::Cow::Owned(other.clone().into_repr(self.repr))
        })
    }

    /// `a * self + b * other`, in the representation of `self`.
    pub fn combine(&self, a: Complex64, other: &Field, b: Complex64) -> Result<Field> {
        let o = self.aligned(other)?;
        let mut values = self.values.clone();
        Zip::from(&mut values)
            .and(&o.values)
            .for_each(|x, &y| *x = a * *x + b * y);
        Ok(Field {
            grid: self.grid,
            repr: self.repr,
            values,
        })
    }

    pub fn add(&self, other: &Field) -> Result<Field> {
        self.combine(Complex64::new(1.0, 0.0), other, Complex64::new(1.0, 0.0))
    }

    pub fn sub(&self, other: &Field) -> Result<Field> {
        self.combine(Complex64::new(1.0, 0.0), other, Complex64::new(-1.0, 0.0))
    }

    /// Pointwise product in physical space.
    pub fn mul_pointwise(&self, other: &Field) -> Result<Field> {
        self.grid.ensure_same(&other.grid)?;
        let a = self.to_physical();
        let b = other.to_physical();
        let mut values = a.values;
        Zip::from(&mut values).and(&b.values).for_each(|x, &y| *x *= y);
        Ok(Field {
            grid: self.grid,
            repr: Representation::Physical,
            values,
        })
    }

    /// Multiplies the physical samples by `w(x1, x2)`.
    pub fn mul_fn(&self, w: impl Fn(f64, f64) -> Complex64) -> Field {
        let mut f = self.to_physical();
        let g = f.grid;
        for ((a, b), z) in f.values.indexed_iter_mut() {
            *z *= w(g.coord(a), g.coord(b));
        }
        f
    }
}
