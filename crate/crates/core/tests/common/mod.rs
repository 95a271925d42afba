#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::DMatrix;
use ndarray::Array2;
use nlslab_core::{Complex64, Field, GridSpec, Representation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_field(grid: GridSpec, seed: u64) -> Field {
    let mut r = rng(seed);
    let n = grid.n();
    let v = Array2::from_shape_fn((n, n), |_| Complex64::new(r.random::<f64>() - 0.5, r.random::<f64>() - 0.5));
    Field::from_values(grid, Representation::Physical, v).unwrap()
}

/// Random trigonometric polynomial with modes `|j|_inf <= band` (integer modes).
pub fn band_limited_field(grid: GridSpec, band: i64, seed: u64) -> Field {
    let mut r = rng(seed);
    let n = grid.n();
    let mut v = Array2::zeros((n, n));
    for j1 in -band..=band {
        for j2 in -band..=band {
            let a = grid.index_of_mode(j1).unwrap();
            let b = grid.index_of_mode(j2).unwrap();
            v[[a, b]] = Complex64::new(r.random::<f64>() - 0.5, r.random::<f64>() - 0.5) * grid.area();
        }
    }
    Field::from_values(grid, Representation::Spectral, v).unwrap().into_physical()
}

pub fn rel_diff(a: &Field, b: &Field) -> f64 {
    let b = b.clone().into_repr(a.representation());
    let num: f64 = a.values().iter().zip(b.values().iter()).map(|(x, y)| (x - y).norm_sqr()).sum();
    let den: f64 = a.values().iter().map(|x| x.norm_sqr()).sum();
    (num / den).sqrt()
}

pub fn max_abs_diff(a: &Field, b: &Field) -> f64 {
    let b = b.clone().into_repr(a.representation());
    a.values()
        .iter()
        .zip(b.values().iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Direct `O(n^4)` evaluation of `h^2 sum_x f(x) e^{-2 pi i x.j/L}` in centered order.
pub fn dense_forward(f: &Field) -> Array2<Complex64> {
    let g = *f.grid();
    let n = g.n();
    let p = f.to_physical();
    let h2 = g.spacing().powi(2);
    Array2::from_shape_fn((n, n), |(a, b)| {
        let (j1, j2) = (g.mode(a) as f64, g.mode(b) as f64);
        let mut s = Complex64::new(0.0, 0.0);
        for ((k1, k2), z) in p.values().indexed_iter() {
            let ph = -2.0 * PI * (k1 as f64 * j1 + k2 as f64 * j2) / n as f64;
            s += z * Complex64::from_polar(1.0, ph);
        }
        s * h2
    })
}

/// Convolution kernel of a radial symbol by direct trigonometric summation,
/// tabulated over all sample offsets; Nyquist modes omitted.
pub fn direct_kernel(grid: &GridSpec, symbol: impl Fn(f64) -> f64) -> Array2<Complex64> {
    let n = grid.n();
    let l = grid.side();
    let modes: Vec<(f64, f64, f64)> = (1..n)
        .flat_map(|a| (1..n).map(move |b| (a, b)))
        .map(|(a, b)| {
            let (x, y) = (grid.frequency(a), grid.frequency(b));
            (grid.mode(a) as f64, grid.mode(b) as f64, symbol(x.hypot(y)))
        })
        .filter(|m| m.2 != 0.0)
        .collect();
    Array2::from_shape_fn((n, n), |(d1, d2)| {
        let mut s = Complex64::new(0.0, 0.0);
        for &(j1, j2, m) in &modes {
            let ph = 2.0 * PI * (d1 as f64 * j1 + d2 as f64 * j2) / n as f64;
            s += Complex64::from_polar(m, ph);
        }
        s / (l * l)
    })
}

/// Dense matrix of the convolution `g -> h^2 sum_y K(x - y) g(y)` on sample vectors
/// (row-major flattening), with an optional fold period in samples.
pub fn convolution_matrix(grid: &GridSpec, kernel: &Array2<Complex64>, period: usize) -> DMatrix<Complex64> {
    let n = grid.n();
    let h2 = grid.spacing().powi(2);
    let nn = n * n;
    DMatrix::from_fn(nn, nn, |r, s| {
        let (x1, x2) = (r / n, r % n);
        let (y1, y2) = (s / n, s % n);
        let d1 = (x1 + n - y1) % n % period;
        let d2 = (x2 + n - y2) % n % period;
        kernel[[d1, d2]] * h2
    })
}

pub fn diag(w: &Array2<f64>) -> DMatrix<Complex64> {
    let v: Vec<Complex64> = w.iter().map(|&x| c(x)).collect();
    DMatrix::from_diagonal(&nalgebra::DVector::from_vec(v))
}

pub fn largest_singular_value(m: &DMatrix<Complex64>) -> f64 {
    let sv = m.clone().singular_values();
    sv.iter().cloned().fold(0.0, f64::max)
}
