//! Initial data, test functionals and small field utilities.

use std::f64::consts::PI;

use nlslab_core::multipliers::smooth_step;
use nlslab_core::norms::mass;
use nlslab_core::{Complex64, Field, GridSpec, Representation};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Complex white noise on the modes with `lo <= |xi| <= hi`, scaled to `||f||_2 = norm`.
pub fn band_noise(grid: GridSpec, lo: f64, hi: f64, norm: f64, seed: u64) -> Field {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = Field::zeros(grid, Representation::Spectral);
    let n = grid.n();
    for a in 1..n {
        for b in 1..n {
            let r = grid.frequency(a).hypot(grid.frequency(b));
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            if r >= lo && r <= hi {
                f.values_mut()[[a, b]] = Complex64::new(re, im);
            }
        }
    }
    normalized(&f, norm)
}

/// Seeded smooth datum: white noise below `cut` damped by `e^{-|xi|^2 / width^2}`.
pub fn smooth_noise(grid: GridSpec, width: f64, cut: f64, norm: f64, seed: u64) -> Field {
    let mut f = band_noise(grid, 0.0, cut, 1.0, seed);
    let n = grid.n();
    for a in 0..n {
        for b in 0..n {
            let r2 = grid.frequency(a).powi(2) + grid.frequency(b).powi(2);
            f.values_mut()[[a, b]] *= (-r2 / (width * width)).exp();
        }
    }
    normalized(&f, norm)
}

/// `e^{-|x - c|^2 / s^2}` with periodic distance, times a plane wave `e^{2 pi i k.x}`.
pub fn gaussian(grid: GridSpec, center: [f64; 2], s: f64, k: [f64; 2], norm: f64) -> Field {
    let f = Field::from_fn(grid, |x, y| {
        let r2 = periodic_dist(grid.side(), x, center[0]).powi(2)
            + periodic_dist(grid.side(), y, center[1]).powi(2);
        Complex64::from_polar((-r2 / (s * s)).exp(), 2.0 * PI * (k[0] * x + k[1] * y))
    });
    normalized(&f, norm)
}

/// Smooth radial bump supported in `|x - c| < r`, equal to 1 on `|x - c| <= r/2`.
pub fn bump(grid: GridSpec, center: [f64; 2], r: f64) -> Field {
    Field::from_fn(grid, |x, y| {
        let d = periodic_dist(grid.side(), x, center[0]).hypot(periodic_dist(grid.side(), y, center[1]));
        Complex64::new(smooth_step(2.0 * (1.0 - d / r)), 0.0)
    })
}

pub fn periodic_dist(side: f64, x: f64, c: f64) -> f64 {
    let d = (x - c).rem_euclid(side);
    d.min(side - d)
}

/// `f` rescaled to the given `L^2` norm; the zero field is returned unchanged.
pub fn normalized(f: &Field, norm: f64) -> Field {
    let m = mass(f).sqrt();
    if m == 0.0 {
        return f.clone();
    }
    f.scaled(Complex64::new(norm / m, 0.0))
}

/// `||f - g||_2`.
pub fn l2_dist(f: &Field, g: &Field) -> nlslab_core::Result<f64> {
    Ok(mass(&f.sub(g)?).sqrt())
}
