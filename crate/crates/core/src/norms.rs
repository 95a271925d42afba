use num_complex::Complex64;

use crate::{Error, Field, Representation, Result};

/// `<f, g>`, conjugate-linear in `f`.
pub fn inner_product(f: &Field, g: &Field) -> Result<Complex64> {
    f.grid().ensure_same(g.grid())?;
    let g = if g.representation() == f.representation() {
        std::borrow::Cow::Borrowed(g)
    } else {
        std::borrow::Cow::Owned(g.clone().into_repr(f.representation()))
    };
    let s: Complex64 = f
        .values()
        .iter()
        .zip(g.values().iter())
        .map(|(a, b)| a.conj() * b)
        .sum();
    let w = match f.representation() {
        Representation::Physical => f.grid().spacing().powi(2),
        Representation::Spectral => 1.0 / f.grid().area(),
    };
    Ok(s * w)
}

/// `omega(f, g) = -Im <f, g>`.
pub fn symplectic_form(f: &Field, g: &Field) -> Result<f64> {
    Ok(-inner_product(f, g)?.im)
}

pub fn mass(f: &Field) -> f64 {
    let s: f64 = f.values().iter().map(|z| z.norm_sqr()).sum();
    match f.representation() {
        Representation::Physical => s * f.grid().spacing().powi(2),
        Representation::Spectral => s / f.grid().area(),
    }
}

/// Riemann-sum `L^p` norm; `p = f64::INFINITY` gives the max norm.
pub fn lebesgue_norm(f: &Field, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::InvalidParameter(format!("Lebesgue exponent {p} < 1")));
    }
    if p == 2.0 {
        return Ok(mass(f).sqrt());
    }
    let phys = f.to_physical();
    if p.is_infinite() {
        return Ok(phys.values().iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    let h2 = f.grid().spacing().powi(2);
    let s: f64 = if p == 4.0 {
        phys.values().iter().map(|z| z.norm_sqr().powi(2)).sum()
    } else {
        phys.values().iter().map(|z| z.norm().powf(p)).sum()
    };
    Ok((s * h2).powf(1.0 / p))
}

/// Homogeneous seminorm `|| (2 pi |xi|)^s f^ ||` (Plancherel-normalized).
pub fn sobolev_seminorm(f: &Field, s: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::InvalidParameter(format!("Sobolev exponent {s} outside [0, 1]")));
    }
    if s == 0.0 {
        return Ok(mass(f).sqrt());
    }
    let spec = f.to_spectral();
    let g = *f.grid();
    let mut acc = 0.0;
    for ((a, b), z) in spec.values().indexed_iter() {
        let r2 = g.frequency(a).powi(2) + g.frequency(b).powi(2);
        if r2 == 0.0 {
            continue;
        }
        let w = (4.0 * std::f64::consts::PI.powi(2) * r2).powf(s);
        acc += w * z.norm_sqr();
    }
    Ok((acc / g.area()).sqrt())
}

/// `1/2 ||grad f||^2 + 1/4 ||f||_4^4`.
pub fn energy(f: &Field) -> f64 {
    0.5 * gradient_sq(f) + 0.25 * quartic(f)
}

pub(crate) fn gradient_sq(f: &Field) -> f64 {
    sobolev_seminorm(f, 1.0).expect("s = 1 is admissible").powi(2)
}

/// `||f||_4^4`.
pub(crate) fn quartic(f: &Field) -> f64 {
    lebesgue_norm(f, 4.0).expect("p = 4 is admissible").powi(4)
}
