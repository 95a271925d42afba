mod common;

use std::f64::consts::PI;

use common::{band_limited_field, c, max_abs_diff, random_field, rel_diff};
use nlslab_core::dynamics::{evolve, linear_propagate, strichartz_norms, EquationSpec, IntegratorSpec, Trajectory};
use nlslab_core::norms::mass;
use nlslab_core::symmetries::{
    apply_G, apply_G_inverse, apply_T, apply_g, apply_g_inverse, decoupling_l2, mass_decoupling_defect,
    orthogonality_gap, translate, SymParams,
};
use nlslab_core::{Complex64, Error, Field, GridSpec, Representation};
use proptest::prelude::*;

fn bump(grid: GridSpec, center: [f64; 2], width: f64) -> Field {
    let l = grid.side();
    Field::from_fn(grid, |x, y| {
        let dx = (x - center[0] + l / 2.0).rem_euclid(l) - l / 2.0;
        let dy = (y - center[1] + l / 2.0).rem_euclid(l) - l / 2.0;
        c((-(dx * dx + dy * dy) / (width * width)).exp())
    })
}

#[test]
fn trivial_parameters_are_identity() {
    let g = GridSpec::new(4.0, 32).unwrap();
    let f = random_field(g, 1);
    assert_eq!(apply_g(&f, &SymParams::identity()).unwrap(), f);
    let p = SymParams::new(2.0, [PI, 0.0], [0.25, 0.5], 0.0);
    assert_eq!(apply_G(&f, &p).unwrap(), apply_g(&f, &p).unwrap());
}

#[test]
fn pure_translation_shifts_samples() {
    let g = GridSpec::new(4.0, 32).unwrap();
    let f = random_field(g, 2);
    let h = g.spacing();
    let out = apply_g(&f, &SymParams::new(1.0, [0.0; 2], [3.0 * h, -5.0 * h], 0.0)).unwrap();
    for ((a, b), z) in out.values().indexed_iter() {
        assert_eq!(*z, f.values()[[(a + 32 - 3) % 32, (b + 5) % 32]]);
    }
    let moved = translate(&band_limited_field(g, 6, 3), [3.0 * h, -5.0 * h]);
    let shifted = apply_g(&band_limited_field(g, 6, 3), &SymParams::new(1.0, [0.0; 2], [3.0 * h, -5.0 * h], 0.0)).unwrap();
    assert!(max_abs_diff(&moved, &shifted) <= 1e-12);
}

#[test]
fn operators_are_unitary_and_invertible() {
    let g = GridSpec::new(8.0, 64).unwrap();
    let f = random_field(g, 3);
    let out_side = 4.0;
    let p = SymParams::new(2.0, [2.0 * PI / out_side * 3.0, -2.0 * PI / out_side], [0.5, 1.25], 0.3);
    let gf = apply_g(&f, &p).unwrap();
    assert!((gf.grid().side() - out_side).abs() < 1e-15);
    assert!((mass(&gf) / mass(&f) - 1.0).abs() <= 1e-12);
    let big = apply_G(&f, &p).unwrap();
    assert!((mass(&big) / mass(&f) - 1.0).abs() <= 1e-12);
    assert!(rel_diff(&f, &apply_g_inverse(&gf, &p).unwrap()) <= 1e-12);
    assert!(rel_diff(&f, &apply_G_inverse(&big, &p).unwrap()) <= 1e-12);
}

#[test]
fn incompatible_parameters_are_rejected() {
    let g = GridSpec::new(8.0, 64).unwrap();
    let f = random_field(g, 4);
    assert!(matches!(apply_g(&f, &SymParams::new(3.0, [0.0; 2], [0.0; 2], 0.0)), Err(Error::InvalidParameter(_))));
    assert!(apply_g(&f, &SymParams::new(1.0, [1.0, 0.0], [0.0; 2], 0.0)).is_err());
    assert!(apply_g(&f, &SymParams::new(1.0, [0.0; 2], [0.01, 0.0], 0.0)).is_err());
}

fn galilean_setup() -> (Field, SymParams, Trajectory) {
    let g = GridSpec::new(8.0, 64).unwrap();
    let f = band_limited_field(g, 6, 5);
    let out_side = 4.0;
    let p = SymParams::new(2.0, [2.0 * PI / out_side * 2.0, -2.0 * PI / out_side], [0.5, 1.25], 0.1);
    let traj = evolve(&f, &EquationSpec::linear(), &IntegratorSpec::rk4(0.01), 1.0, 1).unwrap();
    (f, p, traj)
}

#[test]
fn galilean_identity_at_snapshot_times() {
    let (f, p, traj) = galilean_setup();
    let ts = [0.0, 0.05, 0.1, 0.2];
    let sampled = apply_T(&traj, &p, &ts).unwrap();
    for (t, s) in ts.iter().zip(&sampled) {
        let lhs = linear_propagate(&apply_G(&f, &p).unwrap(), *t);
        let err = mass(&lhs.sub(s).unwrap()).sqrt();
        assert!(err <= 1e-10, "t = {t}: {err}");
    }
}

#[test]
fn galilean_identity_between_snapshots_within_interpolation_budget() {
    let (f, p, traj) = galilean_setup();
    // Linear interpolation error <= dt_s^2/8 sup ||v''||, with v'' = Delta^2 v.
    let dt_s = traj.times()[1] - traj.times()[0];
    let g = *f.grid();
    let mut s = f.to_spectral();
    for ((a, b), z) in s.values_mut().indexed_iter_mut() {
        let k = 4.0 * PI * PI * (g.frequency(a).powi(2) + g.frequency(b).powi(2));
        *z *= k * k;
    }
    let budget = dt_s * dt_s / 8.0 * mass(&s).sqrt();
    let t = 0.0137;
    let s = &apply_T(&traj, &p, &[t]).unwrap()[0];
    let lhs = linear_propagate(&apply_G(&f, &p).unwrap(), t);
    let err = mass(&lhs.sub(s).unwrap()).sqrt();
    assert!(err <= budget * (1.0 + 1e-6) && err > 0.0, "{err} vs {budget}");
}

#[test]
fn apply_t_trivial_and_static_cases() {
    let (_, _, traj) = galilean_setup();
    let ts = [0.0, 0.3, 0.7];
    for (t, s) in ts.iter().zip(apply_T(&traj, &SymParams::identity(), &ts).unwrap()) {
        assert!(max_abs_diff(&s, &traj.sample_at(*t).unwrap()) <= 1e-13);
    }

    let g = GridSpec::new(8.0, 32).unwrap();
    let f = random_field(g, 6);
    let stat = Trajectory::from_snapshots(vec![f.clone(); 3], vec![0.0, 0.5, 1.0], EquationSpec::linear(), IntegratorSpec::rk4(0.5), 1).unwrap();
    let p = SymParams::new(2.0, [0.0; 2], [0.0; 2], 0.0);
    for s in apply_T(&stat, &p, &[0.0, 0.1, 0.25]).unwrap() {
        assert!((s.grid().side() - 4.0).abs() < 1e-15);
        for (a, b) in s.values().iter().zip(f.values()) {
            assert!((a - 2.0 * b).norm() <= 1e-13);
        }
    }
    assert!(matches!(apply_T(&stat, &p, &[0.3]), Err(Error::TimeOutOfRange(_))));
}

#[test]
fn orthogonality_gap_examples() {
    let p = SymParams::new(1.0, [1.0, 2.0], [0.5, 0.5], 0.25);
    assert!((orthogonality_gap(&p, &p) - 2.0).abs() < 1e-15);
    let q = SymParams { x0: [0.5 + 3.0, 0.5 + 4.0], ..p };
    assert!((orthogonality_gap(&p, &q) - 7.0).abs() < 1e-14);
    let r = SymParams { n: 4.0, ..SymParams::identity() };
    assert!((orthogonality_gap(&r, &SymParams::identity()) - 4.25).abs() < 1e-15);
}

fn params() -> impl Strategy<Value = SymParams> {
    (
        -4i32..5,
        prop::array::uniform2(-10.0..10.0f64),
        prop::array::uniform2(-10.0..10.0f64),
        -5.0..5.0f64,
    )
        .prop_map(|(k, xi, x0, t0)| SymParams::new(2f64.powi(k), xi, x0, t0))
}

proptest! {
    #[test]
    fn gap_is_at_least_two(p in params(), q in params()) {
        prop_assert!(orthogonality_gap(&p, &q) >= 2.0 - 1e-12);
        prop_assert!((orthogonality_gap(&p, &p) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn gap_scale_and_frequency_terms_are_symmetric(p in params(), q in params()) {
        let strip = |s: &SymParams| SymParams { x0: [0.0; 2], t0: 0.0, ..*s };
        let (a, b) = (strip(&p), strip(&q));
        prop_assert!((orthogonality_gap(&a, &b) - orthogonality_gap(&b, &a)).abs() <= 1e-12 * orthogonality_gap(&a, &b));
    }

    #[test]
    fn gap_is_translation_invariant(p in params(), q in params(), s in prop::array::uniform2(-5.0..5.0f64)) {
        let shift = |v: &SymParams| SymParams { x0: [v.x0[0] + s[0], v.x0[1] + s[1]], ..*v };
        let a = orthogonality_gap(&p, &q);
        prop_assert!((orthogonality_gap(&shift(&p), &shift(&q)) - a).abs() <= 1e-9 * a);
    }
}

fn linear_traj(f: &Field) -> Trajectory {
    evolve(f, &EquationSpec::linear(), &IntegratorSpec::rk4(0.05), 1.0, 1).unwrap()
}

#[test]
fn decoupling_examples() {
    let g = GridSpec::new(8.0, 32).unwrap();
    let mut a = random_field(g, 7);
    let mut b = random_field(g, 8);
    for ((i, _), z) in a.values_mut().indexed_iter_mut() {
        if i >= 16 {
            *z = c(0.0);
        }
    }
    for ((i, _), z) in b.values_mut().indexed_iter_mut() {
        if i < 16 {
            *z = c(0.0);
        }
    }
    let times = vec![0.0, 0.5, 1.0];
    let mk = |f: &Field| Trajectory::from_snapshots(vec![f.clone(); 3], times.clone(), EquationSpec::linear(), IntegratorSpec::rk4(0.5), 1).unwrap();
    assert_eq!(decoupling_l2(&mk(&a), &mk(&b)).unwrap(), 0.0);
    let zero = Field::zeros(g, Representation::Physical);
    assert_eq!(decoupling_l2(&mk(&a), &mk(&zero)).unwrap(), 0.0);

    let g = GridSpec::new(64.0, 128).unwrap();
    let base = linear_traj(&bump(g, [16.0, 32.0], 1.5));
    let mut prev = f64::INFINITY;
    for d in [4.0, 8.0, 16.0] {
        let other = linear_traj(&bump(g, [16.0 + d, 32.0], 1.5));
        let v = decoupling_l2(&base, &other).unwrap();
        assert!(v < prev, "d = {d}: {v} >= {prev}");
        prev = v;
    }
    let short = evolve(&bump(g, [0.0; 2], 1.0), &EquationSpec::linear(), &IntegratorSpec::rk4(0.1), 0.5, 1).unwrap();
    assert!(decoupling_l2(&base, &short).is_err());
}

#[test]
fn decoupling_obeys_cauchy_schwarz() {
    let g = GridSpec::new(16.0, 64).unwrap();
    let a = linear_traj(&bump(g, [8.0, 8.0], 1.0));
    let b = linear_traj(&bump(g, [9.0, 7.5], 2.0).scaled(Complex64::new(0.0, 2.0)));
    let v = decoupling_l2(&a, &b).unwrap();
    let bound = strichartz_norms(&a).unwrap().l4 * strichartz_norms(&b).unwrap().l4;
    assert!(v > 0.0 && v <= bound * (1.0 + 1e-12), "{v} > {bound}");
}

#[test]
fn mass_decoupling_examples() {
    let g = GridSpec::new(8.0, 64).unwrap();
    let f = random_field(g, 9);
    let p = SymParams::new(2.0, [0.0; 2], [0.5, 0.0], 0.2);
    assert!(mass_decoupling_defect(&[(f, p)]).unwrap() <= 1e-12 * 64.0);

    let low = band_limited_field(g, 2, 10);
    let k = 2.0 * PI / 8.0 * 10.0;
    let high = band_limited_field(g, 2, 11).mul_fn(|x, _| Complex64::from_polar(1.0, k * x));
    let id = SymParams::identity();
    let defect = mass_decoupling_defect(&[(low.clone(), id), (high.clone(), id)]).unwrap();
    assert!(defect <= 1e-12 * (mass(&low) + mass(&high)));

    let g = GridSpec::new(64.0, 128).unwrap();
    let phi = bump(g, [32.0, 32.0], 1.5);
    let mut prev = f64::INFINITY;
    for d in [2.0, 4.0, 8.0] {
        let q = SymParams::new(1.0, [0.0; 2], [d, 0.0], 0.0);
        let v = mass_decoupling_defect(&[(phi.clone(), id), (phi.clone(), q)]).unwrap();
        assert!(v < prev, "d = {d}");
        prev = v;
    }
}
