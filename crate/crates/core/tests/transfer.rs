mod common;

use common::{c, random_field};
use nlslab_core::dynamics::{evolve, EquationSpec, IntegratorSpec};
use nlslab_core::norms::mass;
use nlslab_core::transfer::{
    boundary_mass, build_cutoffs, cover_ratio, find_quiet_interval, mass_outside, pull_back, push_forward,
    CutoffParams, Placement,
};
use nlslab_core::{Complex64, Error, Field, GridSpec, Representation};
use proptest::prelude::*;

fn integral(f: &Field) -> Complex64 {
    f.to_physical().values().iter().sum::<Complex64>() * f.grid().spacing().powi(2)
}

fn box_bump(grid: GridSpec, lo: [f64; 2], hi: [f64; 2]) -> Field {
    Field::from_fn(grid, |x, y| {
        if x >= lo[0] && x < hi[0] && y >= lo[1] && y < hi[1] {
            Complex64::new(1.0 + x.sin(), y.cos())
        } else {
            c(0.0)
        }
    })
}

/// `D = M = 1`, `eps = 1/2`, with `T` chosen so that the stretched unit is `unit`.
fn params_for_unit(unit: f64, mass_cap: f64) -> CutoffParams {
    CutoffParams::new(1.0, 1.0, unit / 12.0, 0.5, mass_cap)
}

#[test]
fn covering_examples() {
    let big = GridSpec::new(16.0, 64).unwrap();
    assert_eq!(cover_ratio(&big, 4.0).unwrap(), 4);
    assert!(matches!(cover_ratio(&big, 3.0), Err(Error::GridMismatch(_))));

    let f = box_bump(big, [4.5, 8.25], [7.5, 11.0]);
    let folded = push_forward(&f, 4.0).unwrap();
    assert_eq!(folded.grid().n(), 16);
    assert!((integral(&folded) - integral(&f)).norm() <= 1e-12 * integral(&f).norm());
    let back = pull_back(&folded, &big, &Placement::Domain([16, 32])).unwrap();
    assert_eq!(back, f);

    let g = random_field(GridSpec::new(4.0, 16).unwrap(), 1);
    let once = push_forward(&pull_back(&g, &big, &Placement::Domain([5, 9])).unwrap(), 4.0).unwrap();
    assert_eq!(once, g);
    let tiled = push_forward(&pull_back(&g, &big, &Placement::Tile).unwrap(), 4.0).unwrap();
    for (a, b) in tiled.values().iter().zip(g.values()) {
        assert!((a - 16.0 * b).norm() <= 1e-13);
    }
    assert!(pull_back(&g, &GridSpec::new(16.0, 128).unwrap(), &Placement::Tile).is_err());
}

#[test]
fn adjacent_copies_fold_onto_their_sum() {
    let big = GridSpec::new(16.0, 64).unwrap();
    let small = GridSpec::new(8.0, 32).unwrap();
    let bump = |shift: f64| {
        Field::from_fn(big, move |x, y| {
            let r2 = (x - 3.0 - shift).powi(2) + (y - 4.0).powi(2);
            c(if r2 < 4.0 { (1.0 - r2 / 4.0).powi(3) } else { 0.0 })
        })
    };
    let shifted = Field::from_fn(small, |x, y| {
        let r2 = (x - 3.0).powi(2) + (y - 4.0).powi(2);
        c(if r2 < 4.0 { 2.0 * (1.0 - r2 / 4.0).powi(3) } else { 0.0 })
    });
    let folded = push_forward(&bump(0.0).add(&bump(8.0)).unwrap(), 8.0).unwrap();
    for (a, b) in folded.values().iter().zip(shifted.values()) {
        assert!((a - b).norm() <= 1e-14);
    }
}

#[test]
fn boundary_mass_examples() {
    let g = GridSpec::new(16.0, 64).unwrap();
    let f = box_bump(g, [6.0, 6.0], [10.0, 10.0]);
    assert_eq!(boundary_mass(&f, 5.0).unwrap(), 0.0);
    assert!(boundary_mass(&f, 7.0).unwrap() > 0.0);

    let uniform = Field::from_fn(g, |_, _| Complex64::new(0.6, 0.8));
    for m in [1.0, 2.5, 4.0] {
        let inner: f64 = 16.0 - 2.0 * m;
        let ratio = 1.0 - (inner / 16.0).powi(2);
        let got = boundary_mass(&uniform, m).unwrap();
        assert!((got - mass(&uniform) * ratio).abs() <= 1e-12, "margin {m}");
    }
    assert!(boundary_mass(&uniform, 8.0).is_err());
}

proptest! {
    #[test]
    fn boundary_mass_is_monotone(seed in 0u64..1000, a in 0.0..7.9f64, b in 0.0..7.9f64) {
        let g = GridSpec::new(16.0, 32).unwrap();
        let f = random_field(g, seed);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(boundary_mass(&f, lo).unwrap() <= boundary_mass(&f, hi).unwrap());
        prop_assert!(boundary_mass(&f, hi).unwrap() <= mass(&f) * (1.0 + 1e-12));
    }

    #[test]
    fn push_forward_preserves_integral(seed in 0u64..1000, k in 0u32..3) {
        let ratio = 1usize << k;
        let big = GridSpec::new(8.0 * ratio as f64, 16 * ratio).unwrap();
        let f = random_field(big, seed);
        let folded = push_forward(&f, 8.0).unwrap();
        prop_assert!((integral(&folded) - integral(&f)).norm() <= 1e-12 * (1.0 + integral(&f).norm()));
    }
}

#[test]
fn quiet_interval_of_localized_datum_is_empty() {
    let unit = 1.0;
    let g = GridSpec::new(128.0, 256).unwrap();
    let p = params_for_unit(unit, 0.1);
    let f = Field::from_fn(g, |x, y| {
        let near = |t: f64| t <= 16.0 || t >= 112.0;
        c(if near(x) && near(y) { 0.01 } else { 0.0 })
    });
    for axis in [1, 2] {
        let q = find_quiet_interval(&f, axis, &p).unwrap();
        assert_eq!(q.strip_mass, 0.0);
        assert!(q.center - q.half_width >= 32.0 - 1e-12 && q.center + q.half_width <= 64.0 + 1e-12);
        assert!(q.guaranteed());
    }
}

#[test]
fn quiet_interval_of_uniform_density() {
    let g = GridSpec::new(128.0, 256).unwrap();
    let p = params_for_unit(1.0, 0.1);
    let f = Field::from_fn(g, |x, _| Complex64::from_polar(0.01, x));
    let q = find_quiet_interval(&f, 1, &p).unwrap();
    let expect = mass(&f).sqrt() * (2.0 * q.half_width / 128.0).sqrt();
    assert!((q.strip_mass - expect).abs() <= 1e-12 * expect);
    assert_eq!(q.count, 1);
}

#[test]
fn quiet_interval_avoids_a_bubble() {
    let g = GridSpec::new(256.0, 256).unwrap();
    let p = params_for_unit(0.5, 0.1);
    let noise = random_field(g, 5).scaled(c(1e-3));
    let bubble = Field::from_fn(g, |x, y| c(0.05 * (-((x - 75.0).powi(2) + (y - 20.0).powi(2)) / 4.0).exp()));
    let f = noise.add(&bubble).unwrap();
    let q = find_quiet_interval(&f, 1, &p).unwrap();

    // Direct scan over grid-aligned centers.
    let w = q.half_width;
    let strip = |c0: f64| -> f64 {
        let phys = f.to_physical();
        let mut s = 0.0;
        for ((a, _), z) in phys.values().indexed_iter() {
            let x = g.coord(a);
            let d = (x - c0 + 128.0).rem_euclid(256.0) - 128.0;
            if d >= -w && d < w {
                s += z.norm_sqr();
            }
        }
        s.sqrt() * g.spacing()
    };
    let mut best = f64::INFINITY;
    let mut c0 = 64.0 + w;
    while c0 <= 128.0 - w {
        best = best.min(strip(c0));
        c0 += g.spacing();
    }
    assert!((q.strip_mass - best).abs() <= 1e-12 * best);
    assert!(q.strip_mass < strip(75.0));
    assert!((q.center - 75.0).abs() > w);
}

#[test]
fn quiet_interval_geometry_errors_and_clamp() {
    let g = GridSpec::new(64.0, 128).unwrap();
    let f = random_field(g, 6);
    let p = params_for_unit(1.0, 1.0);
    assert!(matches!(find_quiet_interval(&f, 1, &p), Err(Error::Geometry(_))));
    assert!(find_quiet_interval(&f, 3, &p).is_err());
    let clamped = CutoffParams { clamp: Some(0.25), ..p };
    let q = find_quiet_interval(&f, 2, &clamped).unwrap();
    assert!(q.clamped && !q.guaranteed());
    assert!((q.half_width - 2.5).abs() < 1e-12);
}

#[test]
fn cutoff_family_invariants_on_resolved_grid() {
    let n = 512;
    let big = GridSpec::new(32.0, n).unwrap();
    let h = big.spacing();
    let unit = 16.0 * h;
    let p = params_for_unit(unit, 0.1);
    let fam = build_cutoffs([10.0, 20.0], &p, 32.0, &big).unwrap();
    let rep = fam.verify(None).unwrap();
    for (j, gm) in rep.gradient_max.iter().enumerate() {
        assert!(*gm <= rep.gradient_bound * (1.0 + 1e-3), "level {j}: {gm} > {}", rep.gradient_bound);
    }
    assert!(rep.product_defect <= 1e-12);
    assert!(rep.min_distance >= rep.distance_bound);
    assert!((rep.gradient_bound - 1.0 / p.nominal_unit()).abs() < 1e-15);

    for j in 0..4 {
        for (a, b) in fam.levels[j].values().iter().zip(fam.levels[j + 1].values()) {
            assert!(a.re <= b.re && a.im == 0.0);
        }
    }
    let ia = ((10.0 + 16.0) / h) as usize;
    let ib = ((20.0 + 16.0 - 32.0) / h) as usize;
    for chi in &fam.levels {
        assert_eq!(chi.values()[[ia, ib]], c(1.0));
    }
    let cut = [(10.0 / h) as usize, (20.0 / h) as usize];
    for chi in &fam.levels {
        assert_eq!(chi.values()[[cut[0], ib]], c(0.0));
        assert_eq!(chi.values()[[ia, cut[1]]], c(0.0));
    }
}

#[test]
fn cutoffs_absorb_datum_after_quiet_cut() {
    let n = 1024;
    let l = 128.0;
    let g = GridSpec::new(l, n).unwrap();
    let unit = 8.0 * g.spacing();
    let eps = 0.5;
    let cap = 0.1;
    let p = params_for_unit(unit, cap);
    let u0 = random_field(g, 8);
    let u0 = u0.scaled(c(cap / mass(&u0).sqrt()));
    let q1 = find_quiet_interval(&u0, 1, &p).unwrap();
    let q2 = find_quiet_interval(&u0, 2, &p).unwrap();
    assert!(q1.guaranteed() && q2.guaranteed());
    assert!(q1.strip_mass <= eps / 4.0 && q2.strip_mass <= eps / 4.0);

    let fam = build_cutoffs([q1.center, q2.center], &p, l, &g).unwrap();
    let rep = fam.verify(Some(&u0)).unwrap();
    for o in rep.outside_norm.unwrap() {
        assert!(o <= eps);
        assert!(o <= q1.strip_mass + q2.strip_mass + 1e-12);
    }
}

#[test]
fn unwrap_lands_in_one_fundamental_domain() {
    let small = 16.0;
    let big = GridSpec::new(32.0, 256).unwrap();
    let sg = GridSpec::new(small, 128).unwrap();
    let unit = 0.5;
    let p = params_for_unit(unit, 0.1);
    let fam = build_cutoffs([5.0, 11.0], &p, small, &big).unwrap();
    assert_eq!(fam.window_start, [5.0, 11.0]);
    let u0 = random_field(sg, 9);
    for j in [0, 4] {
        let lifted = fam.unwrap(&u0, j).unwrap();
        let folded = push_forward(&lifted, small).unwrap();
        let direct = fam.on_torus(j).unwrap().mul_pointwise(&u0).unwrap();
        assert_eq!(folded, direct);
        assert!((mass(&lifted) - mass(&direct)).abs() <= 1e-12 * mass(&direct));
    }
    let dir = tempfile::tempdir().unwrap();
    fam.save(dir.path()).unwrap();
    for j in 0..5 {
        assert!(dir.path().join(format!("chi_{j}.nlsf")).exists());
    }
    assert!(dir.path().join("manifest.txt").exists());

    let four = GridSpec::new(64.0, 512).unwrap();
    let fam4 = build_cutoffs([5.0, 11.0], &p, small, &four).unwrap();
    assert_eq!(fam4.window_start, [21.0, 27.0]);
    assert!(build_cutoffs([5.0, 11.0], &params_for_unit(1.0, 0.1), small, &big).is_err());
    assert!(build_cutoffs([5.01, 11.0], &p, small, &big).is_err());
}

#[test]
fn mass_outside_examples() {
    let g = GridSpec::new(8.0, 32).unwrap();
    let f = random_field(g, 10);
    let traj = evolve(&f, &EquationSpec::nls(), &IntegratorSpec::rk4(0.01), 0.1, 2).unwrap();
    let one = Field::from_fn(g, |_, _| c(1.0));
    assert!(mass_outside(&traj, &one).unwrap().values().iter().all(|&v| v == 0.0));
    let zero = Field::zeros(g, Representation::Physical);
    let s = mass_outside(&traj, &zero).unwrap();
    for (v, m) in s.values().iter().zip(traj.mass.values()) {
        assert!((v - m).abs() <= 1e-12 * m);
    }
    assert!(mass_outside(&traj, &Field::zeros(GridSpec::new(8.0, 16).unwrap(), Representation::Physical)).is_err());
}
