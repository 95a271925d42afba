use std::f64::consts::PI;
use std::process::Command;

use nlslab_core::multipliers::{md_eval_radius, phi_eval};
use nlslab_core::norms::inner_product;
use nlslab_core::GridSpec;
use nlslab_experiments::exp::{dispersive, freqloc, gauge, midpoint, nonsqueeze, persistence, symplectic, torusplane};
use nlslab_experiments::{run, Config, ExpError, Experiment, Outcome, Status, Table};

fn cfg(text: &str) -> Config {
    Config::parse(text).unwrap()
}

#[test]
fn config_parses_comments_lists_and_rejects_junk() {
    let c = cfg("# header\nL = 4.5  # trailing\nD = 4, 16,64\n\nname = band\n");
    assert_eq!(c.get("L", 0.0).unwrap(), 4.5);
    assert_eq!(c.get_list::<u64>("D", &[]).unwrap(), vec![4, 16, 64]);
    assert_eq!(c.get_string("name", "x"), "band");
    assert_eq!(c.get("missing", 7usize).unwrap(), 7);
    c.finish().unwrap();

    assert!(Config::parse("L 4").is_err());
    assert!(Config::parse("L = 1\nL = 2").is_err());
    assert!(cfg("L = abc").get("L", 0.0).is_err());
    let c = cfg("L = 1\nbogus = 2");
    c.get("L", 0.0).unwrap();
    assert!(matches!(c.finish(), Err(ExpError::Config(m)) if m.contains("bogus")));
}

#[test]
fn unknown_keys_fail_before_running() {
    assert!(matches!(
        run(Experiment::Midpoint, &cfg("bogus = 1")),
        Err(ExpError::Config(_))
    ));
}

#[test]
fn experiment_names_round_trip() {
    for e in Experiment::ALL {
        assert_eq!(Experiment::parse(e.name()), Some(e));
    }
    assert_eq!(Experiment::parse("nope"), None);
}

#[test]
fn status_ordering_and_report_layout() {
    assert_eq!(Status::Ok.worst(Status::Clamped), Status::Clamped);
    assert_eq!(Status::Error.worst(Status::Clamped), Status::Error);
    assert_eq!(Status::InvalidBoundaryMass.worst(Status::Ok), Status::InvalidBoundaryMass);

    let mut t = Table::new(&["a", "b"]);
    t.push(vec!["1".into(), "2".into()]);
    assert_eq!(t.to_csv(), "a,b\n1,2\n");
    let mut o = Outcome::new("demo", t);
    o.put("k", 3);
    o.flag(Status::Clamped);
    let text = o.report_text();
    assert!(text.starts_with("experiment: demo\nstatus: clamped\n"));
    assert!(text.contains("k = 3"));
    assert!(text.contains("monotone improvement only"));

    let dir = tempfile::tempdir().unwrap();
    o.write(dir.path(), false).unwrap();
    assert_eq!(std::fs::read_to_string(dir.path().join("results.csv")).unwrap(), "a,b\n1,2\n");
}

#[test]
fn gauss_legendre_is_exact_for_polynomials() {
    let (x, w) = midpoint::gauss_legendre(6);
    assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    for k in 0..12 {
        let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k)).sum();
        let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
        assert!((q - exact).abs() < 1e-14, "degree {k}");
    }
}

#[test]
fn midpoint_rule_examples() {
    let r = midpoint::run(&midpoint::Params::default()).unwrap();
    assert!(r.affine_max_error <= 1e-13);
    assert!(r.quadratic_max_deviation <= 1e-10);
    assert!(r.oscillatory_max_ratio <= 0.25);
    // 1D oscillatory: int_Q e^{2 pi i a xi} = L^-1 e^{2 pi i a xi0} sinc(pi a / L).
    for row in r.rows.iter().filter(|r| r.d == 1 && r.family == midpoint::Family::Oscillatory) {
        let a: f64 = row.parameter.trim_start_matches("a=").parse().unwrap();
        let x = PI * a / row.side;
        let oracle = (1.0 - x.sin() / x).abs() / row.side;
        assert!((row.error - oracle).abs() <= 1e-12 * oracle.max(1e-3), "{row:?}");
    }
    // Small-frequency limit of the ratio is 1/24.
    let p = midpoint::Params {
        frequencies: vec![1e-2],
        dims: vec![1],
        sides: vec![4.0],
        ..Default::default()
    };
    let r = midpoint::run(&p).unwrap();
    assert!((r.oscillatory_max_ratio - 1.0 / 24.0).abs() < 1e-4);
}

#[test]
fn dispersive_peak_at_time_zero_matches_direct_sum() {
    let p = dispersive::Params {
        side: 16.0,
        points: 64,
        t_max: 0.5,
        count: 3,
        doubling: false,
        ..Default::default()
    };
    let r = dispersive::run(&p).unwrap();
    let g = GridSpec::new(16.0, 64).unwrap();
    let mut s = 0.0;
    for a in 0..64 {
        for b in 0..64 {
            s += phi_eval(g.frequency(a).hypot(g.frequency(b)));
        }
    }
    let peak = s / 256.0;
    assert_eq!(r.rows[0].t, 0.0);
    assert!((r.rows[0].sup - peak).abs() <= 1e-12 * peak);
    assert!(r.rows[1..].iter().all(|row| row.sup < peak));
}

#[test]
fn dispersive_flags_small_torus() {
    let p = dispersive::Params {
        side: 16.0,
        points: 64,
        count: 3,
        doubling: false,
        ..Default::default()
    };
    assert!(p.l0() > 16.0);
    let o = dispersive::run(&p).unwrap().outcome();
    assert_ne!(o.status, Status::Ok);
    let (l, n) = dispersive::Params::default().doubling_base().unwrap();
    assert_eq!((l, n), (256.0, 2048));
}

fn small_gauge() -> gauge::Params {
    gauge::Params {
        t_final: 0.05,
        stride: 10,
        ..Default::default()
    }
}

#[test]
fn gauge_trivial_and_scaled_cases() {
    let r = gauge::run(&small_gauge()).unwrap();
    for row in &r.gauge {
        let bound = if row.alpha == 1.0 { 0.0 } else if row.alpha == 0.0 { 1e-12 } else { 1e-6 };
        assert!(row.discrepancy <= bound, "{row:?}");
    }
}

#[test]
fn freqloc_plateau_mode_is_exact() {
    let p = freqloc::Params {
        side: 1.0,
        points: 64,
        ds: vec![4],
        n0: 1.0,
        n1: 1.0,
        eta0: 0.5,
        datum: freqloc::Datum::Mode([1, 0]),
        datum_norm: 1.0,
        t_final: 0.1,
        ..Default::default()
    };
    let r = freqloc::run(&p).unwrap();
    assert_eq!(r.rows[0].alpha, md_eval_radius(4, 0.5).unwrap());
    assert_eq!(r.rows[0].alpha, 1.0);
    assert!(r.rows[0].discrepancy <= 1e-10, "{}", r.rows[0].discrepancy);
}

#[test]
fn freqloc_rejects_empty_band_and_aliasing() {
    let mut p = freqloc::Params {
        n0: 500.0,
        n1: 501.0,
        ..Default::default()
    };
    assert!(matches!(freqloc::run(&p), Err(ExpError::Precondition(_))));
    p = freqloc::Params {
        points: 64,
        ..Default::default()
    };
    assert!(freqloc::run(&p).is_err());
}

fn small_nonsqueeze(t: f64) -> nonsqueeze::Params {
    nonsqueeze::Params {
        t_final: t,
        samples: 4,
        seed: 11,
        ..Default::default()
    }
}

#[test]
fn nonsqueeze_witness_and_time_zero() {
    let p = small_nonsqueeze(0.0);
    let r = nonsqueeze::run(&p).unwrap();
    let s = nonsqueeze::setup(&p).unwrap();
    for (sample, (_, u0)) in r.samples.iter().zip(&s.data) {
        let direct = (inner_product(&s.ell, u0).unwrap() - p.alpha).norm();
        assert!((sample.value - direct).abs() <= 1e-14);
    }
    let p = small_nonsqueeze(0.1);
    let r = nonsqueeze::run(&p).unwrap();
    assert!(r.witness_ok());
    assert!((r.witness.value - r.witness.predicted).abs() <= 1e-12);
    assert!(r.witness.value >= p.radius - 1e-3 - 1e-10);
    assert!(r.samples.iter().all(|s| s.value >= 0.0));
}

#[test]
fn nonsqueeze_mass_cap_breach() {
    let p = nonsqueeze::Params {
        mass_cap: 1.5,
        ..small_nonsqueeze(0.1)
    };
    assert!(matches!(nonsqueeze::run(&p), Err(ExpError::Precondition(_))));
}

#[test]
fn symplectic_trivial_cases() {
    let p = symplectic::Params {
        t_final: 0.0,
        pairs: 2,
        ..Default::default()
    };
    assert_eq!(symplectic::run(&p).unwrap().max_defect(), 0.0);
    let p = symplectic::Params {
        alpha: 0.0,
        t_final: 0.1,
        pairs: 2,
        ..Default::default()
    };
    let r = symplectic::run(&p).unwrap();
    assert!(r.max_defect() <= 1e-10, "{}", r.max_defect());
    assert!(!r.fd_breakdown());
}

#[test]
fn persistence_linear_flow_keeps_ratios() {
    let p = persistence::Params {
        alpha: 0.0,
        t_final: 0.2,
        ..Default::default()
    };
    let r = persistence::run(&p).unwrap();
    for row in &r.rows {
        for x in row.ratios {
            assert!((x - 1.0).abs() <= 1e-12, "{row:?}");
        }
    }
    let r = persistence::run(&persistence::Params {
        t_final: 0.2,
        ..Default::default()
    })
    .unwrap();
    for row in &r.rows {
        assert!((row.ratios[0] - 1.0).abs() <= 1e-9);
    }
}

fn one_rung(norm: f64, ell: f64) -> torusplane::Params {
    torusplane::Params {
        rungs: vec![torusplane::Rung {
            m: 4.0,
            side: 2.5,
            points: 128,
        }],
        datum_norm: norm,
        ell_norm: ell,
        ..Default::default()
    }
}

#[test]
fn torusplane_zero_functional_and_budget() {
    let r = torusplane::run(&one_rung(1.5, 0.0)).unwrap();
    let rung = &r.rungs[0];
    assert!(rung.snapshots.iter().all(|s| s.pairing == 0.0));
    assert!(rung.budget_ok());
    assert!(rung.boundary_ok());
    assert_eq!(r.outcome().status, Status::Clamped);
}

#[test]
fn torusplane_small_data_scales_linearly() {
    let rel = |norm: f64| {
        let r = torusplane::run(&one_rung(norm, 1.0)).unwrap();
        assert!(r.rungs[0].budget_ok());
        r.rungs[0].linf_l2 / norm
    };
    let (a, b) = (rel(1e-4), rel(2e-4));
    assert!((a - b).abs() <= 1e-6 * a, "{a:e} {b:e}");
}

#[test]
fn cli_writes_outputs_and_sets_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_nlslab");
    let ok = Command::new(bin)
        .args(["midpoint", "--out"])
        .arg(dir.path().join("m"))
        .status()
        .unwrap();
    assert!(ok.success());
    let report = std::fs::read_to_string(dir.path().join("m/report.txt")).unwrap();
    assert!(report.contains("status: ok"));

    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "bogus = 1\n").unwrap();
    let st = Command::new(bin)
        .args(["midpoint", "--config"])
        .arg(&bad)
        .arg("--out")
        .arg(dir.path().join("b"))
        .status()
        .unwrap();
    assert!(!st.success());
    let report = std::fs::read_to_string(dir.path().join("b/report.txt")).unwrap();
    assert!(report.contains("status: error"));
}

#[test]
fn fixed_seed_gives_identical_csv_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("ns.cfg");
    std::fs::write(&conf, "T = 0.05\nsamples = 3\n").unwrap();
    let bin = env!("CARGO_BIN_EXE_nlslab");
    let mut outputs = Vec::new();
    for (k, threads) in ["1", "2"].iter().enumerate() {
        let out = dir.path().join(format!("o{k}"));
        let st = Command::new(bin)
            .args(["nonsqueeze", "--seed", "5", "--threads", threads, "--dump-fields", "--config"])
            .arg(&conf)
            .arg("--out")
            .arg(&out)
            .status()
            .unwrap();
        assert!(st.success());
        outputs.push(std::fs::read(out.join("results.csv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}
