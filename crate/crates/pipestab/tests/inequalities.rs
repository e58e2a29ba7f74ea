use pipestab::bvp::sub_grid;
use pipestab::inequalities::{
    airy_suite, check_a_integral, check_hardy1, check_hardy2, check_interp, harmonic_suite, run_harness, HarnessConfig,
};
use pipestab::testfn::{BcKind, TestFunction, TestFunctionSpec};
use pipestab::{build_grid, FourierMode, C64};

#[test]
fn harness_explicit_constants_hold() {
    let rep = run_harness(&HarnessConfig::default()).unwrap();
    for t in &rep.tallies {
        println!(
            "{:28} checked {:6} passed {:6} failed {} skipped {:6} errors {} max_c {:.4}",
            t.id, t.checked, t.passed, t.failed, t.skipped, t.errors, t.max_c_eff
        );
    }
    assert_eq!(rep.hard_failures(), 0);
    for id in
        ["interp_l1", "sobolev_wall_slope", "w1_coercive", "energy_key", "uw_weighted_hardy", "uw_elliptic_energy"]
    {
        let t = rep.tally(id).unwrap();
        assert_eq!((t.checked, t.passed), (1000, 1000), "{id}");
    }
    let la = rep.tally("coefficient_triangle").unwrap();
    assert_eq!(la.checked + la.skipped, 100_000);
    assert_eq!(la.passed, la.checked);
    assert!(rep.tally("hardy_lambda").unwrap().max_c_eff <= 20.0);
    assert!(rep.tally("interp_weighted").unwrap().max_c_eff <= 10.0);
    assert!(rep.tally("sobolev_wall_slope_l1").unwrap().max_c_eff <= 9.0);
    for t in &rep.tallies {
        assert!(t.max_c_eff.is_finite(), "{}", t.id);
    }
}

#[test]
fn harness_is_reproducible() {
    let cfg = HarnessConfig { seed: 7, samples: 40, scalar_samples: 2000, grid_n: 48 };
    let a = run_harness(&cfg).unwrap();
    let b = run_harness(&cfg).unwrap();
    assert_eq!(a, b);
    let c = run_harness(&HarnessConfig { seed: 8, ..cfg }).unwrap();
    assert_ne!(a.rows, c.rows);
}

#[test]
fn hardy_lambda_stable_in_lambda() {
    let g = build_grid(64).unwrap();
    let mode = FourierMode::new(1, 1.0);
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for seed in 0..50 {
        let f = TestFunction::generate(TestFunctionSpec::new(seed, BcKind::Wall)).unwrap().field(&g);
        for lam in [1.0, 3.0, 10.0, 30.0, 100.0] {
            let c = check_hardy1(&f, lam, mode).unwrap().c_eff;
            lo = lo.min(c);
            hi = hi.max(c);
        }
    }
    assert!(hi / lo <= 10.0, "{lo} {hi}");
}

#[test]
fn hardy_quotient_stable_near_wall() {
    let g = build_grid(64).unwrap();
    let mode = FourierMode::new(2, 1.0);
    let mut per_rt = Vec::new();
    for rt in [0.3, 0.6, 0.9, 1.0] {
        let mut m = 0.0f64;
        for seed in 0..50 {
            let f = TestFunction::generate(TestFunctionSpec::new(seed, BcKind::Interior(rt)).pole_order(2)).unwrap();
            let r = check_hardy2(&f, rt, mode, &g).unwrap();
            assert!(r.c_eff.is_finite() && r.c_eff > 0.0);
            m = m.max(r.c_eff);
        }
        per_rt.push(m);
    }
    // bounded, and no growth as r̃ → 1⁻
    assert!(per_rt.iter().all(|&c| c <= 1.0), "{per_rt:?}");
    assert!(per_rt[3] <= 10.0 * per_rt[2], "{per_rt:?}");
}

#[test]
fn hardy_quotient_matches_pointwise_away_from_root() {
    // away from r̃ the exact division must agree with plain division
    let g = build_grid(64).unwrap();
    let f = TestFunction::generate(TestFunctionSpec::new(3, BcKind::Interior(0.6))).unwrap();
    let q = f.quotient_field(0.6, &g);
    for (k, &r) in g.nodes().iter().enumerate() {
        if (r - 0.6).abs() > 0.05 {
            let want = f.eval(r) / (r - 0.6);
            assert!((q.values()[k] - want).norm() <= 1e-10 * (1.0 + want.norm()));
        }
    }
}

#[test]
fn interp_on_subinterval() {
    let g = build_grid(64).unwrap();
    let sg = sub_grid(&g, 0.5).unwrap();
    let f = TestFunction::generate(TestFunctionSpec::new(1, BcKind::BothEnds).on(0.5)).unwrap();
    let (a, b) = check_interp(&f.field(&sg), 0.25, FourierMode::new(1, 1.0)).unwrap();
    assert_eq!(a.pass, Some(true));
    assert!(b.c_eff.is_finite() && b.c_eff > 0.0);
}

#[test]
fn a_integral_examples() {
    let r = check_a_integral(0.5, FourierMode::new(1, 1.0), 1e-3, C64::new(0.8, 0.0)).unwrap();
    assert!(r.c_eff > 0.0 && r.c_eff <= 8.0, "{}", r.c_eff);
    let one = check_a_integral(1.0, FourierMode::new(1, 1.0), 1e-3, C64::new(0.8, 0.0)).unwrap();
    assert!(one.trivial);
    assert!(check_a_integral(0.0, FourierMode::new(1, 1.0), 1e-3, C64::new(0.8, 0.0)).is_err());
}

#[test]
fn airy_properties() {
    let rows = airy_suite().unwrap();
    for r in &rows {
        match r.pass {
            Some(p) => assert!(p, "{} at {:?}: {} vs {}", r.id, r.case, r.left, r.right),
            None if r.id == "airy_profile_ode" => assert!(r.left <= 1e-6, "{}", r.left),
            None => assert!(r.c_eff <= 10.0, "{}: {}", r.id, r.c_eff),
        }
    }
    assert!(rows.iter().any(|r| r.id == "airy_profile_envelope"));
}

#[test]
fn harmonic_bounds() {
    let rows = harmonic_suite().unwrap();
    assert_eq!(rows.len(), 27 + 6);
    assert!(rows.iter().all(|r| r.pass == Some(true)), "{:?}", rows.iter().find(|r| r.pass != Some(true)));
}
