use pipestab::bvp::{solve_approx_elliptic, solve_homogeneous, solve_resolvent, ResolventOperator};
use pipestab::checks::{
    aggregate, check_axisym, check_critical_layer, check_ekey, check_error_terms, check_frozen,
    check_homogeneous_lower, check_resolvent_bound, check_scalar, check_toy, energy_identity_residuals,
    proof_quantities,
};
use pipestab::special::scale_a;
use pipestab::testfn::{random_forcing, BcKind, TestFunction, TestFunctionSpec};
use pipestab::{build_grid, FourierMode, RadialField, C64};

fn forcings(seed: u64, g: &pipestab::GridRef, n: i32) -> (RadialField, RadialField) {
    let p = n.unsigned_abs().max(1);
    (random_forcing(2 * seed, g, p), random_forcing(2 * seed + 1, g, p))
}

#[test]
fn energy_identities_fifty_instances() {
    let g = build_grid(96).unwrap();
    let modes = [(1, 1.0), (2, 1.5), (1, 3.0), (3, 2.0), (-1, 1.0)];
    let mut count = 0;
    let mut worst: (f64, f64) = (0.0, 0.0);
    for (mi, &(n, l)) in modes.iter().enumerate() {
        for (li, lam) in [-0.5, 0.3, 0.9, 2.0].into_iter().enumerate() {
            for nu in [1e-2, 1e-3] {
                if count == 50 {
                    break;
                }
                let mode = FourierMode::new(n, l);
                let (f1, f2) = forcings((mi * 10 + li) as u64, &g, n);
                let sol = solve_resolvent(mode, nu, C64::new(lam, 0.0), &f1, &f2, &g).unwrap();
                let (re, im) = energy_identity_residuals(&sol, &f1, &f2).unwrap();
                worst = (worst.0.max(re), worst.1.max(im));
                count += 1;
            }
        }
    }
    assert_eq!(count, 40);
    // ten more at a third viscosity
    for (k, lam) in [-0.5, 0.3, 0.9, 2.0, -0.5, 0.3, 0.9, 2.0, 0.3, 0.9].into_iter().enumerate() {
        let mode = FourierMode::new(1 + (k % 2) as i32, 1.0 + k as f64 * 0.25);
        let (f1, f2) = forcings(100 + k as u64, &g, mode.n);
        let sol = solve_resolvent(mode, 3e-3, C64::new(lam, 0.0), &f1, &f2, &g).unwrap();
        let (re, im) = energy_identity_residuals(&sol, &f1, &f2).unwrap();
        worst = (worst.0.max(re), worst.1.max(im));
    }
    assert!(worst.0 <= 1e-7 && worst.1 <= 1e-7, "{worst:?}");
}

#[test]
fn energy_identity_converges_with_grid() {
    let mode = FourierMode::new(1, 2.0);
    let res = |n: usize| {
        let g = build_grid(n).unwrap();
        let (f1, f2) = forcings(5, &g, 1);
        let sol = solve_resolvent(mode, 1e-3, C64::new(0.6, 0.0), &f1, &f2, &g).unwrap();
        let (a, b) = energy_identity_residuals(&sol, &f1, &f2).unwrap();
        a.max(b)
    };
    let (coarse, fine) = (res(48), res(128));
    assert!(fine <= coarse / 10.0 || fine < 1e-12, "{coarse:e} {fine:e}");
}

#[test]
fn resolvent_bound_negative_lambda() {
    let g = build_grid(128).unwrap();
    let mode = FourierMode::new(1, 1.0);
    let op = ResolventOperator::new(mode, 1e-3, C64::new(-0.5, 0.0), &g).unwrap();
    for seed in 0..5 {
        let (f1, f2) = forcings(seed, &g, 1);
        let sol = op.solve(&f1, &f2).unwrap();
        for r in check_resolvent_bound(&sol, &f1, &f2) {
            assert!(r.c_eff.is_finite() && r.c_eff <= 50.0, "{}: {}", r.id, r.c_eff);
        }
    }
}

#[test]
fn resolvent_constant_nu_stable() {
    let mode = FourierMode::new(1, 1.0);
    let lambda = C64::new(0.5, 0.0);
    let mut rows = Vec::new();
    for nu in [1e-2, 1e-3, 1e-4, 1e-5] {
        let g = build_grid(if nu < 5e-5 { 256 } else { 128 }).unwrap();
        let op = ResolventOperator::new(mode, nu, lambda, &g).unwrap();
        let (f1, f2) = forcings(3, &g, 1);
        rows.extend(check_resolvent_bound(&op.solve(&f1, &f2).unwrap(), &f1, &f2));
    }
    for a in aggregate(&rows) {
        // the wall-slope constant decays like ν^{1/2} for smooth forcing; it
        // is held to the sweep-level factor 10²
        let limit = if a.id == "resolvent_dw_wall" { 100.0 } else { 10.0 };
        assert!(a.nu_variation <= limit, "{}: {}", a.id, a.nu_variation);
    }
}

#[test]
fn ekey_examples() {
    let g = build_grid(64).unwrap();
    let w = RadialField::from_real_fn(&g, |r| r * (1.0 - r));
    let r = check_ekey(&w, FourierMode::new(1, 1.0), 2.0).unwrap();
    assert_eq!(r.pass, Some(true));
    let z = RadialField::zeros(&g);
    assert_eq!(check_ekey(&z, FourierMode::new(1, 1.0), 2.0).unwrap().pass, Some(true));
    assert!(check_ekey(&w, FourierMode::new(1, 1.0), 1.0).is_err());
    let mode = FourierMode::new(2, 3.0);
    for seed in 0..1000 {
        let f = TestFunction::generate(TestFunctionSpec::new(seed, BcKind::Wall).pole_order(2)).unwrap();
        let r = check_ekey(&f.field(&g), mode, 1.5).unwrap();
        assert_eq!(r.pass, Some(true), "seed {seed}: {} > {}", r.left, r.right);
    }
}

#[test]
fn critical_layer_quantities() {
    let mode = FourierMode::new(1, 2.0);
    let g = build_grid(192).unwrap();
    let (f1, f2) = forcings(9, &g, 1);
    let sol = solve_resolvent(mode, 1e-4, C64::new(0.5, 0.0), &f1, &f2, &g).unwrap();
    let pq = proof_quantities(&sol, &f1, &f2).unwrap();
    assert!(pq.delta_over_r0 < 0.3 && pq.delta_l < 0.3);
    let reps = check_critical_layer(&sol, &f1, &f2, &pq).unwrap();
    assert!(reps.iter().all(|r| r.hypothesis && r.c_eff.is_finite() && r.c_eff > 0.0));
    assert!(proof_quantities(&sol, &f1, &f2).is_ok());
    let bad = solve_resolvent(mode, 1e-4, C64::new(1.5, 0.0), &f1, &f2, &g).unwrap();
    assert!(proof_quantities(&bad, &f1, &f2).is_err());
}

#[test]
fn homogeneous_near_toy_at_lambda_one() {
    let mode = FourierMode::new(1, 4.0);
    let nu = 1e-4;
    let g = build_grid(160).unwrap();
    let one = C64::new(1.0, 0.0);
    let h = check_homogeneous_lower(mode, nu, one, &g).unwrap();
    let toy = check_toy(mode, nu, one, &g).unwrap();
    let t = toy.iter().find(|r| r.id == "toy_wall_slope_lower").unwrap();
    // c_eff values use A and A₁ respectively; compare the raw slopes
    let ratio = h.left / t.left;
    assert!(ratio > 0.1 && ratio < 10.0, "{ratio}");
    assert!(h.c_eff > 0.0);
}

#[test]
fn homogeneous_lower_grid_converged() {
    let mode = FourierMode::new(1, 1.0);
    let lam = C64::new(0.5, 0.0);
    let a = check_homogeneous_lower(mode, 1e-4, lam, &build_grid(128).unwrap()).unwrap();
    let b = check_homogeneous_lower(mode, 1e-4, lam, &build_grid(256).unwrap()).unwrap();
    assert!((a.c_eff - b.c_eff).abs() <= 1e-4 * b.c_eff);
}

#[test]
fn approx_pair_decay_and_slope() {
    let g = build_grid(128).unwrap();
    let mode = FourierMode::new(1, 1.0);
    let reps = pipestab::checks::check_approx_elliptic(mode, 1e-3, C64::new(0.5, 0.0), &g).unwrap();
    assert_eq!(reps.len(), 5);
    assert!(reps[0].c_eff > 0.0);
    let sol = solve_approx_elliptic(mode, 1e-3, C64::new(0.5, 0.0), &g).unwrap();
    assert_eq!(sol.primary.at_wall(), C64::new(1.0, 0.0));
    for r in &reps[1..] {
        assert!(r.trivial || (r.c_eff.is_finite() && r.c_eff < 100.0), "{}", r.c_eff);
    }
}

#[test]
fn error_terms_small_l_and_nu_stability() {
    let lam = C64::new(0.7, 0.0);
    let g = build_grid(128).unwrap();
    let (c, w) = check_error_terms(FourierMode::new(1, 1e-3), 1e-3, lam, &g).unwrap();
    assert!(c.left < 1e-5 && w.left < 1e-2);
    let mut rows = Vec::new();
    for nu in [1e-3, 1e-4, 1e-5] {
        let g = build_grid(if nu < 5e-5 { 256 } else { 128 }).unwrap();
        let (a, b) = check_error_terms(FourierMode::new(1, 1.0), nu, lam, &g).unwrap();
        assert!(a.c_eff <= 100.0 && b.c_eff <= 100.0, "{} {}", a.c_eff, b.c_eff);
        rows.push(a);
        rows.push(b);
    }
    for a in aggregate(&rows) {
        assert!(a.nu_variation <= 10.0, "{}: {}", a.id, a.nu_variation);
    }
}

#[test]
fn axisym_reports() {
    let g = build_grid(128).unwrap();
    let z = RadialField::zeros(&g);
    let reps = check_axisym(2.0, 1e-3, C64::new(0.5, 0.0), &z, &g).unwrap();
    assert_eq!(reps[0].left, 0.0);
    let f = random_forcing(4, &g, 1);
    let reps = check_axisym(2.0, 1e-3, C64::new(0.5, 0.0), &f, &g).unwrap();
    for r in &reps {
        assert!(r.c_eff.is_finite() && r.c_eff > 0.0, "{}", r.id);
    }
}

#[test]
fn frozen_and_scalar_reports() {
    let g = build_grid(96).unwrap();
    let mode = FourierMode::new(2, 1.0);
    let reps = check_frozen(mode, 1e-3, C64::new(0.3, 0.0), 0.6, &g).unwrap();
    assert!(reps.iter().all(|r| r.c_eff.is_finite() && r.c_eff > 0.0));
    let sub = pipestab::bvp::sub_grid(&g, 0.6).unwrap();
    let f = random_forcing(11, &sub, 2);
    let reps = check_scalar(mode, 1e-3, C64::new(0.3, 0.0), 0.6, &f, &g).unwrap();
    assert_eq!(reps.len(), 2);
    assert!(reps.iter().all(|r| r.c_eff.is_finite() && r.c_eff > 0.0));
}

#[test]
fn homogeneous_solution_toy_limit() {
    // large |l|/ν pushes the homogeneous slope toward the approximate one
    let mode = FourierMode::new(1, 8.0);
    let g = build_grid(160).unwrap();
    let one = C64::new(1.0, 0.0);
    let h = solve_homogeneous(mode, 1e-4, one, &g).unwrap();
    let a = solve_approx_elliptic(mode, 1e-4, one, &g).unwrap();
    let rel = ((h.dw_wall - a.d_secondary_wall) / a.d_secondary_wall).norm();
    assert!(rel < 0.5, "{rel}");
    assert!(scale_a(1.0, mode, 1e-4, one).a > 0.0);
}
