use pipestab::bvp::{
    constraint_residual, solve_axisym, solve_homogeneous, solve_resolvent, solve_scalar, AxisymKind, Problem,
    ScalarKind, SystemKind,
};
use pipestab::manufactured::{manufactured_forcing, mode_for, recover, rel_err};
use pipestab::operators::assemble;
use pipestab::{build_grid, FourierMode, RadialField, C64};

#[test]
fn manufactured_recovery_every_kind() {
    for kind in SystemKind::ALL {
        let r = recover(kind, mode_for(kind, 1, 1.0), 1e-2, C64::new(0.5, 0.0), 0.7, 96).unwrap();
        assert!(r.error < 1e-9, "{kind:?}: {:e}", r.error);
        assert!(r.residual < 1e-8, "{kind:?}: residual {:e}", r.residual);
    }
}

#[test]
fn manufactured_scalar_on_subinterval() {
    let r = recover(SystemKind::ScalarDhat1, FourierMode::new(1, 2.0), 1e-3, C64::new(0.4, 0.0), 0.7, 96).unwrap();
    assert!(r.error < 1e-9, "{:e}", r.error);
}

#[test]
fn public_resolvent_matches_manufactured() {
    let g = build_grid(96).unwrap();
    let mode = FourierMode::new(1, 1.0);
    let (nu, lambda) = (1e-2, C64::new(0.5, 0.0));
    let ops = assemble(mode, &g);
    let w = RadialField::from_real_fn(&g, |r| r * (1.0 - r).powi(3) * (1.0 + r * r));
    let mut w1 = ops.lap1(&w);
    let last = g.n();
    w1.values_mut()[0] = C64::new(0.0, 0.0);
    w1.values_mut()[last] = C64::new(0.0, 0.0);
    let u = RadialField::from_real_fn(&g, |r| r * (1.0 - r) * (2.0 - r));
    let p = Problem::new(SystemKind::ResolventArtificial, mode, nu, lambda);
    let f = manufactured_forcing(&p, &[u.clone(), w1.clone(), w.clone()]);
    let sol = solve_resolvent(mode, nu, lambda, &f[0], &f[1], &g).unwrap();
    assert!(rel_err(&sol.u, &u) < 1e-9);
    assert!(rel_err(&sol.w, &w) < 1e-9);
    assert!(rel_err(&sol.w1, &w1) < 1e-9);
    assert!(constraint_residual(&sol) < 1e-8);
    assert!((sol.u.sub(&sol.w1).unwrap().values()[3] - sol.u1.values()[3]).norm() == 0.0);
}

fn common_nodes_err(coarse: &RadialField, fine: &RadialField) -> f64 {
    // node j of the N grid is node 2j of the 2N grid
    let num = coarse.values().iter().enumerate().map(|(j, v)| (v - fine.values()[2 * j]).norm()).fold(0.0, f64::max);
    num / coarse.max_abs()
}

#[test]
fn resolvent_grid_refinement() {
    let mode = FourierMode::new(2, 2.0);
    let (nu, lambda) = (1e-3, C64::new(0.3, 0.001));
    let solve = |n: usize| {
        let g = build_grid(n).unwrap();
        let f1 = RadialField::from_real_fn(&g, |r| r * r * (1.0 - r) * (1.0 + r));
        let f2 = RadialField::from_real_fn(&g, |r| r * r * (0.5 - r).cos());
        solve_resolvent(mode, nu, lambda, &f1, &f2, &g).unwrap()
    };
    let (a, b) = (solve(128), solve(256));
    assert!(common_nodes_err(&a.u, &b.u) < 1e-7);
    assert!(common_nodes_err(&a.w, &b.w) < 1e-7);
    assert!(((a.dw_wall - b.dw_wall) / b.dw_wall).norm() < 1e-7);
}

#[test]
fn homogeneous_wall_slope_refinement() {
    let mode = FourierMode::new(1, 1.0);
    let lambda = C64::new(0.5, 0.0);
    for (nu, n) in [(1e-3, 128), (1e-4, 192)] {
        let a = solve_homogeneous(mode, nu, lambda, &build_grid(n).unwrap()).unwrap();
        let b = solve_homogeneous(mode, nu, lambda, &build_grid(2 * n).unwrap()).unwrap();
        let rel = ((a.dw_wall - b.dw_wall) / b.dw_wall).norm();
        assert!(rel < 1e-6, "nu={nu}: {rel:e}");
        assert!(common_nodes_err(&a.w, &b.w) < 1e-6);
    }
}

/// Modified Bessel `I₁(z)` and its derivative by power series.
fn bessel_i1(z: C64) -> (C64, C64) {
    let h = z / 2.0;
    let h2 = h * h;
    let mut term = h;
    let mut sum = term;
    let mut dsum = C64::new(0.5, 0.0);
    let mut dterm = C64::new(0.5, 0.0);
    for k in 1..400 {
        let kf = k as f64;
        term *= h2 / (kf * (kf + 1.0));
        // d/dz of (z/2)^{2k+1}/(k!(k+1)!) = (2k+1)/2 · (z/2)^{2k}/(k!(k+1)!)
        dterm *= h2 / (kf * (kf + 1.0));
        sum += term;
        dsum += dterm * (2.0 * kf + 1.0);
        if term.norm() < 1e-18 * sum.norm() && k > 5 {
            break;
        }
    }
    (sum, dsum)
}

#[test]
fn axisym_toy_pair_closed_form() {
    for (l, nu, lam) in [(1.0, 1e-2, 0.5), (0.1, 1e-2, 0.2), (2.0, 3e-3, 1.4)] {
        let lambda = C64::new(lam, 0.0);
        let k2 = C64::new(0.0, l) * (lambda - 1.0) / nu;
        let mu = (k2 + l * l).sqrt();
        let (i_mu, di_mu) = bessel_i1(mu);
        let (i_l, di_l) = bessel_i1(C64::new(l, 0.0));
        let g = build_grid(96).unwrap();
        let sol = solve_axisym(AxisymKind::ToyPair, l, nu, lambda, None, &g).unwrap();
        let u_exact = RadialField::from_fn(&g, |r| bessel_i1(mu * r).0 / i_mu);
        let w_exact =
            RadialField::from_fn(&g, |r| (bessel_i1(mu * r).0 / i_mu - bessel_i1(C64::new(l * r, 0.0)).0 / i_l) / k2);
        assert!(rel_err(&sol.primary, &u_exact) < 1e-8, "l={l}");
        assert!(rel_err(sol.secondary.as_ref().unwrap(), &w_exact) < 1e-8, "l={l}");
        let dw = (mu * di_mu / i_mu - l * di_l / i_l) / k2;
        assert!(((sol.d_secondary_wall - dw) / dw).norm() < 1e-8, "l={l}");
    }
}

#[test]
fn axisym_j_zero_forcing() {
    let g = build_grid(64).unwrap();
    let z = RadialField::zeros(&g);
    let sol = solve_axisym(AxisymKind::JOnly, 1.5, 1e-3, C64::new(0.4, 0.0), Some(&z), &g).unwrap();
    assert_eq!(sol.primary.max_abs(), 0.0);
}

#[test]
fn scalar_zero_data_is_zero() {
    let g = build_grid(48).unwrap();
    let z = RadialField::zeros(&g);
    for kind in [ScalarKind::Dhat, ScalarKind::Dhat1, ScalarKind::Dhat1Frozen, ScalarKind::Axisym1] {
        let u = solve_scalar(kind, FourierMode::new(1, 1.0), 1e-3, C64::new(0.5, 0.0), 0.6, &z, C64::new(0.0, 0.0), &g)
            .unwrap();
        assert_eq!(u.max_abs(), 0.0);
        assert_eq!(u.grid().interval(), (0.0, 0.6));
    }
}

#[test]
fn scalar_right_value_imposed() {
    let g = build_grid(48).unwrap();
    let z = RadialField::zeros(&g);
    let bc = C64::new(1.0, 0.0);
    let u =
        solve_scalar(ScalarKind::Dhat1Frozen, FourierMode::new(2, 1.0), 1e-3, C64::new(0.2, -0.01), 0.5, &z, bc, &g)
            .unwrap();
    assert!((u.at_wall() - bc).norm() < 1e-12);
    assert!(u.at_inner().norm() < 1e-12);
}
