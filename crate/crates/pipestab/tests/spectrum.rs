use pipestab::special::{bessel_j, bessel_zero};
use pipestab::spectrum::{
    assemble_diffusion_pencil, assemble_pencil, assemble_swirl_pencil, diffusion_slope, dissipation_slope,
    rightmost_eigenvalue, rightmost_with, shift_invert_eigs, swirl_dense_spectrum, ScanConfig, RESIDUAL_TOL,
};
use pipestab::{build_grid, FourierMode, C64};

#[test]
fn diffusion_matches_bessel_zeros() {
    let g = build_grid(64).unwrap();
    let nu = 1e-3;
    for n in 0..=2u32 {
        let p = assemble_diffusion_pencil(n as i32, nu, &g).unwrap();
        let r = shift_invert_eigs(&p, C64::new(0.0, 0.0), 4).unwrap();
        assert!(r.residuals.iter().all(|&x| x <= RESIDUAL_TOL));
        for k in 1..=3u32 {
            let j = bessel_zero(n, k).unwrap();
            let want = -nu * j * j;
            let got = r.eigenvalues[k as usize - 1];
            assert!(
                ((got.re - want) / want).abs() <= 1e-6 && got.im.abs() <= 1e-6 * want.abs(),
                "n={n} k={k}: {got} vs {want}"
            );
        }
    }
}

#[test]
fn diffusion_pencil_reproduces_bessel_mode() {
    let g = build_grid(48).unwrap();
    let nu = 2e-3;
    for n in 0..=2u32 {
        let j = bessel_zero(n, 2).unwrap();
        let x: Vec<C64> = g.nodes().iter().map(|&r| C64::new(bessel_j(n, j * r), 0.0)).collect();
        let p = assemble_diffusion_pencil(n as i32, nu, &g).unwrap();
        assert!(p.residual(C64::new(-nu * j * j, 0.0), &x) < 1e-9);
        assert!(p.residual(C64::new(-nu * j * j * 1.01, 0.0), &x) > 1e-6);
    }
}

#[test]
fn residuals_and_determinism() {
    let g = build_grid(64).unwrap();
    let p = assemble_pencil(FourierMode::new(1, 1.0), 1e-3, &g).unwrap();
    let a = shift_invert_eigs(&p, C64::new(-0.05, -0.5), 6).unwrap();
    let b = shift_invert_eigs(&p, C64::new(-0.05, -0.5), 6).unwrap();
    assert_eq!(a, b);
    assert!(!a.eigenvalues.is_empty());
    for (s, res) in a.eigenvalues.iter().zip(&a.residuals) {
        assert!(*res <= RESIDUAL_TOL);
        assert!(s.re < 0.0);
    }
    assert!(a.eigenvalues.windows(2).all(|w| w[0].re >= w[1].re));
}

#[test]
fn swirl_pencil_matches_dense_scalar_spectrum() {
    let g = build_grid(64).unwrap();
    let (l, nu) = (2.0, 1e-3);
    let dense = swirl_dense_spectrum(l, nu, &g).unwrap();
    let p = assemble_swirl_pencil(l, nu, &g).unwrap();
    for sigma in [C64::new(-0.05, -1.0), C64::new(-0.1, -2.0), C64::new(-0.02, 0.0)] {
        let r = shift_invert_eigs(&p, sigma, 6).unwrap();
        for s in &r.eigenvalues {
            let d = dense.iter().map(|e| (e - s).norm()).fold(f64::INFINITY, f64::min);
            assert!(d <= 1e-8 * s.norm().max(1.0), "{s}: {d:e}");
        }
    }
}

#[test]
fn axisymmetric_mode_is_stable() {
    let g = build_grid(96).unwrap();
    let r = rightmost_eigenvalue(FourierMode::new(0, 2.0 * std::f64::consts::PI), 1e-3, &g).unwrap();
    assert!(r.eigenvalue.re < 0.0, "{}", r.eigenvalue);
    assert!(r.residuals.iter().all(|&x| x <= RESIDUAL_TOL));
}

#[test]
fn rightmost_monotone_in_nu_and_grid_converged() {
    let mode = FourierMode::new(1, 1.0);
    let g = build_grid(96).unwrap();
    let a = rightmost_eigenvalue(mode, 1e-4, &g).unwrap().eigenvalue;
    let b = rightmost_eigenvalue(mode, 1e-3, &g).unwrap().eigenvalue;
    assert!(b.re < a.re, "{a} {b}");
    let c = rightmost_eigenvalue(mode, 1e-3, &build_grid(192).unwrap()).unwrap().eigenvalue;
    assert!((b - c).norm() <= 1e-6 * c.norm(), "{b} {c}");
}

#[test]
fn enhanced_dissipation_slope() {
    let nus = [1e-3, 3e-4, 1e-4, 3e-5, 1e-5];
    let g = build_grid(128).unwrap();
    let fit = dissipation_slope(FourierMode::new(1, 1.0), &nus, &g, &ScanConfig::default()).unwrap();
    println!("slope {} {:?}", fit.slope, fit.points);
    assert!((0.4..=0.7).contains(&fit.slope), "{}", fit.slope);
    let d = diffusion_slope(1, &nus, &g).unwrap();
    assert!((d.slope - 1.0).abs() <= 0.02, "{}", d.slope);
}

#[test]
fn scan_config_validation() {
    let g = build_grid(32).unwrap();
    let bad = ScanConfig { re_shifts: 0, ..ScanConfig::default() };
    assert!(rightmost_with(FourierMode::new(1, 1.0), 1e-3, &g, &bad).is_err());
}
