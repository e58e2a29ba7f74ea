use pipestab::grid::{energy_e, norm_one, weighted_inner};
use pipestab::operators::{assemble, interior_norm, COLLAR};
use pipestab::special::{bessel_j, bessel_zero};
use pipestab::{build_grid, FourierMode, RadialField};

#[test]
fn bessel_modes_are_eigenfunctions_of_lap() {
    // Δ̂ J_n(jr) = −(j² + l²) J_n(jr)
    let g = build_grid(48).unwrap();
    for n in 0..=3u32 {
        let mode = FourierMode::new(n as i32, 1.3);
        let ops = assemble(mode, &g);
        let j = bessel_zero(n, 2).unwrap();
        let f = RadialField::from_real_fn(&g, |r| bessel_j(n, j * r));
        let lam = -(j * j + mode.l2());
        let diff = ops.lap(&f).sub(&f.scale(lam.into())).unwrap();
        assert!(interior_norm(&diff, COLLAR) < 1e-8 * lam.abs(), "n = {n}");
        if n == 1 {
            let d = ops.lap_one(&f).sub(&f.scale(lam.into())).unwrap();
            assert!(interior_norm(&d, COLLAR) < 1e-8 * lam.abs());
        }
    }
}

#[test]
fn dirichlet_form_matches_norm_one() {
    // −Re⟨Δ̂f, f⟩ = ‖f‖₁² for f(1) = 0
    let g = build_grid(64).unwrap();
    let mode = FourierMode::new(2, 0.8);
    let ops = assemble(mode, &g);
    let f = RadialField::from_real_fn(&g, |r| r * r * (1.0 - r) * (1.0 + 3.0 * r));
    let lhs = -weighted_inner(&ops.lap(&f), &f).unwrap().re;
    let rhs = norm_one(&f, mode).unwrap().powi(2);
    assert!((lhs - rhs).abs() < 1e-10 * rhs);
}

#[test]
fn energy_of_monomial() {
    // n = 1, l = 0: E = ∫ (r|W′|² + |W|²/r) dr
    let g = build_grid(48).unwrap();
    let mode = FourierMode::new(1, 0.0);
    let w = RadialField::from_real_fn(&g, |r| r * r * (1.0 - r));
    // ∫ r(2r − 3r²)² dr + ∫ r³(1 − r)² dr = (1 − 12/5 + 3/2) + (1/4 − 2/5 + 1/6)
    let want = (1.0 - 12.0 / 5.0 + 1.5) + (0.25 - 0.4 + 1.0 / 6.0);
    assert!((energy_e(&w, mode).unwrap() - want).abs() < 1e-13);
}
