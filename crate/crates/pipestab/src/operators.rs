//! The four radial operators of one Fourier mode:
//!
//! * `Δ̂  = ∂r² + (1/r)∂r − n²/r² − l²`
//! * `Δ̂₁ = Δ̂ − (2rl²/(n²+r²l²))∂r`
//! * `Δ̂₁* = Δ̂ + (2rl²/(n²+r²l²))∂r + 4l²n²/(n²+r²l²)²`, the formal adjoint of Δ̂₁ in `r dr`
//! * `Δ̂₍₁₎` = Δ̂ with `n = 1`
//!
//! The row at r = 0 is zero in every matrix; boundary rows replace it downstream.

use nalgebra::DMatrix;

use crate::grid::{FourierMode, GridRef, RadialField, RadialGrid};

#[derive(Debug, Clone)]
pub struct OperatorSet {
    mode: FourierMode,
    grid: GridRef,
    lap: DMatrix<f64>,
    lap1: DMatrix<f64>,
    lap1_adj: DMatrix<f64>,
    lap_one: DMatrix<f64>,
}

/// Coefficient fields `(1/r, n²/r², 2rl²/q, 4l²n²/q²)` at every node; zero at r = 0.
pub(crate) fn coefficient_rows(mode: FourierMode, r: f64) -> (f64, f64, f64, f64) {
    if r == 0.0 {
        return (0.0, 0.0, 0.0, 0.0);
    }
    let q = mode.q(r);
    let (c1, c2) = if q == 0.0 { (0.0, 0.0) } else { (2.0 * r * mode.l2() / q, 4.0 * mode.l2() * mode.n2() / (q * q)) };
    (1.0 / r, mode.n2() / (r * r), c1, c2)
}

fn build(grid: &RadialGrid, n2: f64, l2: f64, drift: impl Fn(f64) -> f64, react: impl Fn(f64) -> f64) -> DMatrix<f64> {
    let d1 = grid.d1();
    let d2 = grid.d2();
    let m = grid.len();
    let mut out = DMatrix::<f64>::zeros(m, m);
    for (i, &r) in grid.nodes().iter().enumerate() {
        if r == 0.0 {
            continue;
        }
        let a1 = 1.0 / r + drift(r);
        let a0 = -n2 / (r * r) - l2 + react(r);
        for j in 0..m {
            out[(i, j)] = d2[(i, j)] + a1 * d1[(i, j)];
        }
        out[(i, i)] += a0;
    }
    out
}

/// Assemble Δ̂, Δ̂₁, Δ̂₁*, Δ̂₍₁₎ for `mode` on `grid`.
pub fn assemble(mode: FourierMode, grid: &GridRef) -> OperatorSet {
    let (n2, l2) = (mode.n2(), mode.l2());
    let c1 = |r: f64| coefficient_rows(mode, r).2;
    let c2 = |r: f64| coefficient_rows(mode, r).3;
    OperatorSet {
        mode,
        grid: grid.clone(),
        lap: build(grid, n2, l2, |_| 0.0, |_| 0.0),
        lap1: build(grid, n2, l2, |r| -c1(r), |_| 0.0),
        lap1_adj: build(grid, n2, l2, c1, c2),
        lap_one: build(grid, 1.0, l2, |_| 0.0, |_| 0.0),
    }
}

impl OperatorSet {
    pub fn mode(&self) -> FourierMode {
        self.mode
    }

    pub fn grid(&self) -> &GridRef {
        &self.grid
    }

    pub fn lap_matrix(&self) -> &DMatrix<f64> {
        &self.lap
    }

    pub fn lap1_matrix(&self) -> &DMatrix<f64> {
        &self.lap1
    }

    pub fn lap1_adj_matrix(&self) -> &DMatrix<f64> {
        &self.lap1_adj
    }

    pub fn lap_one_matrix(&self) -> &DMatrix<f64> {
        &self.lap_one
    }

    fn apply(&self, m: &DMatrix<f64>, f: &RadialField) -> RadialField {
        assert!(self.grid.same_as(f.grid()), "field and operators on different grids");
        RadialField::from_vec(&self.grid, RadialGrid::apply(m, f.values()))
    }

    pub fn lap(&self, f: &RadialField) -> RadialField {
        self.apply(&self.lap, f)
    }

    pub fn lap1(&self, f: &RadialField) -> RadialField {
        self.apply(&self.lap1, f)
    }

    pub fn lap1_adj(&self, f: &RadialField) -> RadialField {
        self.apply(&self.lap1_adj, f)
    }

    pub fn lap_one(&self, f: &RadialField) -> RadialField {
        self.apply(&self.lap_one, f)
    }
}

/// L²(r dr) norm restricted to nodes `collar..=N-collar`.
pub fn interior_norm(f: &RadialField, collar: usize) -> f64 {
    let g = f.grid();
    let n = g.n();
    (collar..=n.saturating_sub(collar)).map(|j| g.weights()[j] * f.values()[j].norm_sqr()).sum::<f64>().sqrt()
}

/// Collar used by every interior residual.
pub const COLLAR: usize = 2;

/// `‖Δ̂Δ̂f − Δ̂₁*Δ̂₁f‖` over interior nodes. The intermediate field takes the
/// zero placeholder at the axis, so `f` should vanish there to second order.
pub fn factorization_residual(f: &RadialField, ops: &OperatorSet) -> f64 {
    let a = ops.lap(&ops.lap(f));
    let b = ops.lap1_adj(&ops.lap1(f));
    interior_norm(&a.sub(&b).expect("same grid"), COLLAR)
}

/// Residuals of `Δ̂₍₁₎(rf) = rΔ̂₁*f` and `Δ̂₍₁₎(f/r) = (Δ̂₁f)/r` with the n = 0 operators.
pub fn axisym_conjugation_residual(f: &RadialField, l: f64) -> (f64, f64) {
    let ops = assemble(FourierMode::new(0, l), f.grid());
    let rf = f.map(|r, v| v * r);
    let lhs1 = ops.lap_one(&rf);
    let rhs1 = ops.lap1_adj(f).map(|r, v| v * r);
    let lhs2 = ops.lap_one(&f.over_r());
    let rhs2 = ops.lap1(f).map(|r, v| if r == 0.0 { v } else { v / r });
    (
        interior_norm(&lhs1.sub(&rhs1).expect("same grid"), COLLAR),
        interior_norm(&lhs2.sub(&rhs2).expect("same grid"), COLLAR),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::build_grid;
    use num_complex::Complex64 as C64;

    #[test]
    fn harmonic_monomials() {
        let g = build_grid(64).unwrap();
        for n in -6..=6i32 {
            let ops = assemble(FourierMode::new(n, 0.0), &g);
            let f = RadialField::from_real_fn(&g, |r| r.powi(n.abs()));
            let res = interior_norm(&ops.lap(&f), COLLAR);
            assert!(res < 1e-10, "n={n}: {res}");
        }
        let ops = assemble(FourierMode::new(3, 0.0), &g);
        let r = RadialField::from_real_fn(&g, |r| r);
        assert!(interior_norm(&ops.lap_one(&r), COLLAR) < 1e-10);
    }

    #[test]
    fn lap_one_is_lap_with_n_one() {
        let g = build_grid(20).unwrap();
        let a = assemble(FourierMode::new(4, 1.7), &g);
        let b = assemble(FourierMode::new(1, 1.7), &g);
        assert_eq!(a.lap_one_matrix(), b.lap_matrix());
    }

    #[test]
    fn pole_row_is_zero() {
        let g = build_grid(16).unwrap();
        let ops = assemble(FourierMode::new(2, 1.0), &g);
        for m in [ops.lap_matrix(), ops.lap1_matrix(), ops.lap1_adj_matrix(), ops.lap_one_matrix()] {
            assert!(m.row(16).iter().all(|&x| x == 0.0));
        }
    }

    #[test]
    fn factorization_identity_converges() {
        let f = |g: &GridRef| RadialField::from_real_fn(g, |r| (r * (1.0 - r)).powi(2));
        let mode = FourierMode::new(2, 1.0);
        let g96 = build_grid(96).unwrap();
        let r96 = factorization_residual(&f(&g96), &assemble(mode, &g96));
        assert!(r96 <= 1e-7, "{r96}");
        let g = build_grid(32).unwrap();
        assert_eq!(factorization_residual(&RadialField::zeros(&g), &assemble(mode, &g)), 0.0);
    }

    #[test]
    fn conjugation_identities() {
        let g = build_grid(96).unwrap();
        let f = RadialField::from_real_fn(&g, |r| r * (1.0 - r));
        let (a, b) = axisym_conjugation_residual(&f, 1.0);
        assert!(a <= 1e-7 && b <= 1e-7, "{a} {b}");
        let z = axisym_conjugation_residual(&RadialField::zeros(&g), 1.0);
        assert_eq!(z, (0.0, 0.0));
        let coarse = build_grid(48).unwrap();
        let h = |g: &GridRef| RadialField::from_fn(g, |r| C64::new(r * r * (1.0 - r), 0.0));
        let (c1, c2) = axisym_conjugation_residual(&h(&coarse), 2.0);
        let (f1, f2) = axisym_conjugation_residual(&h(&g), 2.0);
        assert!(f1 <= c1 / 10.0 || f1 < 1e-11, "{c1} -> {f1}");
        assert!(f2 <= c2 / 10.0 || f2 < 1e-11, "{c2} -> {f2}");
    }
}
