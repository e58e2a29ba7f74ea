//! Random smooth test functions built from Chebyshev series.
//!
//! A test function is `f(r) = r^e q(r)` where `q` is a Chebyshev series on
//! `[0, b]` corrected by a low-degree polynomial so that it meets its boundary
//! kind. Keeping `q` in coefficient form lets removable singularities such as
//! `f/(r̃−r)` be evaluated by exact synthetic division.

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::grid::{GridRef, RadialField};

/// Chebyshev series `Σ a_k T_k(2r/b − 1)` on `[0, b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebSeries {
    coeffs: Vec<C64>,
    b: f64,
}

impl ChebSeries {
    pub fn new(coeffs: Vec<C64>, b: f64) -> Self {
        Self { coeffs, b }
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn right_end(&self) -> f64 {
        self.b
    }

    fn to_x(&self, r: f64) -> f64 {
        2.0 * r / self.b - 1.0
    }

    /// Clenshaw evaluation.
    pub fn eval(&self, r: f64) -> C64 {
        let x = self.to_x(r);
        let (mut b1, mut b2) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
        for &a in self.coeffs.iter().skip(1).rev() {
            let b0 = a + b1 * (2.0 * x) - b2;
            b2 = b1;
            b1 = b0;
        }
        self.coeffs.first().copied().unwrap_or_default() + b1 * x - b2
    }

    /// Add `c₀ + c₁ r`.
    pub fn add_linear(&mut self, c0: C64, c1: C64) {
        if self.coeffs.len() < 2 {
            self.coeffs.resize(2, C64::new(0.0, 0.0));
        }
        // r = (b/2)(x + 1)
        let h = 0.5 * self.b;
        self.coeffs[0] += c0 + c1 * h;
        self.coeffs[1] += c1 * h;
    }

    /// Quotient `q(r)/(r − ρ)` for a root `ρ` of `q`, and the remainder
    /// (which is `q(ρ)` up to rounding).
    pub fn divide_root(&self, rho: f64) -> (ChebSeries, C64) {
        let a = &self.coeffs;
        let k = a.len() - 1;
        let xt = self.to_x(rho);
        let zero = C64::new(0.0, 0.0);
        if k == 0 {
            return (ChebSeries::new(vec![zero], self.b), a[0]);
        }
        let mut q = vec![zero; k];
        q[k - 1] = if k >= 2 { 2.0 * a[k] } else { a[1] };
        if k >= 2 {
            for j in (2..k).rev() {
                let next = if j + 1 < k { q[j + 1] } else { zero };
                q[j - 1] = 2.0 * (a[j] + xt * q[j]) - next;
            }
            let q2 = if k > 2 { q[2] } else { zero };
            q[0] = a[1] - 0.5 * q2 + xt * q[1];
        }
        let q1 = if k > 1 { q[1] } else { zero };
        let rem = a[0] - 0.5 * q1 + xt * q[0];
        // r − ρ = (b/2)(x − x̃)
        let scale = 2.0 / self.b;
        (ChebSeries::new(q.into_iter().map(|c| c * scale).collect(), self.b), rem)
    }
}

/// Boundary behaviour imposed on a random test function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BcKind {
    /// `f(b) = 0` at the right end.
    Wall,
    /// `f(0) = f(b) = 0`.
    BothEnds,
    /// `f(0) = f(r̃) = 0` for an interior or end point `r̃ ∈ (0, b]`.
    Interior(f64),
}

/// Recipe for a random test function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestFunctionSpec {
    pub seed: u64,
    pub bc: BcKind,
    /// Geometric decay ratio of the coefficient envelope.
    pub rho: f64,
    pub degree: usize,
    /// Required vanishing order at the axis.
    pub pole_order: u32,
    /// Right end `b` of the support interval `[0, b]`.
    pub right_end: f64,
}

impl TestFunctionSpec {
    pub fn new(seed: u64, bc: BcKind) -> Self {
        Self { seed, bc, rho: 0.8, degree: 24, pole_order: 1, right_end: 1.0 }
    }

    pub fn pole_order(mut self, m: u32) -> Self {
        self.pole_order = m;
        self
    }

    pub fn on(mut self, b: f64) -> Self {
        self.right_end = b;
        self
    }
}

/// A generated test function.
#[derive(Debug, Clone)]
pub struct TestFunction {
    pub spec: TestFunctionSpec,
    /// Corrected polynomial factor.
    pub q: ChebSeries,
    /// Power of r multiplying `q`.
    pub power: u32,
}

impl TestFunction {
    pub fn generate(spec: TestFunctionSpec) -> Result<Self> {
        let b = spec.right_end;
        if !(b > 0.0 && b <= 1.0) {
            return Err(Error::Domain(format!("support end {b} outside (0, 1]")));
        }
        if !(spec.rho > 0.0 && spec.rho < 1.0) || spec.degree < 2 {
            return Err(Error::Domain("decay ratio must lie in (0, 1) and degree ≥ 2".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let mut env = 1.0;
        let coeffs: Vec<C64> = (0..=spec.degree)
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                let c = C64::new(re, im) * (env * std::f64::consts::FRAC_1_SQRT_2);
                env *= spec.rho;
                c
            })
            .collect();
        let mut q = ChebSeries::new(coeffs, b);
        let pole_zero = match spec.bc {
            BcKind::Wall => {
                let v = q.eval(b);
                q.add_linear(-v, C64::new(0.0, 0.0));
                false
            }
            BcKind::BothEnds => {
                let (v0, v1) = (q.eval(0.0), q.eval(b));
                q.add_linear(-v0, (v0 - v1) / b);
                true
            }
            BcKind::Interior(rt) => {
                if !(rt > 0.0 && rt <= b) {
                    return Err(Error::Domain(format!("interior zero {rt} outside (0, {b}]")));
                }
                let (v0, vt) = (q.eval(0.0), q.eval(rt));
                q.add_linear(-v0, (v0 - vt) / rt);
                true
            }
        };
        let power = spec.pole_order.saturating_sub(u32::from(pole_zero));
        Ok(Self { spec, q, power })
    }

    pub fn eval(&self, r: f64) -> C64 {
        self.q.eval(r) * r.powi(self.power as i32)
    }

    /// Nodal samples on `grid`.
    pub fn field(&self, grid: &GridRef) -> RadialField {
        RadialField::from_fn(grid, |r| self.eval(r))
    }

    /// `f(r)/(r − ρ)` for the root ρ of an `Interior` test function.
    pub fn quotient_field(&self, rho: f64, grid: &GridRef) -> RadialField {
        let (s, _) = self.q.divide_root(rho);
        RadialField::from_fn(grid, |r| s.eval(r) * r.powi(self.power as i32))
    }
}

/// Random nodal field on `grid` that vanishes at the axis and at the wall,
/// used as a generic smooth forcing.
pub fn random_forcing(seed: u64, grid: &GridRef, pole_order: u32) -> RadialField {
    let spec = TestFunctionSpec::new(seed, BcKind::BothEnds).pole_order(pole_order.max(1));
    TestFunction::generate(spec).expect("valid default spec").field(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::build_grid;

    #[test]
    fn clenshaw_matches_cosines() {
        let s =
            ChebSeries::new(vec![C64::new(0.5, 0.0), C64::new(0.0, 1.0), C64::new(2.0, 0.0), C64::new(-1.0, 0.0)], 1.0);
        for r in [0.0, 0.2, 0.77, 1.0] {
            let t = (2.0 * r - 1.0f64).acos();
            let want = C64::new(0.5, 0.0) + C64::new(0.0, 1.0) * t.cos() + 2.0 * (2.0 * t).cos() - (3.0 * t).cos();
            assert!((s.eval(r) - want).norm() < 1e-14);
        }
    }

    #[test]
    fn bc_kinds_hold() {
        for seed in 0..20 {
            let w = TestFunction::generate(TestFunctionSpec::new(seed, BcKind::Wall)).unwrap();
            assert!(w.eval(1.0).norm() < 1e-12);
            let both = TestFunction::generate(TestFunctionSpec::new(seed, BcKind::BothEnds).pole_order(3)).unwrap();
            assert!(both.eval(1.0).norm() < 1e-12 && both.eval(0.0).norm() == 0.0);
            assert_eq!(both.power, 2);
            let mid = TestFunction::generate(TestFunctionSpec::new(seed, BcKind::Interior(0.45))).unwrap();
            assert!(mid.eval(0.45).norm() < 1e-12 && mid.eval(0.0).norm() < 1e-12);
        }
    }

    #[test]
    fn synthetic_division_is_exact() {
        let f = TestFunction::generate(TestFunctionSpec::new(7, BcKind::Interior(0.6))).unwrap();
        let (s, rem) = f.q.divide_root(0.6);
        assert!(rem.norm() < 1e-12);
        for r in [0.0, 0.1, 0.59, 0.61, 0.9, 1.0] {
            let want = f.q.eval(r);
            let got = s.eval(r) * (r - 0.6);
            assert!((want - got).norm() < 1e-12, "r={r}");
        }
    }

    #[test]
    fn deterministic_and_grid_resolved() {
        let spec = TestFunctionSpec::new(42, BcKind::BothEnds).pole_order(2);
        let a = TestFunction::generate(spec).unwrap();
        let b = TestFunction::generate(spec).unwrap();
        assert_eq!(a.q, b.q);
        let n64 = a.field(&build_grid(64).unwrap()).norm();
        let n128 = a.field(&build_grid(128).unwrap()).norm();
        assert!((n64 - n128).abs() < 1e-10 * n128);
    }
}
