//! Chebyshev–Gauss–Lobatto grids on a radial interval, fields living on them,
//! and the weighted `r dr` inner products and norms.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Shared handle to an immutable grid.
pub type GridRef = Arc<RadialGrid>;

/// Smallest accepted polynomial degree.
pub const MIN_N: usize = 8;

/// Fourier mode `e^{i(nθ + lz)}`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FourierMode {
    pub n: i32,
    pub l: f64,
}

impl FourierMode {
    pub fn new(n: i32, l: f64) -> Self {
        Self { n, l }
    }

    /// Mode with axial wavenumber `l = 2πk/Lz`.
    pub fn from_k(n: i32, k: i32, lz: f64) -> Self {
        Self { n, l: 2.0 * PI * k as f64 / lz }
    }

    pub fn nf(&self) -> f64 {
        self.n as f64
    }

    pub fn n2(&self) -> f64 {
        (self.n as f64).powi(2)
    }

    pub fn l2(&self) -> f64 {
        self.l * self.l
    }

    /// `n² + r²l²`, the weight shared by every Δ̂₁-type operator.
    pub fn q(&self, r: f64) -> f64 {
        self.n2() + r * r * self.l2()
    }

    pub fn require_resolvent(&self) -> Result<()> {
        if self.n == 0 && self.l == 0.0 {
            return Err(Error::Domain("mode (0,0) has no resolvent".into()));
        }
        if !self.l.is_finite() {
            return Err(Error::Domain("axial wavenumber not finite".into()));
        }
        Ok(())
    }

    pub fn require_l(&self) -> Result<()> {
        if self.l == 0.0 || !self.l.is_finite() {
            return Err(Error::Domain("axial wavenumber must be nonzero".into()));
        }
        Ok(())
    }

    pub fn require_n(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Domain("azimuthal wavenumber must be nonzero".into()));
        }
        Ok(())
    }
}

/// CGL collocation grid on `[a, b]`, nodes descending from `b` to `a`.
#[derive(Debug, Clone)]
pub struct RadialGrid {
    n: usize,
    a: f64,
    b: f64,
    nodes: Vec<f64>,
    d1: DMatrix<f64>,
    d2: DMatrix<f64>,
    weights: Vec<f64>,
    bary: Vec<f64>,
}

/// Grid on the full radius `[0, 1]`.
pub fn build_grid(n: usize) -> Result<GridRef> {
    RadialGrid::on_interval(n, 0.0, 1.0)
}

impl RadialGrid {
    pub fn on_interval(n: usize, a: f64, b: f64) -> Result<GridRef> {
        if n < MIN_N {
            return Err(Error::Config(format!("grid size {n} below minimum {MIN_N}")));
        }
        if !(a >= 0.0 && a < b && b.is_finite()) {
            return Err(Error::Config(format!("bad grid interval [{a}, {b}]")));
        }
        let nf = n as f64;
        // symmetric form keeps x_j = -x_{N-j} to the last bit
        let x: Vec<f64> = (0..=n).map(|j| (PI * (nf - 2.0 * j as f64) / (2.0 * nf)).sin()).collect();
        let half = 0.5 * (b - a);
        let mut nodes: Vec<f64> = x.iter().map(|&xj| a + half * (1.0 + xj)).collect();
        nodes[0] = b;
        nodes[n] = a;

        let c = |j: usize| if j == 0 || j == n { 2.0 } else { 1.0 };
        let mut d1 = DMatrix::<f64>::zeros(n + 1, n + 1);
        for i in 0..=n {
            let mut row_sum = 0.0;
            for j in 0..=n {
                if i == j {
                    continue;
                }
                let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                // x_i - x_j without cancellation
                let dx =
                    -2.0 * (PI * (i + j) as f64 / (2.0 * nf)).sin() * (PI * (i as f64 - j as f64) / (2.0 * nf)).sin();
                let v = c(i) / c(j) * sign / dx / half;
                d1[(i, j)] = v;
                row_sum += v;
            }
            d1[(i, i)] = -row_sum;
        }
        let d2 = &d1 * &d1;

        let weights = cgl_weights(n, a, b);
        let bary = (0..=n)
            .map(|j| {
                let s = if j % 2 == 0 { 1.0 } else { -1.0 };
                if j == 0 || j == n {
                    0.5 * s
                } else {
                    s
                }
            })
            .collect();
        Ok(Arc::new(Self { n, a, b, nodes, d1, d2, weights, bary }))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn d1(&self) -> &DMatrix<f64> {
        &self.d1
    }

    pub fn d2(&self) -> &DMatrix<f64> {
        &self.d2
    }

    /// Weights for `∫_a^b f(r) r dr`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Index of the node at r = 0 if the grid touches the axis.
    pub fn pole(&self) -> Option<usize> {
        (self.a == 0.0).then_some(self.n)
    }

    pub fn same_as(&self, other: &RadialGrid) -> bool {
        std::ptr::eq(self, other) || (self.n == other.n && self.a == other.a && self.b == other.b)
    }

    /// Barycentric interpolation of nodal values at `r`.
    pub fn interpolate(&self, values: &[C64], r: f64) -> C64 {
        let mut num = C64::new(0.0, 0.0);
        let mut den = 0.0;
        for (j, (&rj, &wj)) in self.nodes.iter().zip(&self.bary).enumerate() {
            let dr = r - rj;
            if dr == 0.0 {
                return values[j];
            }
            let t = wj / dr;
            num += values[j] * t;
            den += t;
        }
        num / den
    }

    /// Apply a real matrix to complex nodal values.
    pub fn apply(m: &DMatrix<f64>, v: &[C64]) -> Vec<C64> {
        let (rows, cols) = m.shape();
        debug_assert_eq!(cols, v.len());
        let mut out = vec![C64::new(0.0, 0.0); rows];
        for j in 0..cols {
            let vj = v[j];
            let col = m.column(j);
            for i in 0..rows {
                out[i] += vj * col[i];
            }
        }
        out
    }
}

/// Clenshaw–Curtis-type weights for the measure `r dr`: each nodal cardinal
/// polynomial integrated exactly against the linear weight. Exact for
/// polynomial integrands of degree ≤ N.
fn cgl_weights(n: usize, a: f64, b: f64) -> Vec<f64> {
    let nf = n as f64;
    let half = 0.5 * (b - a);
    // r dr = (alpha + beta x) dx on [-1, 1]
    let alpha = half * (a + half);
    let beta = half * half;
    let int_t = |k: usize| -> f64 {
        if k % 2 == 1 {
            0.0
        } else {
            2.0 / (1.0 - (k * k) as f64)
        }
    };
    let moments: Vec<f64> = (0..=n)
        .map(|k| {
            let xt = if k == 0 { int_t(1) } else { 0.5 * (int_t(k + 1) + int_t(k - 1)) };
            alpha * int_t(k) + beta * xt
        })
        .collect();
    let cb = |j: usize| if j == 0 || j == n { 2.0 } else { 1.0 };
    (0..=n)
        .map(|j| {
            let mut s = 0.0;
            for (k, mk) in moments.iter().enumerate() {
                s += (PI * (j * k % (2 * n)) as f64 / nf).cos() * mk / cb(k);
            }
            2.0 * s / (nf * cb(j))
        })
        .collect()
}

/// Complex nodal values of one scalar unknown.
#[derive(Debug, Clone)]
pub struct RadialField {
    grid: GridRef,
    values: Vec<C64>,
}

impl RadialField {
    pub fn new(grid: &GridRef, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Domain(format!("field has {} values, grid has {} nodes", values.len(), grid.len())));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Numeric("non-finite field value".into()));
        }
        Ok(Self { grid: grid.clone(), values })
    }

    pub(crate) fn from_vec(grid: &GridRef, values: Vec<C64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid: grid.clone(), values }
    }

    pub fn zeros(grid: &GridRef) -> Self {
        Self::from_vec(grid, vec![C64::new(0.0, 0.0); grid.len()])
    }

    pub fn from_fn(grid: &GridRef, f: impl Fn(f64) -> C64) -> Self {
        Self::from_vec(grid, grid.nodes().iter().map(|&r| f(r)).collect())
    }

    pub fn from_real_fn(grid: &GridRef, f: impl Fn(f64) -> f64) -> Self {
        Self::from_fn(grid, |r| C64::new(f(r), 0.0))
    }

    pub fn grid(&self) -> &GridRef {
        &self.grid
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [C64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    /// Value at the outer end of the interval (r = 1 on the full grid).
    pub fn at_wall(&self) -> C64 {
        self.values[0]
    }

    /// Value at the inner end of the interval.
    pub fn at_inner(&self) -> C64 {
        self.values[self.grid.n()]
    }

    pub fn eval(&self, r: f64) -> C64 {
        self.grid.interpolate(&self.values, r)
    }

    pub fn check_grid(&self, other: &RadialField) -> Result<()> {
        if self.grid.same_as(&other.grid) {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    pub fn map(&self, f: impl Fn(f64, C64) -> C64) -> Self {
        let values = self.grid.nodes().iter().zip(&self.values).map(|(&r, &v)| f(r, v)).collect();
        Self::from_vec(&self.grid, values)
    }

    pub fn scale(&self, c: C64) -> Self {
        self.map(|_, v| v * c)
    }

    pub fn add(&self, other: &RadialField) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &RadialField) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    pub fn zip(&self, other: &RadialField, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        self.check_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self::from_vec(&self.grid, values))
    }

    pub fn dr(&self) -> Self {
        Self::from_vec(&self.grid, RadialGrid::apply(self.grid.d1(), &self.values))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `f/r` with the axis value replaced by `∂r f(0)`.
    pub fn over_r(&self) -> Self {
        let d = self.grid.pole().map(|p| self.dr().values[p]);
        let values = self
            .grid
            .nodes()
            .iter()
            .zip(&self.values)
            .map(|(&r, &v)| if r == 0.0 { d.unwrap_or(v) } else { v / r })
            .collect();
        Self::from_vec(&self.grid, values)
    }

    /// `‖f‖` in L²(r dr) over the grid interval.
    pub fn norm(&self) -> f64 {
        weighted_sq(&self.grid, &self.values).sqrt()
    }

    /// Re-sample on another grid by interpolation.
    pub fn resample(&self, grid: &GridRef) -> Self {
        Self::from_fn(grid, |r| self.eval(r))
    }
}

fn weighted_sq(grid: &RadialGrid, v: &[C64]) -> f64 {
    grid.weights().iter().zip(v).map(|(w, x)| w * x.norm_sqr()).sum::<f64>().max(0.0)
}

/// `⟨f, g⟩ = ∫ f ḡ r dr` by quadrature.
pub fn weighted_inner(f: &RadialField, g: &RadialField) -> Result<C64> {
    f.check_grid(g)?;
    Ok(f.grid.weights().iter().zip(f.values.iter().zip(&g.values)).map(|(w, (a, b))| a * b.conj() * *w).sum())
}

/// Integral of a real nodal integrand against `r dr`.
pub fn integrate_r(grid: &RadialGrid, h: &[f64]) -> f64 {
    grid.weights().iter().zip(h).map(|(w, x)| w * x).sum()
}

fn pole_tolerance(f: &RadialField) -> f64 {
    1e-10 * f.max_abs().max(f64::MIN_POSITIVE)
}

fn require_pole_zero(f: &RadialField, what: &str) -> Result<()> {
    if let Some(p) = f.grid.pole() {
        if f.values[p].norm() > pole_tolerance(f) {
            return Err(Error::Domain(format!("{what}: field does not vanish at r = 0")));
        }
    }
    Ok(())
}

/// `‖f‖₁² = ‖∂r f‖² + n²‖f/r‖² + l²‖f‖²`, returned as ‖f‖₁.
pub fn norm_one(f: &RadialField, mode: FourierMode) -> Result<f64> {
    if mode.n != 0 {
        require_pole_zero(f, "norm_one")?;
    }
    let d = f.dr();
    let mut s = weighted_sq(&f.grid, &d.values) + mode.l2() * weighted_sq(&f.grid, &f.values);
    if mode.n != 0 {
        s += mode.n2() * weighted_sq(&f.grid, &f.over_r().values);
    }
    Ok(s.sqrt())
}

/// `E = ∫ (r|∂rW|²/(n²+r²l²) + |W|²/r) dr`.
pub fn energy_e(w: &RadialField, mode: FourierMode) -> Result<f64> {
    require_pole_zero(w, "energy_e")?;
    if mode.n == 0 && w.grid.pole().is_some() {
        return Err(Error::Domain("energy_e needs n ≠ 0 on a grid touching the axis".into()));
    }
    let d = w.dr();
    let wr = w.over_r();
    let h: Vec<f64> = w
        .grid
        .nodes()
        .iter()
        .zip(d.values.iter().zip(&wr.values))
        .map(|(&r, (dv, q))| dv.norm_sqr() / mode.q(r) + q.norm_sqr())
        .collect();
    Ok(integrate_r(&w.grid, &h).max(0.0))
}

/// L²(r dr) norm over `(a, b)` via interpolation onto a sub-grid.
pub fn subinterval_norm(f: &RadialField, a: f64, b: f64) -> Result<f64> {
    if !(a < b) {
        return Err(Error::Domain(format!("empty subinterval ({a}, {b})")));
    }
    let (ga, gb) = f.grid.interval();
    if a < ga - 1e-14 || b > gb + 1e-14 {
        return Err(Error::Domain(format!("subinterval ({a}, {b}) outside grid")));
    }
    let sub = RadialGrid::on_interval(f.grid.n(), a.max(ga), b.min(gb))?;
    let v: Vec<C64> = sub.nodes().iter().map(|&r| f.eval(r)).collect();
    Ok(weighted_sq(&sub, &v).sqrt())
}

/// Weighted L¹ norm `∫ |f| r dr`.
pub fn l1_norm(f: &RadialField) -> f64 {
    let h: Vec<f64> = f.values.iter().map(|v| v.norm()).collect();
    integrate_r(&f.grid, &h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn tiny_grid_rejected() {
        assert!(matches!(build_grid(4), Err(Error::Config(_))));
    }

    #[test]
    fn nodes_descend_with_exact_ends() {
        let g = build_grid(16).unwrap();
        assert_eq!(g.nodes()[0], 1.0);
        assert_eq!(g.nodes()[16], 0.0);
        assert_eq!(g.nodes()[8], 0.5);
        assert!(g.nodes().windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn derivative_of_monomials() {
        let g = build_grid(24).unwrap();
        for k in 1..=24 {
            let f = RadialField::from_real_fn(&g, |r| r.powi(k));
            let d = f.dr();
            for (j, &r) in g.nodes().iter().enumerate() {
                let exact = k as f64 * r.powi(k - 1);
                assert!((d.values()[j].re - exact).abs() <= 1e-12 * (k as f64).powi(2).max(1.0) * 4.0);
            }
        }
    }

    #[test]
    fn quadrature_closed_forms() {
        let g = build_grid(16).unwrap();
        let one = RadialField::from_real_fn(&g, |_| 1.0);
        assert!((weighted_inner(&one, &one).unwrap().re - 0.5).abs() < 1e-14);
        let r3 = RadialField::from_real_fn(&g, |r| r.powi(3));
        assert!((weighted_inner(&r3, &one).unwrap().re - 0.2).abs() < 1e-12);
        let r = RadialField::from_real_fn(&g, |r| r);
        assert!((weighted_inner(&r, &r).unwrap().re - 0.25).abs() < 1e-12);
    }

    #[test]
    fn quadrature_exact_to_degree_n() {
        let g = RadialGrid::on_interval(12, 0.2, 0.9).unwrap();
        let (a, b) = (0.2f64, 0.9f64);
        for k in 0..=12 {
            let f = RadialField::from_real_fn(&g, |r| r.powi(k));
            let got: f64 = integrate_r(&g, &f.values().iter().map(|v| v.re).collect::<Vec<_>>());
            let exact = (b.powi(k + 2) - a.powi(k + 2)) / (k + 2) as f64;
            assert!((got - exact).abs() < 1e-13, "k={k}");
        }
    }

    #[test]
    fn norm_one_closed_forms() {
        let g = build_grid(16).unwrap();
        let r = RadialField::from_real_fn(&g, |r| r);
        assert!((norm_one(&r, FourierMode::new(1, 0.0)).unwrap().powi(2) - 1.0).abs() < 1e-12);
        let r2 = RadialField::from_real_fn(&g, |r| r * r);
        assert!((norm_one(&r2, FourierMode::new(0, 1.0)).unwrap().powi(2) - 7.0 / 6.0).abs() < 1e-10);
        assert_eq!(norm_one(&RadialField::zeros(&g), FourierMode::new(2, 1.0)).unwrap(), 0.0);
        let one = RadialField::from_real_fn(&g, |_| 1.0);
        assert!(matches!(norm_one(&one, FourierMode::new(1, 0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn energy_closed_form_and_domain() {
        let g = build_grid(16).unwrap();
        let r = RadialField::from_real_fn(&g, |r| r);
        assert!((energy_e(&r, FourierMode::new(1, 0.0)).unwrap() - 1.0).abs() < 1e-12);
        let one = RadialField::from_real_fn(&g, |_| 1.0);
        assert!(energy_e(&one, FourierMode::new(1, 0.0)).is_err());
    }

    #[test]
    fn subinterval_closed_forms() {
        let g = build_grid(32).unwrap();
        let one = RadialField::from_real_fn(&g, |_| 1.0);
        assert!((subinterval_norm(&one, 0.0, 1.0).unwrap() - 0.5f64.sqrt()).abs() < 1e-14);
        assert!((subinterval_norm(&one, 0.0, 0.3).unwrap() - 0.3 / 2f64.sqrt()).abs() < 1e-13);
        assert!(subinterval_norm(&one, 0.5, 0.5).is_err());
        let f = RadialField::from_fn(&g, |r| C64::new(r.sin(), r * r));
        let a = subinterval_norm(&f, 0.0, 1.0).unwrap().powi(2);
        assert!((a - weighted_inner(&f, &f).unwrap().re).abs() < 1e-10 * a);
    }

    #[test]
    fn interpolation_hits_nodes_and_polynomials() {
        let g = build_grid(10).unwrap();
        let f = RadialField::from_real_fn(&g, |r| 3.0 * r.powi(7) - r);
        assert_eq!(f.eval(g.nodes()[3]), f.values()[3]);
        assert!((f.eval(0.123) - c(3.0 * 0.123f64.powi(7) - 0.123)).norm() < 1e-13);
    }

    #[test]
    fn mismatched_grids() {
        let a = build_grid(10).unwrap();
        let b = build_grid(12).unwrap();
        let fa = RadialField::zeros(&a);
        let fb = RadialField::zeros(&b);
        assert_eq!(weighted_inner(&fa, &fb), Err(Error::GridMismatch));
    }
}
