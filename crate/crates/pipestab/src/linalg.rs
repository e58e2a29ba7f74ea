//! Dense complex LU with partial pivoting, 1-norm condition estimation and row
//! equilibration. Sizes here are a few hundred, so a plain right-looking
//! elimination is fast enough and keeps the adjoint solve under our control.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Condition numbers above this are reported as ill-conditioned.
pub const COND_LIMIT: f64 = 1e13;

const ZERO: C64 = C64::new(0.0, 0.0);

#[derive(Debug, Clone)]
pub struct Lu {
    n: usize,
    lu: DMatrix<C64>,
    piv: Vec<usize>,
    norm1: f64,
}

impl Lu {
    pub fn factor(a: DMatrix<C64>) -> Result<Self> {
        let n = a.nrows();
        if n != a.ncols() {
            return Err(Error::Numeric("LU of a non-square matrix".into()));
        }
        let norm1 = norm1(&a);
        let mut lu = a;
        let mut piv = vec![0; n];
        let data = lu.as_mut_slice();
        for k in 0..n {
            let col_k = k * n;
            let mut p = k;
            let mut best = 0.0;
            for i in k..n {
                let v = data[col_k + i].l1_norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            piv[k] = p;
            if best == 0.0 {
                return Err(Error::Singular(k));
            }
            if p != k {
                for j in 0..n {
                    data.swap(j * n + k, j * n + p);
                }
            }
            let inv = C64::new(1.0, 0.0) / data[col_k + k];
            for i in k + 1..n {
                data[col_k + i] *= inv;
            }
            for j in k + 1..n {
                let akj = data[j * n + k];
                if akj == ZERO {
                    continue;
                }
                let (left, right) = data.split_at_mut(j * n);
                let lcol = &left[col_k + k + 1..col_k + n];
                let col = &mut right[k + 1..n];
                for (x, &l) in col.iter_mut().zip(lcol) {
                    *x -= l * akj;
                }
            }
        }
        Ok(Self { n, lu, piv, norm1 })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve_in_place(&self, b: &mut [C64]) {
        let n = self.n;
        let a = self.lu.as_slice();
        for k in 0..n {
            b.swap(k, self.piv[k]);
        }
        for j in 0..n {
            let bj = b[j];
            if bj == ZERO {
                continue;
            }
            for i in j + 1..n {
                b[i] -= a[j * n + i] * bj;
            }
        }
        for j in (0..n).rev() {
            b[j] /= a[j * n + j];
            let bj = b[j];
            for i in 0..j {
                b[i] -= a[j * n + i] * bj;
            }
        }
    }

    pub fn solve(&self, b: &[C64]) -> Vec<C64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }

    /// Solve `Aᴴ x = b`.
    pub fn solve_adjoint(&self, b: &[C64]) -> Vec<C64> {
        let n = self.n;
        let a = self.lu.as_slice();
        let mut x = b.to_vec();
        // Uᴴ y = b
        for i in 0..n {
            let mut s = x[i];
            for k in 0..i {
                s -= a[i * n + k].conj() * x[k];
            }
            x[i] = s / a[i * n + i].conj();
        }
        // Lᴴ z = y
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in i + 1..n {
                s -= a[i * n + k].conj() * x[k];
            }
            x[i] = s;
        }
        for k in (0..n).rev() {
            x.swap(k, self.piv[k]);
        }
        x
    }

    /// Hager–Higham estimate of `‖A‖₁‖A⁻¹‖₁`.
    pub fn cond1_estimate(&self) -> f64 {
        let n = self.n;
        let nf = n as f64;
        let mut x = vec![C64::new(1.0 / nf, 0.0); n];
        let mut est = 0.0;
        let mut last_j = usize::MAX;
        for _ in 0..5 {
            let y = self.solve(&x);
            let e: f64 = y.iter().map(|v| v.norm()).sum();
            if e <= est && last_j != usize::MAX {
                break;
            }
            est = e;
            let xi: Vec<C64> =
                y.iter().map(|v| if v.norm() > 0.0 { v / v.norm() } else { C64::new(1.0, 0.0) }).collect();
            let z = self.solve_adjoint(&xi);
            let (j, zmax) =
                z.iter()
                    .enumerate()
                    .map(|(i, v)| (i, v.norm()))
                    .fold((0, -1.0), |acc, c| if c.1 > acc.1 { c } else { acc });
            let ztx: f64 = z.iter().zip(&x).map(|(a, b)| (a.conj() * b).re).sum();
            if zmax <= ztx || j == last_j {
                break;
            }
            last_j = j;
            x = vec![ZERO; n];
            x[j] = C64::new(1.0, 0.0);
        }
        let alt: Vec<C64> = (0..n)
            .map(|i| {
                let s = if i % 2 == 0 { 1.0 } else { -1.0 };
                C64::new(s * (1.0 + i as f64 / (nf - 1.0).max(1.0)), 0.0)
            })
            .collect();
        let y = self.solve(&alt);
        let est2 = 2.0 * y.iter().map(|v| v.norm()).sum::<f64>() / (3.0 * nf);
        est.max(est2) * self.norm1
    }

    pub fn check_condition(&self) -> Result<f64> {
        let cond = self.cond1_estimate();
        if !cond.is_finite() || cond > COND_LIMIT {
            return Err(Error::IllConditioned { cond, limit: COND_LIMIT });
        }
        Ok(cond)
    }
}

pub fn norm1(a: &DMatrix<C64>) -> f64 {
    a.column_iter().map(|c| c.iter().map(|v| v.norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// Scale every row (and its right-hand-side entry) to unit max-modulus.
pub fn equilibrate_rows(a: &mut DMatrix<C64>, rhs: &mut [C64]) -> Vec<f64> {
    let n = a.nrows();
    let mut scales = vec![1.0; n];
    for i in 0..n {
        let m = a.row(i).iter().map(|v| v.norm()).fold(0.0, f64::max);
        if m > 0.0 {
            scales[i] = 1.0 / m;
        }
    }
    for mut col in a.column_iter_mut() {
        for (i, v) in col.iter_mut().enumerate() {
            *v *= scales[i];
        }
    }
    for (b, s) in rhs.iter_mut().zip(&scales) {
        *b *= *s;
    }
    scales
}

/// Equilibrate, factor, check conditioning and solve one system.
pub fn solve_checked(mut a: DMatrix<C64>, mut rhs: Vec<C64>) -> Result<(Vec<C64>, f64)> {
    equilibrate_rows(&mut a, &mut rhs);
    let lu = Lu::factor(a)?;
    let cond = lu.check_condition()?;
    lu.solve_in_place(&mut rhs);
    Ok((rhs, cond))
}

/// An equilibrated, condition-checked factorization reusable across right-hand sides.
pub struct CheckedSolver {
    lu: Lu,
    scales: Vec<f64>,
    cond: f64,
}

impl CheckedSolver {
    pub fn new(mut a: DMatrix<C64>) -> Result<Self> {
        let mut dummy = vec![ZERO; a.nrows()];
        let scales = equilibrate_rows(&mut a, &mut dummy);
        let lu = Lu::factor(a)?;
        let cond = lu.check_condition()?;
        Ok(Self { lu, scales, cond })
    }

    pub fn cond(&self) -> f64 {
        self.cond
    }

    pub fn solve(&self, rhs: &[C64]) -> Vec<C64> {
        let mut b: Vec<C64> = rhs.iter().zip(&self.scales).map(|(v, s)| v * *s).collect();
        self.lu.solve_in_place(&mut b);
        b
    }
}

pub fn mat_vec(a: &DMatrix<C64>, x: &[C64]) -> Vec<C64> {
    let n = a.nrows();
    let mut y = vec![ZERO; n];
    for (j, col) in a.column_iter().enumerate() {
        let xj = x[j];
        if xj == ZERO {
            continue;
        }
        for (yi, aij) in y.iter_mut().zip(col.iter()) {
            *yi += aij * xj;
        }
    }
    y
}

pub fn vec_norm(x: &[C64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(n: usize, seed: u64) -> DMatrix<C64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        DMatrix::from_fn(n, n, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
    }

    #[test]
    fn solve_and_adjoint() {
        let a = random_matrix(40, 1);
        let x: Vec<C64> = (0..40).map(|i| C64::new(i as f64, 1.0 - i as f64 * 0.5)).collect();
        let b = mat_vec(&a, &x);
        let lu = Lu::factor(a.clone()).unwrap();
        let got = lu.solve(&b);
        let err: f64 = got.iter().zip(&x).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-10);
        let bh = mat_vec(&a.adjoint(), &x);
        let got = lu.solve_adjoint(&bh);
        let err: f64 = got.iter().zip(&x).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-10);
    }

    #[test]
    fn condition_estimate_is_close_for_diagonal() {
        let mut a = DMatrix::<C64>::identity(30, 30);
        a[(7, 7)] = C64::new(1e-6, 0.0);
        a[(3, 3)] = C64::new(0.0, 4.0);
        let lu = Lu::factor(a).unwrap();
        let c = lu.cond1_estimate();
        assert!((c / 4e6 - 1.0).abs() < 1e-12, "{c}");
    }

    #[test]
    fn condition_estimate_lower_bounds_truth() {
        let a = random_matrix(25, 9);
        let inv = a.clone().try_inverse().unwrap();
        let truth = norm1(&a) * norm1(&inv);
        let est = Lu::factor(a).unwrap().cond1_estimate();
        assert!(est <= truth * (1.0 + 1e-10) && est >= truth / 10.0, "{est} vs {truth}");
    }

    #[test]
    fn singular_and_ill_conditioned() {
        let a = DMatrix::<C64>::zeros(4, 4);
        assert!(matches!(Lu::factor(a), Err(Error::Singular(0))));
        let mut a = DMatrix::<C64>::identity(4, 4);
        a[(0, 1)] = C64::new(1e15, 0.0);
        assert!(matches!(Lu::factor(a).unwrap().check_condition(), Err(Error::IllConditioned { .. })));
    }
}
