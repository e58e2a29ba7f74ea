//! Scale functions A(s), A₁(s), Ã, Ã₁ and the frozen spectral parameter λ̃.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::grid::FourierMode;

/// Largest admissible `c₅` in `lλᵢ ≤ c₅|νnl|^{1/2}`.
pub const C5: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleValues {
    pub s: f64,
    /// A(s) = |l(λ−s²)/ν|^{1/2} + |ls/ν|^{1/3} + |l| + |n/s|
    pub a: f64,
    /// A₁(s) = |l(λ−s²)/ν|^{1/2} + |l| + |n/s|
    pub a1: f64,
    /// Ã = |l(λ−1)/ν|^{1/2} + |l/ν|^{1/3} + 1 + |l|
    pub a_tilde: f64,
    /// Ã₁ = (|l(λ−1)/ν| + 1 + l²)^{1/2}
    pub a1_tilde: f64,
    /// The four summands of A(s) in order.
    pub components: [f64; 4],
}

/// Evaluate every scale at `s`.
pub fn scale_a(s: f64, mode: FourierMode, nu: f64, lambda: C64) -> ScaleValues {
    let l = mode.l;
    let c = [
        (l * (lambda - s * s) / nu).norm().sqrt(),
        (l * s / nu).abs().cbrt(),
        l.abs(),
        if mode.n == 0 { 0.0 } else { (mode.nf() / s).abs() },
    ];
    let k = (l * (lambda - 1.0) / nu).norm();
    ScaleValues {
        s,
        a: c.iter().sum(),
        a1: c[0] + c[2] + c[3],
        a_tilde: k.sqrt() + (l / nu).abs().cbrt() + 1.0 + l.abs(),
        a1_tilde: (k + 1.0 + l * l).sqrt(),
        components: c,
    }
}

/// `(n²/s² + l² + |l(λ−s²)|/ν)^{1/2}`.
pub fn frozen_a1(s: f64, mode: FourierMode, nu: f64, lambda: C64) -> f64 {
    (mode.n2() / (s * s) + mode.l2() + (mode.l * (lambda - s * s)).norm() / nu).sqrt()
}

fn case_one(s: f64, mode: FourierMode, nu: f64, lambda: C64) -> bool {
    let l = mode.l;
    let lli = l * lambda.im;
    let cap = ((l * (lambda - s * s)).norm() / 2.0).max(nu * (mode.n2() / (s * s) + mode.l2()) / 3.0);
    lli <= cap && (nu / (s * l)).abs().cbrt() * frozen_a1(s, mode, nu, lambda) >= 1.0
}

/// Frozen parameter: λ itself when the layer at `s` is already resolved by
/// the spectral distance, otherwise `s² − i|νs²l²|^{1/3}/l`.
pub fn tilde_lambda(s: f64, mode: FourierMode, nu: f64, lambda: C64) -> Result<C64> {
    mode.require_l()?;
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::Domain(format!("s = {s} outside (0, 1]")));
    }
    if !(nu > 0.0) {
        return Err(Error::Domain("viscosity must be positive".into()));
    }
    if mode.l * lambda.im > C5 * (nu * mode.nf() * mode.l).abs().sqrt() {
        return Err(Error::Domain("lλᵢ exceeds c₅|νnl|^{1/2}".into()));
    }
    if case_one(s, mode, nu, lambda) {
        return Ok(lambda);
    }
    let l = mode.l;
    Ok(C64::new(s * s, -(nu * s * s * l * l).abs().cbrt() / l))
}
