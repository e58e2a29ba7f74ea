//! Harmonic comparison functions: `J` with `Δ̂₁J = 0`, `J* = (n²+l²)J/(n²+r²l²)`
//! with `Δ̂₁*J* = 0`, and the axisymmetric `I₁(|l|r)/I₁(|l|)` with `Δ̂₍₁₎J = 0`.
//! All are normalized to 1 at the wall.

use crate::error::{Error, Result};
use crate::grid::FourierMode;

/// Largest |l| accepted by the series.
pub const MAX_L: f64 = 700.0;

fn check_l(l: f64) -> Result<()> {
    if !(l.abs() <= MAX_L) {
        return Err(Error::Range(format!("|l| = {} above {MAX_L}", l.abs())));
    }
    Ok(())
}

/// Log-sum-exp accumulation of a series with positive terms given as logs.
fn log_series(first: f64, ratio: impl Fn(usize) -> f64, min_terms: usize) -> f64 {
    let mut lt = first;
    let mut acc = first;
    let mut k = 0;
    loop {
        lt += ratio(k);
        k += 1;
        let (hi, lo) = if lt > acc { (lt, acc) } else { (acc, lt) };
        acc = hi + (lo - hi).exp().ln_1p();
        if k > min_terms && lt < acc - 40.0 {
            return acc;
        }
        if k > 100_000 {
            return acc;
        }
    }
}

/// `log Σ (|n|+2k) x^{|n|+2k} |n|! / (4^k k! (|n|+k)!)`, x > 0.
fn log_jn(n: u32, x: f64) -> f64 {
    let nf = n as f64;
    let lx = x.ln();
    log_series(
        nf.ln() + nf * lx,
        |k| {
            let kf = k as f64;
            ((nf + 2.0 * kf + 2.0) / (nf + 2.0 * kf)).ln() + 2.0 * lx
                - 4f64.ln()
                - (kf + 1.0).ln()
                - (nf + kf + 1.0).ln()
        },
        (x as usize) + 4,
    )
}

/// `log I₁(x)` up to the common factor, x > 0.
fn log_i1(x: f64) -> f64 {
    let lh = (0.5 * x).ln();
    log_series(lh, |k| 2.0 * lh - (k as f64 + 1.0).ln() - (k as f64 + 2.0).ln(), (x as usize) + 4)
}

/// `J(r) = j_n(r|l|)/j_n(|l|)` with the series `j_n` above; `r^{|n|}` when l = 0.
pub fn harmonic_j(mode: FourierMode, r: f64) -> Result<f64> {
    mode.require_n()?;
    check_l(mode.l)?;
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::Domain(format!("radius {r} outside [0, 1]")));
    }
    let n = mode.n.unsigned_abs();
    if r == 0.0 {
        return Ok(0.0);
    }
    if r == 1.0 {
        return Ok(1.0);
    }
    let l = mode.l.abs();
    if l == 0.0 {
        return Ok(r.powi(n as i32));
    }
    Ok((log_jn(n, r * l) - log_jn(n, l)).exp())
}

/// `J*(r) = (n²+l²)J(r)/(n²+r²l²)`.
pub fn harmonic_j_star(mode: FourierMode, r: f64) -> Result<f64> {
    let j = harmonic_j(mode, r)?;
    Ok((mode.n2() + mode.l2()) * j / mode.q(r))
}

/// `I₁(|l|r)/I₁(|l|)`; `r` when l = 0.
pub fn harmonic_axisym(l: f64, r: f64) -> Result<f64> {
    check_l(l)?;
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::Domain(format!("radius {r} outside [0, 1]")));
    }
    if r == 0.0 {
        return Ok(0.0);
    }
    if r == 1.0 {
        return Ok(1.0);
    }
    let l = l.abs();
    if l == 0.0 {
        return Ok(r);
    }
    Ok((log_i1(r * l) - log_i1(l)).exp())
}
