//! Ordinary Bessel functions of integer order and their positive zeros.

use crate::error::{Error, Result};

/// Largest zero index served by [`bessel_zero`].
pub const MAX_ZERO_INDEX: u32 = 10;

fn series(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = 1.0;
    for k in 1..=n {
        term *= half / k as f64;
    }
    let mut sum = term;
    let h2 = half * half;
    for k in 1..300 {
        term *= -h2 / (k as f64 * (k + n) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

/// Miller's backward recurrence normalized by `J₀ + 2ΣJ₂ₖ = 1`.
fn miller(n: u32, x: f64) -> f64 {
    let top = (n as f64).max(x);
    let mut m = (top + 30.0 + (60.0 * top).sqrt()) as usize;
    m += m % 2;
    let (mut jp, mut j) = (0.0f64, 1e-300f64);
    let mut norm = 0.0;
    let mut out = 0.0;
    for k in (1..=m).rev() {
        let jm = 2.0 * k as f64 / x * j - jp;
        jp = j;
        j = jm;
        if jp.abs() > 1e250 {
            j *= 1e-250;
            jp *= 1e-250;
            out *= 1e-250;
            norm *= 1e-250;
        }
        // j now holds J_{k-1}
        if k - 1 == n as usize {
            out = j;
        }
        if (k - 1) % 2 == 0 && k - 1 > 0 {
            norm += 2.0 * j;
        }
    }
    norm += j;
    out / norm
}

/// `J_n(x)` for `x ≥ 0`.
pub fn bessel_j(n: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    if x <= 8.0 {
        series(n, x)
    } else {
        miller(n, x)
    }
}

/// k-th positive zero of `J_n`, by bracketing and bisection.
pub fn bessel_zero(n: u32, k: u32) -> Result<f64> {
    if k == 0 || k > MAX_ZERO_INDEX {
        return Err(Error::Range(format!("zero index {k} outside 1..={MAX_ZERO_INDEX}")));
    }
    if n > 50 {
        return Err(Error::Range(format!("order {n} above 50")));
    }
    let step = 0.05;
    let mut a = (n as f64).max(step);
    let mut fa = bessel_j(n, a);
    let mut found = 0;
    loop {
        let b = a + step;
        let fb = bessel_j(n, b);
        if fa == 0.0 || fa.signum() != fb.signum() {
            found += 1;
            if found == k {
                return Ok(bisect(|x| bessel_j(n, x), a, b));
            }
        }
        a = b;
        fa = fb;
        if a > 200.0 {
            return Err(Error::NoConvergence("zero search ran past x = 200".into()));
        }
    }
}

fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    if fa == 0.0 {
        return a;
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_zeros() {
        assert!((bessel_zero(0, 1).unwrap() - 2.404_825_557_695_773).abs() < 1e-12);
        assert!((bessel_zero(1, 1).unwrap() - 3.831_705_970_207_512).abs() < 1e-12);
        assert!((bessel_zero(2, 3).unwrap() - 11.619_841_172_149_06).abs() < 1e-11);
        assert!((bessel_zero(0, 10).unwrap() - 30.634_606_468_431_98).abs() < 1e-10);
    }

    #[test]
    fn zeros_increase() {
        for n in 0..4 {
            let z: Vec<f64> = (1..=10).map(|k| bessel_zero(n, k).unwrap()).collect();
            assert!(z.windows(2).all(|w| w[1] > w[0] + 2.0));
        }
        assert!(bessel_zero(0, 11).is_err());
        assert!(bessel_zero(0, 0).is_err());
    }

    #[test]
    fn series_and_recurrence_overlap() {
        for n in 0..5 {
            for x in [6.0, 7.5, 8.0] {
                let a = series(n, x);
                let b = miller(n, x);
                assert!((a - b).abs() < 1e-13, "n={n} x={x}: {a} {b}");
            }
        }
    }
}
