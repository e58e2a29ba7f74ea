//! Complex Airy function, the integral `A₀(z) = ∫_{e^{iπ/6}z}^∞ Ai(t) dt` and
//! the wall-layer profile built from it.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::grid::{FourierMode, GridRef, RadialField};

/// Ai(0).
pub const AI0: f64 = 0.355_028_053_887_817_239_260;
/// −Ai′(0).
pub const AIP0: f64 = 0.258_819_403_792_806_798_405;

/// Series/asymptotic switchover radius.
pub const SWITCH_RADIUS: f64 = 6.0;

/// Width of the strip `Im z ≤ δ₀` where the ratio bounds are validated.
pub const DELTA0: f64 = 0.1;

fn cis(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

/// Maclaurin series for (Ai, Ai′).
pub fn airy_series(z: C64) -> (C64, C64) {
    let z3 = z * z * z;
    let one = C64::new(1.0, 0.0);
    // f = Σ t_k, g = Σ u_k and their derivatives p_k, q_k
    let (mut t, mut u) = (one, z);
    let (mut f, mut g) = (one, z);
    let (mut p, mut q) = (z * z * 0.5, one);
    let (mut fp, mut gp) = (p, q);
    for k in 1..400 {
        let kf = k as f64;
        t *= z3 / ((3.0 * kf - 1.0) * (3.0 * kf));
        u *= z3 / ((3.0 * kf) * (3.0 * kf + 1.0));
        q *= z3 / ((3.0 * kf - 2.0) * (3.0 * kf));
        p *= z3 / ((3.0 * kf) * (3.0 * kf + 2.0));
        f += t;
        g += u;
        fp += p;
        gp += q;
        let small = |term: C64, sum: C64| term.norm() <= 1e-17 * sum.norm().max(1e-300);
        if small(t, f) && small(u, g) && small(p, fp) && small(q, gp) {
            break;
        }
    }
    (f * AI0 - g * AIP0, fp * AI0 - gp * AIP0)
}

/// Large-|z| expansion, valid for |arg z| < π; used for |arg z| ≤ 2π/3.
pub fn airy_asymptotic(z: C64) -> (C64, C64) {
    let zeta = z.powf(1.5) * (2.0 / 3.0);
    let inv = C64::new(1.0, 0.0) / zeta;
    let mut sa = C64::new(1.0, 0.0);
    let mut sd = C64::new(1.0, 0.0);
    let mut uk = 1.0f64;
    let mut pw = C64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        uk *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        let vk = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * uk;
        pw *= -inv;
        let ta = pw * uk;
        if ta.norm() >= last {
            break;
        }
        last = ta.norm();
        sa += ta;
        sd += pw * vk;
        if last < 1e-17 {
            break;
        }
    }
    let e = -zeta;
    let ez = if e.re < -745.0 {
        C64::new(0.0, 0.0)
    } else if e.re > 709.0 {
        C64::new(f64::MAX, 0.0)
    } else {
        e.exp()
    };
    let z4 = z.powf(0.25);
    let c = 1.0 / (2.0 * PI.sqrt());
    (ez * sa * c / z4, -ez * sd * z4 * c)
}

/// Start radius of the inward ODE integration.
const INWARD_RADIUS: f64 = 9.0;

/// Ai(z) and Ai′(z) for complex z.
///
/// In the sector `|arg z| ≤ π/3` with `4 < |z| ≤ 9` the Maclaurin series
/// cancels terms of size `e^{|ζ|}` down to a value of size `e^{−|ζ|}` and
/// the asymptotic series is not yet converged, so there Ai is integrated
/// inward from `|z| = 9` along the ray, where it is the growing solution.
pub fn airy(z: C64) -> (C64, C64) {
    let r = z.norm();
    if r > 4.0 && r <= INWARD_RADIUS && z.arg().abs() <= PI / 3.0 {
        return airy_inward(z);
    }
    if r <= SWITCH_RADIUS {
        return airy_series(z);
    }
    airy_large(z)
}

/// Taylor steps of `y″ = zy` from `z·9/|z|` to `z`.
fn airy_inward(z: C64) -> (C64, C64) {
    let start = z * (INWARD_RADIUS / z.norm());
    let (mut y, mut dy) = airy_asymptotic(start);
    let steps = ((INWARD_RADIUS - z.norm()) / 0.25).ceil().max(1.0) as usize;
    let h = (z - start) / steps as f64;
    let mut c = start;
    for _ in 0..steps {
        // Taylor coefficients about c: (k+2)(k+1) a_{k+2} = c a_k + a_{k−1}
        let (mut prev, mut cur, mut next) = (C64::new(0.0, 0.0), y, dy);
        let (mut val, mut der) = (y + dy * h, dy);
        let mut hk = h;
        for k in 0..60 {
            let kf = k as f64;
            let a = (c * cur + prev) / ((kf + 2.0) * (kf + 1.0));
            der += a * hk * (kf + 2.0);
            hk *= h;
            val += a * hk;
            (prev, cur, next) = (cur, next, a);
            if k > 4 && (a * hk).norm() <= 1e-18 * val.norm() {
                break;
            }
        }
        y = val;
        dy = der;
        c += h;
    }
    (y, dy)
}

/// Large-argument branch: direct expansion or the connection formula.
pub fn airy_large(z: C64) -> (C64, C64) {
    if z.arg().abs() <= 2.0 * PI / 3.0 {
        return airy_asymptotic(z);
    }
    // Ai(z) = −ωAi(ωz) − ω²Ai(ω²z)
    let w = cis(2.0 * PI / 3.0);
    let w2 = w * w;
    let (a1, d1) = airy_asymptotic(w * z);
    let (a2, d2) = airy_asymptotic(w2 * z);
    (-w * a1 - w2 * a2, -w2 * d1 - w * d2)
}

/// Rotation used by [`airy_on_ray`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ray {
    PiOver6,
    FivePiOver6,
}

impl Ray {
    pub fn angle(self) -> f64 {
        match self {
            Ray::PiOver6 => PI / 6.0,
            Ray::FivePiOver6 => 5.0 * PI / 6.0,
        }
    }
}

/// `Ai(e^{iθ} t)` for real t. Beyond |t| = 200 the result underflows to 0 on
/// the decaying side and saturates at `f64::MAX` on the growing side.
pub fn airy_on_ray(t: f64, ray: Ray) -> C64 {
    airy(cis(ray.angle()) * t).0
}

/// Values of Ai and A₀ at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryEval {
    pub z: C64,
    /// Ai(e^{iπ/6} z)
    pub ai: C64,
    /// Ai′(e^{iπ/6} z)
    pub ai_prime: C64,
    pub a0: C64,
    /// A₀′(z) = −e^{iπ/6} Ai(e^{iπ/6} z)
    pub a0_prime: C64,
    /// A₀″(z) = −e^{iπ/3} Ai′(e^{iπ/6} z)
    pub a0_second: C64,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn gk15(f: &impl Fn(f64) -> C64, a: f64, b: f64) -> (C64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for i in 0..7 {
        let x = h * XGK[i];
        let s = f(c - x) + f(c + x);
        k += s * WGK[i];
        if i % 2 == 1 {
            g += s * WG[i / 2];
        }
    }
    (k * h, ((k - g) * h).norm())
}

/// Adaptive Gauss–Kronrod quadrature of a complex integrand on `[a, b]`.
pub fn adaptive_gk(f: &impl Fn(f64) -> C64, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<C64> {
    let mut stack = vec![(a, b, 0u32)];
    let mut total = C64::new(0.0, 0.0);
    let mut evals = 0usize;
    while let Some((lo, hi, depth)) = stack.pop() {
        let (v, err) = gk15(f, lo, hi);
        evals += 1;
        if err <= abs_tol.max(rel_tol * v.norm()) || depth >= 40 {
            if depth >= 40 && err > 1e3 * abs_tol.max(rel_tol * v.norm()) {
                return Err(Error::NoConvergence(format!("quadrature on [{lo}, {hi}] stalled with error {err:.3e}")));
            }
            total += v;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        }
        if evals > 200_000 {
            return Err(Error::NoConvergence("quadrature evaluation budget exhausted".into()));
        }
    }
    Ok(total)
}

/// A₀ and its derivatives without the strip precondition.
pub fn airy_a0_any(z: C64) -> Result<AiryEval> {
    let rot = cis(PI / 6.0);
    let w0 = rot * z;
    let (ai, ai_prime) = airy(w0);
    let g = |t: f64| airy(rot * (z + t)).0;
    let scale = ai.norm().max(1e-300);
    let mut acc = C64::new(0.0, 0.0);
    let t_min = (-z.re).max(0.0) + 2.0;
    let h = 1.0;
    // the series/asymptotic seam at |w| = SWITCH_RADIUS must not sit inside a panel
    let disc = SWITCH_RADIUS * SWITCH_RADIUS - z.im * z.im;
    let seams: Vec<f64> = if disc > 0.0 { vec![-z.re - disc.sqrt(), -z.re + disc.sqrt()] } else { Vec::new() };
    let mut t = 0.0;
    for _ in 0..400 {
        // the series carries ~1e-10 relative rounding noise near the seam
        let tol = 1e-14 * scale.max(acc.norm());
        let mut lo = t;
        for &c in seams.iter().filter(|&&c| c > t && c < t + h) {
            acc += adaptive_gk(&g, lo, c, tol, 1e-10)?;
            lo = c;
        }
        acc += adaptive_gk(&g, lo, t + h, tol, 1e-10)?;
        t += h;
        let wt = rot * (z + t);
        let gt = airy(wt).0;
        if t >= t_min && wt.norm() >= 10.0 && gt.norm() <= 1e-17 * acc.norm() {
            // ∫_w^∞ Ai ≈ Ai(w)/√w, with dw = e^{iπ/6} dt
            acc += gt / wt.sqrt() / rot;
            return Ok(AiryEval {
                z,
                ai,
                ai_prime,
                a0: rot * acc,
                a0_prime: -rot * ai,
                a0_second: -rot * rot * ai_prime,
            });
        }
    }
    Err(Error::NoConvergence(format!("A0 integral at z = {z} did not reach its tail")))
}

/// A₀ and derivatives on the strip `Im z ≤ δ₀`.
pub fn airy_a0(z: C64) -> Result<AiryEval> {
    if z.im > DELTA0 {
        return Err(Error::Domain(format!("Im z = {} above the strip Im z ≤ {DELTA0}", z.im)));
    }
    airy_a0_any(z)
}

/// `L = |2l/ν|^{1/3}` and `d = (λ−1)/2 − i(n²+l²)ν/(2l)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryLayerParams {
    pub big_l: f64,
    pub d: C64,
}

impl AiryLayerParams {
    pub fn new(mode: FourierMode, nu: f64, lambda: C64) -> Result<Self> {
        mode.require_l()?;
        if !(nu > 0.0) {
            return Err(Error::Domain("viscosity must be positive".into()));
        }
        let l = mode.l;
        let big_l = (2.0 * l / nu).abs().cbrt();
        let d = (lambda - 1.0) * 0.5 - C64::new(0.0, (mode.n2() + mode.l2()) * nu / (2.0 * l));
        Ok(Self { big_l, d })
    }

    pub fn ld(&self) -> C64 {
        self.d * self.big_l
    }
}

/// Boundary-layer profile `w`, normalized to `w(1) = 1`.
pub struct AiryProfile {
    params: AiryLayerParams,
    positive: bool,
    den: C64,
}

impl AiryProfile {
    pub fn new(mode: FourierMode, nu: f64, lambda: C64) -> Result<Self> {
        let params = AiryLayerParams::new(mode, nu, lambda)?;
        let positive = mode.l > 0.0;
        let ld = params.ld();
        let den = if positive { airy(cis(PI / 6.0) * ld).0 } else { airy(-cis(5.0 * PI / 6.0) * ld).0 };
        if !(den.norm() >= 1e-280) || !den.re.is_finite() {
            return Err(Error::SingularProfile(den.norm()));
        }
        Ok(Self { params, positive, den })
    }

    pub fn params(&self) -> AiryLayerParams {
        self.params
    }

    pub fn eval(&self, r: f64) -> C64 {
        if r == 1.0 {
            return C64::new(1.0, 0.0);
        }
        let AiryLayerParams { big_l, d } = self.params;
        let num = if self.positive {
            airy(cis(PI / 6.0) * big_l * (d + 1.0 - r)).0
        } else {
            airy(cis(5.0 * PI / 6.0) * big_l * (r - 1.0 - d)).0
        };
        num / self.den
    }

    pub fn field(&self, grid: &GridRef) -> RadialField {
        RadialField::from_fn(grid, |r| self.eval(r))
    }
}

/// `w(r)` for one radius; see [`AiryProfile`] for repeated evaluation.
pub fn airy_profile_w(r: f64, mode: FourierMode, nu: f64, lambda: C64) -> Result<C64> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::Domain(format!("radius {r} outside (0, 1]")));
    }
    Ok(AiryProfile::new(mode, nu, lambda)?.eval(r))
}
