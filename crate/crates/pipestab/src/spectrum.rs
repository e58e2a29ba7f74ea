//! Per-mode generalized eigenproblems `s·Bx = Ax` for the linearized operator,
//! shift-invert Arnoldi, multi-shift scans for the rightmost eigenvalue and
//! the spectral-bound estimates.
//!
//! Unknown stacks: `(U, W₁, W)` for `n ≠ 0`, `(Ω₁, W₂)` plus the scalar swirl
//! equation for `n = 0`. Eigenvalues relate to the resolvent parameter by
//! `s = il(λ − 1)`, so `il(λ − r²) = s + ilV` with `V = 1 − r²`.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::bvp::{pair_blocks, wu_blocks, Blocks};
use crate::error::{Error, Result};
use crate::grid::{FourierMode, GridRef, RadialGrid};
use crate::linalg::{mat_vec, vec_norm, CheckedSolver};
use crate::operators::assemble;
use crate::special::bessel_zero;
use crate::C64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Krylov subspace dimension.
pub const KRYLOV_DIM: usize = 60;
/// Explicit restarts before giving up.
pub const MAX_RESTARTS: usize = 20;
/// Residual bound for a reported eigenvalue.
pub const RESIDUAL_TOL: f64 = 1e-8;

fn i() -> C64 {
    C64::new(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PencilKind {
    /// `(U, W₁, W)` for `n ≠ 0`.
    Coupled,
    /// `(Ω₁, W₂)` for `n = 0`.
    Meridional,
    /// Swirl `J₁` for `n = 0`.
    Swirl,
    /// `s u = νΔ̂u` at `l = 0`, a validation reference.
    Diffusion,
}

/// Row-scaled generalized eigenproblem `s·Bx = Ax`.
#[derive(Debug, Clone)]
pub struct ModePencil {
    pub kind: PencilKind,
    pub mode: FourierMode,
    pub nu: f64,
    grid: GridRef,
    a: DMatrix<C64>,
    b: DMatrix<C64>,
    constraint: Vec<bool>,
}

impl ModePencil {
    fn from_blocks(
        kind: PencilKind,
        mode: FourierMode,
        nu: f64,
        grid: &GridRef,
        blocks: Blocks,
        evolving: usize,
    ) -> Self {
        let m = grid.len();
        let mut a = -blocks.a;
        let dim = a.nrows();
        let mut b = DMatrix::<C64>::zeros(dim, dim);
        let mut constraint = vec![true; dim];
        for blk in 0..evolving {
            for node in 1..m - 1 {
                let row = blk * m + node;
                b[(row, row)] = ONE;
                constraint[row] = false;
            }
        }
        for row in 0..dim {
            let amax = a.row(row).iter().map(|v| v.norm()).fold(0.0, f64::max);
            let bmax = b.row(row).iter().map(|v| v.norm()).fold(0.0, f64::max);
            let s = amax.max(bmax);
            if s > 0.0 {
                a.row_mut(row).scale_mut(1.0 / s);
                b.row_mut(row).scale_mut(1.0 / s);
            }
        }
        Self { kind, mode, nu, grid: grid.clone(), a, b, constraint }
    }

    pub fn a(&self) -> &DMatrix<C64> {
        &self.a
    }

    pub fn b(&self) -> &DMatrix<C64> {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn grid(&self) -> &GridRef {
        &self.grid
    }

    /// Rows with a zero `B` row (boundary and constraint rows).
    pub fn constraint_rows(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&k| self.constraint[k]).collect()
    }

    /// `‖Ax − sBx‖/‖x‖` on the scaled pencil.
    pub fn residual(&self, s: C64, x: &[C64]) -> f64 {
        let ax = mat_vec(&self.a, x);
        let bx = mat_vec(&self.b, x);
        let r: Vec<C64> = ax.iter().zip(&bx).map(|(a, b)| a - s * b).collect();
        vec_norm(&r) / vec_norm(x)
    }
}

fn check_nu(nu: f64) -> Result<()> {
    if !(nu > 0.0 && nu.is_finite()) {
        return Err(Error::Domain(format!("viscosity {nu} must be positive")));
    }
    Ok(())
}

fn advection(l: f64) -> impl Fn(f64) -> C64 + Copy {
    move |r| i() * l * (1.0 - r * r)
}

/// Pencil of the mode: `(U, W₁, W)` for `n ≠ 0`, `(Ω₁, W₂)` for `n = 0`.
pub fn assemble_pencil(mode: FourierMode, nu: f64, grid: &GridRef) -> Result<ModePencil> {
    check_nu(nu)?;
    mode.require_resolvent()?;
    let ops = assemble(mode, grid);
    let d1 = grid.d1();
    if mode.n == 0 {
        let mut blocks = pair_blocks(grid, ops.lap_one_matrix(), nu, advection(mode.l));
        blocks.derivative_row(0, 0, 1, d1, ZERO);
        blocks.value_row(1, 0, &[(1, ONE)], ZERO);
        return Ok(ModePencil::from_blocks(PencilKind::Meridional, mode, nu, grid, blocks, 1));
    }
    let mut blocks = wu_blocks(&ops, nu, advection(mode.l));
    blocks.value_row(0, 0, &[(1, ONE), (0, -ONE)], ZERO);
    blocks.derivative_row(1, 0, 2, d1, ZERO);
    blocks.value_row(2, 0, &[(2, ONE)], ZERO);
    Ok(ModePencil::from_blocks(PencilKind::Coupled, mode, nu, grid, blocks, 2))
}

/// Swirl pencil `sJ = νΔ̂₍₁₎J − ilVJ`, `J(0) = J(1) = 0`.
pub fn assemble_swirl_pencil(l: f64, nu: f64, grid: &GridRef) -> Result<ModePencil> {
    check_nu(nu)?;
    let mode = FourierMode::new(0, l);
    mode.require_l()?;
    let ops = assemble(mode, grid);
    let mut blocks = Blocks::new(grid.len(), 1);
    blocks.op(0, 0, ops.lap_one_matrix(), C64::new(-nu, 0.0));
    blocks.diag(0, 0, grid.nodes(), advection(l));
    blocks.value_row(0, 0, &[(0, ONE)], ZERO);
    blocks.value_row(0, grid.n(), &[(0, ONE)], ZERO);
    Ok(ModePencil::from_blocks(PencilKind::Swirl, mode, nu, grid, blocks, 1))
}

/// Pure-diffusion pencil `s u = νΔ̂u` at `l = 0` with `u(1) = 0`; the axis row
/// is `∂ru(0) = 0` for `n = 0` and `u(0) = 0` otherwise.
pub fn assemble_diffusion_pencil(n: i32, nu: f64, grid: &GridRef) -> Result<ModePencil> {
    check_nu(nu)?;
    let mode = FourierMode::new(n, 0.0);
    let ops = assemble(mode, grid);
    let mut blocks = Blocks::new(grid.len(), 1);
    blocks.op(0, 0, ops.lap_matrix(), C64::new(-nu, 0.0));
    blocks.value_row(0, 0, &[(0, ONE)], ZERO);
    if n == 0 {
        blocks.derivative_row(0, grid.n(), 0, grid.d1(), ZERO);
    } else {
        blocks.value_row(0, grid.n(), &[(0, ONE)], ZERO);
    }
    Ok(ModePencil::from_blocks(PencilKind::Diffusion, mode, nu, grid, blocks, 1))
}

/// All pencils describing the `W ≠ 0` dynamics of a mode (plus swirl at `n = 0`).
pub fn mode_pencils(mode: FourierMode, nu: f64, grid: &GridRef) -> Result<Vec<ModePencil>> {
    let mut out = vec![assemble_pencil(mode, nu, grid)?];
    if mode.n == 0 {
        out.push(assemble_swirl_pencil(mode.l, nu, grid)?);
    }
    Ok(out)
}

/// Eigenvalues found by one shift-invert run, sorted by descending real part.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenResult {
    pub shift: C64,
    pub eigenvalues: Vec<C64>,
    pub residuals: Vec<f64>,
    pub requested: usize,
    /// Wanted Ritz pairs that never met the residual bound.
    pub unconverged: usize,
    pub restarts: usize,
    pub krylov_dim: usize,
}

struct Krylov {
    basis: Vec<Vec<C64>>,
    h: DMatrix<C64>,
    steps: usize,
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn arnoldi(op: &impl Fn(&[C64]) -> Vec<C64>, start: &[C64], m: usize) -> Result<Krylov> {
    let nrm = vec_norm(start);
    if !(nrm > 0.0 && nrm.is_finite()) {
        return Err(Error::Numeric("Arnoldi start vector vanishes".into()));
    }
    let mut basis = vec![start.iter().map(|v| v / nrm).collect::<Vec<_>>()];
    let mut h = DMatrix::<C64>::zeros(m + 1, m);
    for j in 0..m {
        let mut w = op(&basis[j]);
        let wn = vec_norm(&w);
        // two passes of modified Gram–Schmidt
        for _ in 0..2 {
            for (k, v) in basis.iter().enumerate() {
                let c = dot(v, &w);
                h[(k, j)] += c;
                for (wi, vi) in w.iter_mut().zip(v) {
                    *wi -= c * vi;
                }
            }
        }
        let hn = vec_norm(&w);
        h[(j + 1, j)] = C64::new(hn, 0.0);
        if hn <= 1e-14 * wn.max(f64::MIN_POSITIVE) {
            return Ok(Krylov { basis, h, steps: j + 1 });
        }
        basis.push(w.iter().map(|v| v / hn).collect());
    }
    Ok(Krylov { basis, h, steps: m })
}

/// Eigenpairs `(θ, y)` of the leading `p×p` Hessenberg block, by |θ| descending.
fn ritz_pairs(h: &DMatrix<C64>, p: usize) -> Result<Vec<(C64, Vec<C64>)>> {
    let hm = h.view((0, 0), (p, p)).into_owned();
    let schur = nalgebra::Schur::try_new(hm, 1e-15, 10_000)
        .ok_or_else(|| Error::NoConvergence("Hessenberg Schur iteration".into()))?;
    let (q, t) = schur.unpack();
    let tnorm = t.iter().map(|v| v.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let mut out = Vec::with_capacity(p);
    for k in 0..p {
        let lam = t[(k, k)];
        let mut z = vec![ZERO; p];
        z[k] = ONE;
        for j in (0..k).rev() {
            let s: C64 = (j + 1..=k).map(|c| t[(j, c)] * z[c]).sum();
            let mut d = t[(j, j)] - lam;
            if d.norm() < 1e-14 * tnorm {
                d = C64::new(1e-14 * tnorm, 0.0);
            }
            z[j] = -s / d;
        }
        let mut y: Vec<C64> = (0..p).map(|r| (0..=k).map(|c| q[(r, c)] * z[c]).sum()).collect();
        let yn = vec_norm(&y);
        y.iter_mut().for_each(|v| *v /= yn);
        out.push((lam, y));
    }
    out.sort_by(|a, b| {
        b.0.norm().total_cmp(&a.0.norm()).then(a.0.re.total_cmp(&b.0.re)).then(a.0.im.total_cmp(&b.0.im))
    });
    Ok(out)
}

fn combine(basis: &[Vec<C64>], y: &[C64]) -> Vec<C64> {
    let mut x = vec![ZERO; basis[0].len()];
    for (v, c) in basis.iter().zip(y) {
        for (xi, vi) in x.iter_mut().zip(v) {
            *xi += c * vi;
        }
    }
    x
}

fn sort_desc_re(vals: &mut [(C64, f64)]) {
    vals.sort_by(|a, b| b.0.re.total_cmp(&a.0.re).then(b.0.im.total_cmp(&a.0.im)));
}

/// The `k` eigenvalues nearest `σ`, by Arnoldi on `(A − σB)⁻¹B`.
///
/// The start vector is all ones on non-constraint rows, pushed once through
/// the operator so that the infinite eigenvalues of the singular `B` drop out.
pub fn shift_invert_eigs(p: &ModePencil, sigma: C64, k: usize) -> Result<EigenResult> {
    let n = p.dim();
    if k == 0 || k + 2 > n {
        return Err(Error::Domain(format!("cannot extract {k} eigenvalues from a pencil of size {n}")));
    }
    let rejected = |reason: String| Error::ShiftRejected { re: sigma.re, im: sigma.im, reason };
    let shifted = &p.a - &p.b * sigma;
    let solver = CheckedSolver::new(shifted).map_err(|e| rejected(e.to_string()))?;
    let op = |x: &[C64]| solver.solve(&mat_vec(&p.b, x));
    let m = KRYLOV_DIM.min(n - 1).max(k + 1);
    let ones: Vec<C64> = p.constraint.iter().map(|&c| if c { ZERO } else { ONE }).collect();
    let mut start = op(&ones);
    for restart in 0..=MAX_RESTARTS {
        let kr = arnoldi(&op, &start, m)?;
        let pairs = ritz_pairs(&kr.h, kr.steps)?;
        let theta_max = pairs.first().map(|t| t.0.norm()).unwrap_or(0.0);
        let mut good = Vec::new();
        let mut next = vec![ZERO; n];
        let mut missing = 0;
        for (theta, y) in pairs.iter().take(k) {
            if theta.norm() <= 1e-12 * theta_max {
                continue;
            }
            let x = combine(&kr.basis[..kr.steps], y);
            let s = sigma + ONE / theta;
            let res = p.residual(s, &x);
            if res.is_finite() && res <= RESIDUAL_TOL {
                good.push((s, res));
            } else {
                missing += 1;
            }
            let xn = vec_norm(&x);
            for (a, b) in next.iter_mut().zip(&x) {
                *a += b / xn;
            }
        }
        if missing == 0 || restart == MAX_RESTARTS || kr.steps < m {
            if good.is_empty() {
                return Err(Error::NoConvergence(format!(
                    "no Ritz pair met residual {RESIDUAL_TOL:e} after {restart} restarts at shift {sigma}"
                )));
            }
            sort_desc_re(&mut good);
            return Ok(EigenResult {
                shift: sigma,
                eigenvalues: good.iter().map(|g| g.0).collect(),
                residuals: good.iter().map(|g| g.1).collect(),
                requested: k,
                unconverged: missing,
                restarts: restart,
                krylov_dim: m,
            });
        }
        start = next;
    }
    unreachable!("restart loop returns on its last pass")
}

/// Shift grid and extraction count of the rightmost-eigenvalue scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanConfig {
    pub re_shifts: usize,
    pub im_shifts: usize,
    pub per_shift: usize,
    /// Real shifts cover `[−extent·ν^{1/2}, 0]`.
    pub re_extent: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self { re_shifts: 5, im_shifts: 9, per_shift: 6, re_extent: 20.0 }
    }
}

/// What the scan looked at; the rightmost value is a lower estimate of the
/// true supremum and this records how it was obtained.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanCoverage {
    pub shifts: usize,
    pub rejected: usize,
    pub failed: usize,
    pub re_range: (f64, f64),
    pub im_range: (f64, f64),
    pub distinct: usize,
    pub refined: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Rightmost {
    pub mode: FourierMode,
    pub nu: f64,
    pub eigenvalue: C64,
    pub residual: f64,
    pub pencil: PencilKind,
    /// Every distinct eigenvalue found, by descending real part.
    pub eigenvalues: Vec<C64>,
    pub residuals: Vec<f64>,
    pub coverage: ScanCoverage,
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![0.5 * (a + b)];
    }
    (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
}

fn run_shift(p: &ModePencil, sigma: C64, k: usize, nudge: f64) -> (Option<EigenResult>, bool) {
    match shift_invert_eigs(p, sigma, k) {
        Ok(r) => (Some(r), false),
        Err(Error::ShiftRejected { .. }) => match shift_invert_eigs(p, sigma + C64::new(nudge, 0.5 * nudge), k) {
            Ok(r) => (Some(r), false),
            Err(_) => (None, true),
        },
        Err(_) => (None, false),
    }
}

fn merge(found: &mut Vec<(C64, f64)>, s: C64, res: f64) {
    let tol = |z: C64| 1e-7 * z.norm().max(1e-6);
    if let Some(e) = found.iter_mut().find(|e| (e.0 - s).norm() <= tol(s)) {
        if res < e.1 {
            *e = (s, res);
        }
    } else {
        found.push((s, res));
    }
}

/// Rightmost eigenvalue with the default scan.
pub fn rightmost_eigenvalue(mode: FourierMode, nu: f64, grid: &GridRef) -> Result<Rightmost> {
    rightmost_with(mode, nu, grid, &ScanConfig::default())
}

/// Multi-shift scan over `Re σ ∈ [−extent·ν^{1/2}, 0]`, `Im σ ∈ [−2|l|, 2|l|]`,
/// followed by a refinement solve next to the best candidate.
pub fn rightmost_with(mode: FourierMode, nu: f64, grid: &GridRef, cfg: &ScanConfig) -> Result<Rightmost> {
    if cfg.re_shifts == 0 || cfg.im_shifts == 0 || cfg.per_shift == 0 {
        return Err(Error::Config("scan needs at least one shift and one eigenvalue per shift".into()));
    }
    let pencils = mode_pencils(mode, nu, grid)?;
    let re_range = (-cfg.re_extent * nu.sqrt(), 0.0);
    let im_half = 2.0 * mode.l.abs();
    let im_range = (-im_half, im_half);
    let res_grid = linspace(re_range.0, re_range.1, cfg.re_shifts);
    let ims = if im_half > 0.0 { linspace(-im_half, im_half, cfg.im_shifts) } else { vec![0.0] };
    let nudge = 1e-3 * nu.sqrt();
    let mut coverage =
        ScanCoverage { shifts: 0, rejected: 0, failed: 0, re_range, im_range, distinct: 0, refined: false };
    let mut best: Option<(C64, f64, usize)> = None;
    let mut all: Vec<(C64, f64)> = Vec::new();
    for (pi, p) in pencils.iter().enumerate() {
        let mut found: Vec<(C64, f64)> = Vec::new();
        for &re in &res_grid {
            for &im in &ims {
                coverage.shifts += 1;
                match run_shift(p, C64::new(re, im), cfg.per_shift, nudge) {
                    (Some(r), _) => {
                        for (s, res) in r.eigenvalues.iter().zip(&r.residuals) {
                            merge(&mut found, *s, *res);
                        }
                    }
                    (None, true) => coverage.rejected += 1,
                    (None, false) => coverage.failed += 1,
                }
            }
        }
        for &(s, res) in &found {
            if best.is_none_or(|b| s.re > b.0.re) {
                best = Some((s, res, pi));
            }
            merge(&mut all, s, res);
        }
    }
    let (mut s, mut res, pi) =
        best.ok_or_else(|| Error::NoConvergence(format!("no eigenvalue found for mode {mode:?}")))?;
    let delta = 1e-3 * s.re.abs().max(nu);
    if let Ok(r) = shift_invert_eigs(&pencils[pi], s + C64::new(delta, delta), 1) {
        if let Some((&s2, &r2)) = r.eigenvalues.first().zip(r.residuals.first()) {
            if (s2 - s).norm() <= 1e-6 * s.norm().max(nu) {
                s = s2;
                res = r2;
                coverage.refined = true;
            }
        }
    }
    sort_desc_re(&mut all);
    coverage.distinct = all.len();
    Ok(Rightmost {
        mode,
        nu,
        eigenvalue: s,
        residual: res,
        pencil: pencils[pi].kind,
        eigenvalues: all.iter().map(|a| a.0).collect(),
        residuals: all.iter().map(|a| a.1).collect(),
        coverage,
    })
}

/// Per-mode entry of a spectral-bound run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeSpectrum {
    pub n: i32,
    pub k: i32,
    pub l: f64,
    pub rightmost: C64,
    pub residual: f64,
    /// Largest real part among all eigenvalues found for the mode.
    pub max_re: f64,
    pub eigen_count: usize,
    pub coverage: ScanCoverage,
    /// `(n, k)` of the eigensolved mode whose spectrum this one mirrors
    /// (`n → −n` leaves it unchanged, `k → −k` conjugates it).
    pub mirror_of: Option<(i32, i32)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralBound {
    pub nu: f64,
    pub lz: f64,
    pub n_max: i32,
    pub k_max: i32,
    /// Analytic heat bound `−ν j_{0,1}²` of the axisymmetric W ≡ 0 subspace.
    pub m0: f64,
    /// The same with `j_{1,1}`, for reference.
    pub m0_j11: f64,
    pub m1: f64,
    pub m: f64,
    /// `−m̂₁ / (ν/Lz)^{1/2}`.
    pub c_eff_m1: f64,
    /// `−m̂ / ν`.
    pub c_eff_m: f64,
    /// Largest real part over every eigenvalue computed.
    pub max_re_all: f64,
    pub modes: Vec<ModeSpectrum>,
    pub notes: Vec<String>,
}

/// `m̂₀`, `m̂₁` and `m̂ = max(m̂₀, m̂₁)` over `{(n, 2πk/Lz): |n| ≤ n_max, 1 ≤ |k| ≤ k_max}`.
///
/// Only `n ≥ 0`, `k ≥ 1` are eigensolved; the remaining modes have the same
/// or the conjugate spectrum and are listed as mirrors.
pub fn spectral_bound(
    nu: f64,
    lz: f64,
    n_max: i32,
    k_max: i32,
    grid: &GridRef,
    cfg: &ScanConfig,
) -> Result<SpectralBound> {
    check_nu(nu)?;
    if !(lz > 0.0 && lz.is_finite()) || n_max < 0 || k_max < 1 {
        return Err(Error::Config(format!("invalid mode set: Lz={lz}, n_max={n_max}, k_max={k_max}")));
    }
    let base: Vec<(i32, i32)> = (0..=n_max).flat_map(|n| (1..=k_max).map(move |k| (n, k))).collect();
    let solved: Vec<Result<Rightmost>> =
        base.par_iter().map(|&(n, k)| rightmost_with(FourierMode::from_k(n, k, lz), nu, grid, cfg)).collect();
    let mut modes = Vec::new();
    for (&(n, k), r) in base.iter().zip(solved) {
        let r = r?;
        let max_re = r.eigenvalues.iter().map(|s| s.re).fold(f64::NEG_INFINITY, f64::max);
        let entry = |nn: i32, kk: i32, mirror: Option<(i32, i32)>| ModeSpectrum {
            n: nn,
            k: kk,
            l: 2.0 * std::f64::consts::PI * kk as f64 / lz,
            rightmost: if kk < 0 { r.eigenvalue.conj() } else { r.eigenvalue },
            residual: r.residual,
            max_re,
            eigen_count: r.eigenvalues.len(),
            coverage: r.coverage.clone(),
            mirror_of: mirror,
        };
        modes.push(entry(n, k, None));
        modes.push(entry(n, -k, Some((n, k))));
        if n != 0 {
            modes.push(entry(-n, k, Some((n, k))));
            modes.push(entry(-n, -k, Some((n, k))));
        }
    }
    modes.sort_by_key(|m| (m.n, m.k));
    let m1 = modes.iter().map(|m| m.rightmost.re).fold(f64::NEG_INFINITY, f64::max);
    let max_re_all = modes.iter().map(|m| m.max_re).fold(f64::NEG_INFINITY, f64::max);
    let j01 = bessel_zero(0, 1)?;
    let j11 = bessel_zero(1, 1)?;
    let m0 = -nu * j01 * j01;
    let m = m0.max(m1);
    Ok(SpectralBound {
        nu,
        lz,
        n_max,
        k_max,
        m0,
        m0_j11: -nu * j11 * j11,
        m1,
        m,
        c_eff_m1: -m1 / (nu / lz).sqrt(),
        c_eff_m: -m / nu,
        max_re_all,
        modes,
        notes: vec![
            "m0 is the analytic heat bound of the axisymmetric W=0 subspace, not eigensolved".into(),
            "the W=0 swirl subspace for n!=0 is bounded by the energy identity, not eigensolved".into(),
            "m1 is a lower estimate of the supremum: eigenvalues outside the scan window may be missed".into(),
        ],
    })
}

/// Least-squares slope of `log(−Re s)` against `log ν`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub points: Vec<(f64, f64)>,
}

/// Fit `log(−re)` against `log ν` over `(ν, re)` points.
pub fn fit_slope(points: &[(f64, f64)]) -> Result<SlopeFit> {
    if points.len() < 3 {
        return Err(Error::Domain(format!("slope fit needs at least 3 points, got {}", points.len())));
    }
    if let Some(&(nu, re)) = points.iter().find(|p| !(p.0 > 0.0 && p.1 < 0.0)) {
        return Err(Error::Domain(format!("cannot take logs at ν={nu}, Re s={re}")));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| (-p.1).ln()).collect();
    let nf = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / nf, ys.iter().sum::<f64>() / nf);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Ok(SlopeFit { slope: sxy / sxx, points: points.to_vec() })
}

/// Enhanced-dissipation slope of the rightmost eigenvalue of `mode`.
pub fn dissipation_slope(mode: FourierMode, nus: &[f64], grid: &GridRef, cfg: &ScanConfig) -> Result<SlopeFit> {
    if nus.len() < 3 {
        return Err(Error::Domain(format!("slope fit needs at least 3 points, got {}", nus.len())));
    }
    let pts: Result<Vec<(f64, f64)>> =
        nus.par_iter().map(|&nu| rightmost_with(mode, nu, grid, cfg).map(|r| (nu, r.eigenvalue.re))).collect();
    fit_slope(&pts?)
}

/// Slope of the least-damped pure-diffusion eigenvalue, the ν¹ control.
pub fn diffusion_slope(n: i32, nus: &[f64], grid: &GridRef) -> Result<SlopeFit> {
    let mut pts = Vec::new();
    for &nu in nus {
        let p = assemble_diffusion_pencil(n, nu, grid)?;
        let r = shift_invert_eigs(&p, ZERO, 3)?;
        pts.push((nu, r.eigenvalues[0].re));
    }
    fit_slope(&pts)
}

/// Eigenvalues of the swirl operator `νΔ̂₍₁₎ − ilV` assembled directly on the
/// interior nodes (Dirichlet data eliminated), all of them, by descending
/// real part. Independent of the pencil path.
pub fn swirl_dense_spectrum(l: f64, nu: f64, grid: &RadialGrid) -> Result<Vec<C64>> {
    check_nu(nu)?;
    let m = grid.len();
    let (d1, d2) = (grid.d1(), grid.d2());
    let nodes = grid.nodes();
    let dim = m - 2;
    let mat = DMatrix::<C64>::from_fn(dim, dim, |a, b| {
        let (r, j) = (nodes[a + 1], b + 1);
        let mut v = nu * (d2[(a + 1, j)] + d1[(a + 1, j)] / r);
        if a == b {
            v -= nu * (1.0 / (r * r) + l * l);
            return C64::new(v, -l * (1.0 - r * r));
        }
        C64::new(v, 0.0)
    });
    let mut ev: Vec<C64> = nalgebra::Schur::try_new(mat, 1e-15, 100_000)
        .ok_or_else(|| Error::NoConvergence("dense swirl Schur iteration".into()))?
        .unpack()
        .1
        .diagonal()
        .iter()
        .copied()
        .collect();
    ev.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
    Ok(ev)
}
