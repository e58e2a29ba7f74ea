//! Effective constants for every resolvent, elliptic and lower bound.
//!
//! Each inequality `left ≤ C·right` becomes a [`BoundReport`] with
//! `c_eff = left/right`; lower bounds `left ≥ c·right` report `c_eff = left/right`
//! as well and are expected to stay away from zero. Only inequalities with an
//! explicit constant carry a hard pass/fail.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::bvp::{
    solve_approx_elliptic, solve_axisym, solve_homogeneous, solve_scalar, solve_toy, AxisymKind, ResolventSolution,
    ScalarKind,
};
use crate::error::{Error, Result};
use crate::grid::{energy_e, l1_norm, norm_one, subinterval_norm, weighted_inner, FourierMode, GridRef, RadialField};
use crate::operators::assemble;
use crate::special::{scale_a, tilde_lambda};

/// Working value of every "sufficiently small" hypothesis constant.
pub const HYPOTHESIS_C: f64 = 0.01;

/// Relative slack applied to explicit-constant comparisons.
pub const EXPLICIT_SLACK: f64 = 1e-9;

/// Shape of the compared inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum BoundKind {
    /// `left ≤ C·right` with an unknown constant.
    Upper,
    /// `left ≥ c·right` with an unknown constant.
    Lower,
    /// `left ≤ constant·right`, hard pass/fail.
    Explicit(f64),
    /// A relative residual that should be small.
    Residual,
}

/// Parameters attached to a report row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Case {
    pub nu: f64,
    pub n: i32,
    pub l: f64,
    pub lambda_re: f64,
    pub lambda_im: f64,
    pub s: f64,
    pub grid_n: usize,
}

impl Case {
    pub fn new(mode: FourierMode, nu: f64, lambda: C64, s: f64, grid_n: usize) -> Self {
        Self { nu, n: mode.n, l: mode.l, lambda_re: lambda.re, lambda_im: lambda.im, s, grid_n }
    }

    pub fn mode(&self) -> FourierMode {
        FourierMode::new(self.n, self.l)
    }

    pub fn lambda(&self) -> C64 {
        C64::new(self.lambda_re, self.lambda_im)
    }
}

/// One compared inequality.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub id: String,
    pub case: Case,
    pub left: f64,
    pub right: f64,
    pub c_eff: f64,
    pub kind: BoundKind,
    pub pass: Option<bool>,
    /// Whether the working-constant hypotheses of the statement hold.
    pub hypothesis: bool,
    /// Both sides vanish (or the data is below resolution).
    pub trivial: bool,
    pub error: Option<String>,
}

fn ratio(left: f64, right: f64) -> (f64, bool) {
    if left == 0.0 && right == 0.0 {
        (0.0, true)
    } else if right == 0.0 {
        (f64::INFINITY, false)
    } else {
        (left / right, false)
    }
}

impl BoundReport {
    fn base(id: &str, case: Case, left: f64, right: f64, kind: BoundKind) -> Self {
        let (c_eff, trivial) = ratio(left, right);
        let pass = match kind {
            BoundKind::Explicit(c) => Some(left <= c * right * (1.0 + EXPLICIT_SLACK) + f64::MIN_POSITIVE),
            _ => None,
        };
        Self { id: id.to_string(), case, left, right, c_eff, kind, pass, hypothesis: true, trivial, error: None }
    }

    pub fn upper(id: &str, case: Case, left: f64, right: f64) -> Self {
        Self::base(id, case, left, right, BoundKind::Upper)
    }

    pub fn lower(id: &str, case: Case, left: f64, right: f64) -> Self {
        Self::base(id, case, left, right, BoundKind::Lower)
    }

    pub fn explicit(id: &str, case: Case, left: f64, right: f64, constant: f64) -> Self {
        Self::base(id, case, left, right, BoundKind::Explicit(constant))
    }

    pub fn residual(id: &str, case: Case, value: f64) -> Self {
        Self::base(id, case, value, 1.0, BoundKind::Residual)
    }

    pub fn failed(id: &str, case: Case, err: &Error) -> Self {
        let mut r = Self::base(id, case, f64::NAN, f64::NAN, BoundKind::Upper);
        r.c_eff = f64::NAN;
        r.trivial = false;
        r.error = Some(err.to_string());
        r
    }

    pub fn with_hypothesis(mut self, holds: bool) -> Self {
        self.hypothesis = holds;
        self
    }

    pub fn mark_trivial(mut self) -> Self {
        self.trivial = true;
        self
    }

    /// Hard failure: an explicit comparison that does not hold, or an error.
    pub fn is_hard_failure(&self) -> bool {
        self.error.is_some() || self.pass == Some(false)
    }
}

fn pair_norm(a: &RadialField, b: &RadialField) -> f64 {
    (a.norm().powi(2) + b.norm().powi(2)).sqrt()
}

/// `|νnl|^{1/2} + |νλl²|^{1/3}` (with `|λ|` for complex λ).
pub fn dissipation_scale(mode: FourierMode, nu: f64, lambda: C64) -> f64 {
    (nu * mode.nf() * mode.l).abs().sqrt() + (nu * lambda.norm() * mode.l2()).cbrt()
}

/// `lλᵢ ≤ c|νnl|^{1/2}` with the working constant.
pub fn spectral_hypothesis(mode: FourierMode, nu: f64, lambda: C64) -> bool {
    mode.l * lambda.im <= HYPOTHESIS_C * (nu * mode.nf() * mode.l).abs().sqrt()
}

fn viscosity_hypothesis(mode: FourierMode, nu: f64) -> bool {
    nu < HYPOTHESIS_C * mode.l.abs().min(1.0)
}

/// Relative residuals of the real-part and imaginary-part energy balances for
/// a solution of the artificial-boundary system with real λ.
pub fn energy_identity_residuals(sol: &ResolventSolution, f1: &RadialField, f2: &RadialField) -> Result<(f64, f64)> {
    let mode = sol.mode;
    let l = mode.l;
    let lam = sol.lambda.re;
    let ops = assemble(mode, sol.u.grid());
    let uf1 = weighted_inner(&sol.u, f1)?;
    let f2w1 = weighted_inner(f2, &sol.w1)?;
    let lhs_re = (uf1 + f2w1).re;
    let rhs_re = 2.0 * sol.nu * norm_one(&sol.u, mode)?.powi(2);
    let re = (lhs_re - rhs_re).abs() / lhs_re.abs().max(rhs_re.abs()).max(f64::MIN_POSITIVE);
    let r_times = |f: &RadialField| f.map(|r, v| v * r).norm().powi(2);
    let lhs_im = (uf1 - f2w1).im;
    let terms = [
        2.0 * sol.nu * weighted_inner(&sol.u, &ops.lap1_adj(&sol.w1))?.im,
        l * (r_times(&sol.u) - lam * sol.u.norm().powi(2)),
        l * (r_times(&sol.w1) - lam * sol.w1.norm().powi(2)),
        4.0 * mode.n2() * l * energy_e(&sol.w, mode)?,
    ];
    let rhs_im: f64 = terms.iter().sum();
    let scale = terms.iter().map(|t| t.abs()).fold(lhs_im.abs(), f64::max);
    let im = if scale == 0.0 { 0.0 } else { (lhs_im - rhs_im).abs() / scale };
    Ok((if lhs_re == 0.0 && rhs_re == 0.0 { 0.0 } else { re }, im))
}

/// The three resolvent bounds for one solve.
pub fn check_resolvent_bound(sol: &ResolventSolution, f1: &RadialField, f2: &RadialField) -> Vec<BoundReport> {
    let mode = sol.mode;
    let (nu, lambda) = (sol.nu, sol.lambda);
    let case = Case::new(mode, nu, lambda, 1.0, sol.u.grid().n());
    let hyp = spectral_hypothesis(mode, nu, lambda);
    let fnorm = pair_norm(f1, f2);
    let scale = dissipation_scale(mode, nu, lambda);
    let scale_re = (nu * mode.nf() * mode.l).abs().sqrt() + (nu * lambda.re.abs() * mode.l2()).cbrt();
    let prefactor = (mode.nf().abs() + mode.l.abs()).powf(2.5) / mode.n2() / mode.l.abs().sqrt();
    let l2 = (scale + (mode.l * lambda.im).abs()) * pair_norm(&sol.w1, &sol.u);
    let dw = sol.w.dr().norm();
    let wall = sol.dw_wall.norm_sqr();
    vec![
        BoundReport::upper("resolvent_l2", case, l2, fnorm).with_hypothesis(hyp),
        BoundReport::upper("resolvent_dw_l2", case, dw, prefactor * scale_re.powf(-0.5) * fnorm).with_hypothesis(hyp),
        BoundReport::upper("resolvent_dw_wall", case, wall, prefactor * scale.powf(-1.5) * fnorm * fnorm)
            .with_hypothesis(hyp),
    ]
}

/// Key weighted inequality for λ > 1 with explicit constant 1:
/// `∫4n²r|W|²(|n|+1)/((n²+r²l²)²(λ−r²))dr ≤ E(W)`.
pub fn check_ekey(w: &RadialField, mode: FourierMode, lambda: f64) -> Result<BoundReport> {
    if !(lambda > 1.0) {
        return Err(Error::Domain(format!("λ = {lambda} must exceed 1")));
    }
    mode.require_n()?;
    let e = energy_e(w, mode)?;
    let g = w.grid();
    let h: Vec<f64> = g
        .nodes()
        .iter()
        .zip(w.values())
        .map(|(&r, v)| {
            let q = mode.q(r);
            4.0 * mode.n2() * v.norm_sqr() * (mode.nf().abs() + 1.0) / (q * q * (lambda - r * r))
        })
        .collect();
    let left = crate::grid::integrate_r(g, &h);
    let case = Case::new(mode, 0.0, C64::new(lambda, 0.0), 1.0, g.n());
    Ok(BoundReport::explicit("energy_key", case, left, e, 1.0))
}

/// Coercivity of Δ̂₁* with explicit constant 2:
/// `‖W₁‖₁² ≤ −2Re⟨W₁, Δ̂₁*W₁⟩` for `W₁(0) = W₁(1) = 0`.
pub fn check_w1_coercive(w1: &RadialField, mode: FourierMode) -> Result<BoundReport> {
    let left = norm_one(w1, mode)?.powi(2);
    let ops = assemble(mode, w1.grid());
    let right = -weighted_inner(w1, &ops.lap1_adj(w1))?.re;
    let case = Case::new(mode, 0.0, C64::new(0.0, 0.0), 1.0, w1.grid().n());
    Ok(BoundReport::explicit("w1_coercive", case, left, right, 2.0))
}

/// Fields and scalars of the critical-layer argument.
#[derive(Debug, Clone)]
pub struct ProofQuantities {
    pub r0: f64,
    pub delta: f64,
    pub f11: RadialField,
    pub f12: RadialField,
    pub f22: RadialField,
    pub g: f64,
    pub e: f64,
    pub chi0: RadialField,
    /// `δ/r₀` and `|δl|`, the two regime parameters.
    pub delta_over_r0: f64,
    pub delta_l: f64,
}

/// Quantities of the critical-layer estimates, computed from a discrete solution.
pub fn proof_quantities(sol: &ResolventSolution, f1: &RadialField, f2: &RadialField) -> Result<ProofQuantities> {
    let (mode, nu) = (sol.mode, sol.nu);
    let lambda = sol.lambda;
    if lambda.im != 0.0 || !(lambda.re > 0.0 && lambda.re <= 1.0) {
        return Err(Error::Domain(format!("λ = {lambda} outside (0, 1]")));
    }
    let lam = lambda.re;
    let r0 = lam.sqrt();
    let delta = (nu / (mode.l * r0).abs()).cbrt();
    let ops = assemble(mode, sol.u.grid());
    let c = |x: f64| C64::new(x, 0.0);
    let lap_minus_lap1_u = ops.lap(&sol.u).sub(&ops.lap1(&sol.u))?;
    let lap_minus_adj_w1 = ops.lap(&sol.w1).sub(&ops.lap1_adj(&sol.w1))?;
    let f12 = f1.sub(f2)?.add(&lap_minus_lap1_u.scale(c(nu)))?.add(&lap_minus_adj_w1.scale(c(nu)))?;
    let f11 = f1.add(&ops.lap(&sol.u1).scale(c(nu)))?.add(&lap_minus_adj_w1.scale(c(nu)))?;
    let f22 = f2.add(&ops.lap1(&sol.u).scale(c(nu)))?.scale(C64::new(0.0, -1.0 / mode.l));
    let g = f11.norm() + mode.l.abs() * r0 * delta * delta * norm_one(&sol.w1, mode)? + f2.norm();
    let e = energy_e(&sol.w, mode)?;
    let chi0 =
        RadialField::from_real_fn(sol.u.grid(), |r| if (r - r0).abs() >= delta { 1.0 / (lam - r * r) } else { 0.0 });
    Ok(ProofQuantities {
        r0,
        delta,
        f11,
        f12,
        f22,
        g,
        e,
        chi0,
        delta_over_r0: delta / r0,
        delta_l: (delta * mode.l).abs(),
    })
}

/// Critical-layer bounds derived from [`proof_quantities`].
pub fn check_critical_layer(
    sol: &ResolventSolution,
    f1: &RadialField,
    f2: &RadialField,
    pq: &ProofQuantities,
) -> Result<Vec<BoundReport>> {
    let mode = sol.mode;
    let case = Case::new(mode, sol.nu, sol.lambda, 1.0, sol.u.grid().n());
    let in_regime = pq.delta_over_r0 <= 0.3f64.min(1.0 / mode.nf().abs()) && pq.delta_l <= 0.3;
    let (r0, d) = (pq.r0, pq.delta);
    let rw1 = sol.w1.map(|r, v| v * r).norm();
    let w1 = r0 * d * sol.w1.norm() + d * rw1;
    let w1_rhs = r0 * d * d * norm_one(&sol.w1, mode)? + pq.f22.norm();
    let fnorm = pair_norm(f1, f2);
    let res = mode.l.abs() * r0 * d * pair_norm(&sol.w1, &sol.u);
    let en_rhs =
        (r0 * d).powf(-0.5) * (mode.nf().abs() + r0 * mode.l.abs()).powf(1.5) / (mode.n2() * mode.l.abs()) * fnorm;
    Ok(vec![
        BoundReport::upper("critical_layer_w1", case, w1, w1_rhs).with_hypothesis(in_regime),
        BoundReport::upper("critical_layer_resolvent", case, res, fnorm).with_hypothesis(in_regime),
        BoundReport::upper("critical_layer_energy", case, pq.e.sqrt(), en_rhs).with_hypothesis(in_regime),
    ])
}

/// `|∂rW(1)|·A` for the homogeneous coupled system.
pub fn check_homogeneous_lower(mode: FourierMode, nu: f64, lambda: C64, grid: &GridRef) -> Result<BoundReport> {
    let sol = solve_homogeneous(mode, nu, lambda, grid)?;
    let a = scale_a(1.0, mode, nu, lambda).a;
    let case = Case::new(mode, nu, lambda, 1.0, grid.n());
    let hyp = spectral_hypothesis(mode, nu, lambda) && viscosity_hypothesis(mode, nu);
    Ok(BoundReport::lower("homogeneous_wall_slope_lower", case, sol.dw_wall.norm(), 1.0 / a).with_hypothesis(hyp))
}

/// Wall slope lower bound and L²(0,s) decay of the approximate elliptic pair.
pub fn check_approx_elliptic(mode: FourierMode, nu: f64, lambda: C64, grid: &GridRef) -> Result<Vec<BoundReport>> {
    let sol = solve_approx_elliptic(mode, nu, lambda, grid)?;
    let a = scale_a(1.0, mode, nu, lambda).a;
    let hyp = spectral_hypothesis(mode, nu, lambda) && viscosity_hypothesis(mode, nu);
    let mut out = vec![BoundReport::lower(
        "approx_wall_slope_lower",
        Case::new(mode, nu, lambda, 1.0, grid.n()),
        sol.d_secondary_wall.norm(),
        1.0 / a,
    )
    .with_hypothesis(hyp)];
    let u = &sol.primary;
    let floor = 1e-10 * u.max_abs();
    for s in [0.25, 0.5, 0.75, 1.0] {
        let left = subinterval_norm(u, 0.0, s)?.powi(2);
        let us = u.eval(s).norm();
        let right = s * us * us / scale_a(s, mode, nu, lambda).a;
        let r = BoundReport::upper("approx_l2_decay", Case::new(mode, nu, lambda, s, grid.n()), left, right)
            .with_hypothesis(hyp);
        out.push(if us < floor { r.mark_trivial() } else { r });
    }
    Ok(out)
}

/// Constant-coefficient toy pair bounds.
pub fn check_toy(mode: FourierMode, nu: f64, lambda: C64, grid: &GridRef) -> Result<Vec<BoundReport>> {
    let sol = solve_toy(mode, nu, lambda, grid)?;
    let a1 = scale_a(1.0, mode, nu, lambda).a1;
    let case = Case::new(mode, nu, lambda, 1.0, grid.n());
    let l = mode.l;
    let hyp = 2.0 * l * lambda.im <= (l * (lambda - 1.0)).norm() || 3.0 * l * lambda.im <= nu * (mode.n2() + mode.l2());
    let u = &sol.primary;
    let weighted = u.map(|r, v| v * (1.0 - r * r)).norm().powi(2);
    Ok(vec![
        BoundReport::upper("toy_wall_derivative_u", case, sol.d_primary_wall.norm(), a1).with_hypothesis(hyp),
        BoundReport::lower("toy_wall_slope_lower", case, sol.d_secondary_wall.norm(), 1.0 / a1).with_hypothesis(hyp),
        BoundReport::upper("toy_l2", case, u.norm().powi(2), 1.0 / a1).with_hypothesis(hyp),
        BoundReport::upper("toy_weighted_l2", case, weighted, a1.powi(-3)).with_hypothesis(hyp),
    ])
}

/// Frozen-coefficient problem on `(0, s)` with `λ̃`.
pub fn check_frozen(mode: FourierMode, nu: f64, lambda: C64, s: f64, grid: &GridRef) -> Result<Vec<BoundReport>> {
    let lt = tilde_lambda(s, mode, nu, lambda)?;
    let zero = RadialField::zeros(grid);
    let u = solve_scalar(ScalarKind::Dhat1Frozen, mode, nu, lt, s, &zero, C64::new(1.0, 0.0), grid)?;
    let a1s = scale_a(s, mode, nu, lt).a1 / s;
    let case = Case::new(mode, nu, lambda, s, grid.n());
    let weighted = u.map(|r, v| v * (s * s - r * r)).norm().powi(2);
    Ok(vec![
        BoundReport::upper("frozen_l2", case, u.norm().powi(2), 1.0 / a1s),
        BoundReport::upper("frozen_weighted_l2", case, weighted, a1s.powi(-3)),
    ])
}

/// Inhomogeneous scalar bounds on `(0, s)` for a given forcing.
pub fn check_scalar(
    mode: FourierMode,
    nu: f64,
    lambda: C64,
    s: f64,
    f: &RadialField,
    grid: &GridRef,
) -> Result<Vec<BoundReport>> {
    let case = Case::new(mode, nu, lambda, s, grid.n());
    let sub = crate::bvp::sub_grid(grid, s)?;
    let f_sub = if f.grid().same_as(&sub) { f.clone() } else { f.resample(&sub) };
    let fnorm = f_sub.norm();
    let l = mode.l;
    let layer = nu.powf(1.0 / 6.0) * l.abs().powf(5.0 / 6.0);
    let mut out = Vec::new();
    if lambda.im == 0.0 {
        let u = solve_scalar(ScalarKind::Dhat, mode, nu, lambda, s, &f_sub, C64::new(0.0, 0.0), grid)?;
        let lam = lambda.re;
        let left = (nu * l * l + dissipation_scale(mode, nu, lambda)) * u.norm()
            + l.abs() * u.map(|r, v| v * (lam - r * r)).norm()
            + layer * l1_norm(&u.map(|r, v| v * r));
        out.push(BoundReport::upper("scalar_dhat_bound", case, left, fnorm));
    }
    let u = solve_scalar(ScalarKind::Dhat1, mode, nu, lambda, s, &f_sub, C64::new(0.0, 0.0), grid)?;
    let left = dissipation_scale(mode, nu, lambda) * u.norm() + layer * l1_norm(&u.map(|r, v| v * r));
    out.push(
        BoundReport::upper("scalar_dhat1_bound", case, left, fnorm)
            .with_hypothesis(spectral_hypothesis(mode, nu, lambda)),
    );
    Ok(out)
}

/// The two error terms of the homogeneous-versus-approximate comparison.
pub fn check_error_terms(
    mode: FourierMode,
    nu: f64,
    lambda: C64,
    grid: &GridRef,
) -> Result<(BoundReport, BoundReport)> {
    mode.require_n()?;
    let sol = solve_approx_elliptic(mode, nu, lambda, grid)?;
    let a = scale_a(1.0, mode, nu, lambda).a;
    let (n2, l2) = (mode.n2(), mode.l2());
    let case = Case::new(mode, nu, lambda, 1.0, grid.n());
    // (2Δ̂ − Δ̂₁ − Δ̂₁*) is the multiplication by −4l²n²/(n²+r²l²)²
    let comm = sol.primary.map(|r, v| v * (4.0 * l2 * n2 / mode.q(r).powi(2))).norm();
    let w = sol.secondary.as_ref().expect("pair");
    let coup = w.map(|r, v| v * (4.0 * n2 * mode.l.abs() / mode.q(r))).norm();
    Ok((
        BoundReport::upper("commutator_error", case, comm, l2 * n2 * (n2 + l2).powi(-2) * a.powf(-0.5)),
        BoundReport::upper("coupling_error", case, coup, n2 * mode.l.abs() * (n2 + l2).powf(-1.25) * a.powi(-2)),
    ))
}

/// Axisymmetric swirl bound (for a given forcing) and the two wall-slope lower bounds.
pub fn check_axisym(l: f64, nu: f64, lambda: C64, f: &RadialField, grid: &GridRef) -> Result<Vec<BoundReport>> {
    let mode = FourierMode::new(0, l);
    let case = Case::new(mode, nu, lambda, 1.0, grid.n());
    let sv = scale_a(1.0, FourierMode::new(0, l), nu, lambda);
    let j = solve_axisym(AxisymKind::JOnly, l, nu, lambda, Some(f), grid)?;
    let scale = (nu * l).abs().sqrt() + (nu * lambda.norm() * l * l).cbrt();
    let left =
        scale * j.primary.norm() + nu.powf(1.0 / 6.0) * l.abs().powf(5.0 / 6.0) * l1_norm(&j.primary.map(|r, v| v * r));
    let hyp7 = l * lambda.im <= HYPOTHESIS_C * (nu * l).abs().sqrt();
    let om = solve_axisym(AxisymKind::OmegaPair, l, nu, lambda, None, grid)?;
    let toy = solve_axisym(AxisymKind::ToyPair, l, nu, lambda, None, grid)?;
    let a1t = sv.a1_tilde;
    let weighted = toy.primary.map(|r, v| v * (1.0 - r * r)).norm().powi(2);
    let hyp_toy = 2.0 * l * lambda.im <= (l * (lambda - 1.0)).norm() || 3.0 * l * lambda.im <= nu * (1.0 + l * l);
    Ok(vec![
        BoundReport::upper("swirl_bound", case, left, f.norm()).with_hypothesis(hyp7),
        BoundReport::lower("axisym_wall_slope_lower", case, om.d_secondary_wall.norm(), 1.0 / sv.a_tilde)
            .with_hypothesis(hyp7 && viscosity_hypothesis(mode, nu)),
        BoundReport::lower("axisym_toy_wall_slope_lower", case, toy.d_secondary_wall.norm(), 1.0 / a1t)
            .with_hypothesis(hyp_toy),
        BoundReport::upper("axisym_toy_wall_derivative_u", case, toy.d_primary_wall.norm(), a1t)
            .with_hypothesis(hyp_toy),
        BoundReport::upper("axisym_toy_l2", case, toy.primary.norm().powi(2), 1.0 / a1t).with_hypothesis(hyp_toy),
        BoundReport::upper("axisym_toy_weighted_l2", case, weighted, a1t.powi(-3)).with_hypothesis(hyp_toy),
    ])
}

/// Per-identifier summary of a report table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Aggregate {
    pub id: String,
    pub rows: usize,
    pub errors: usize,
    pub hard_failures: usize,
    pub min: f64,
    pub max: f64,
    pub median: f64,
    /// Largest max/min ratio of the per-ν maximum over groups sharing all
    /// other parameters (NaN when no group spans two ν values).
    pub nu_variation: f64,
}

/// Aggregate non-trivial, finite rows per identifier, in identifier order.
pub fn aggregate(rows: &[BoundReport]) -> Vec<Aggregate> {
    use std::collections::BTreeMap;
    let mut by_id: BTreeMap<&str, Vec<&BoundReport>> = BTreeMap::new();
    for r in rows {
        by_id.entry(&r.id).or_default().push(r);
    }
    by_id
        .into_iter()
        .map(|(id, rs)| {
            let mut vals: Vec<f64> = rs.iter().filter(|r| !r.trivial && r.c_eff.is_finite()).map(|r| r.c_eff).collect();
            vals.sort_by(f64::total_cmp);
            let median = if vals.is_empty() { f64::NAN } else { vals[vals.len() / 2] };
            // group key: everything except ν (and the grid size)
            let mut groups: BTreeMap<(i32, u64, u64, u64, u64), BTreeMap<u64, f64>> = BTreeMap::new();
            for r in rs.iter().filter(|r| !r.trivial && r.c_eff.is_finite()) {
                let c = &r.case;
                let key = (c.n, c.l.to_bits(), c.lambda_re.to_bits(), c.lambda_im.to_bits(), c.s.to_bits());
                let e = groups.entry(key).or_default().entry(c.nu.to_bits()).or_insert(0.0);
                *e = e.max(r.c_eff);
            }
            let nu_variation = groups
                .values()
                .filter(|g| g.len() >= 2)
                .map(|g| {
                    let hi = g.values().copied().fold(0.0, f64::max);
                    let lo = g.values().copied().fold(f64::INFINITY, f64::min);
                    hi / lo
                })
                .fold(f64::NAN, f64::max);
            Aggregate {
                id: id.to_string(),
                rows: rs.len(),
                errors: rs.iter().filter(|r| r.error.is_some()).count(),
                hard_failures: rs.iter().filter(|r| r.pass == Some(false)).count(),
                min: vals.first().copied().unwrap_or(f64::NAN),
                max: vals.last().copied().unwrap_or(f64::NAN),
                median,
                nu_variation,
            }
        })
        .collect()
}

/// Total order used for every emitted table.
pub fn sort_rows(rows: &mut [BoundReport]) {
    rows.sort_by(|a, b| {
        let (x, y) = (&a.case, &b.case);
        a.id.cmp(&b.id)
            .then(x.nu.total_cmp(&y.nu))
            .then(x.n.cmp(&y.n))
            .then(x.l.total_cmp(&y.l))
            .then(x.lambda_re.total_cmp(&y.lambda_re))
            .then(x.lambda_im.total_cmp(&y.lambda_im))
            .then(x.s.total_cmp(&y.s))
            .then(x.grid_n.cmp(&y.grid_n))
            .then(a.left.total_cmp(&b.left))
            .then(a.right.total_cmp(&b.right))
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bvp::solve_resolvent;
    use crate::grid::build_grid;

    #[test]
    fn report_arithmetic() {
        let c = Case::new(FourierMode::new(1, 1.0), 1e-3, C64::new(0.5, 0.0), 1.0, 64);
        assert!(BoundReport::upper("x", c, 0.0, 0.0).trivial);
        assert_eq!(BoundReport::explicit("x", c, 2.0, 1.0, 2.0).pass, Some(true));
        assert_eq!(BoundReport::explicit("x", c, 2.1, 1.0, 2.0).pass, Some(false));
        assert_eq!(BoundReport::lower("x", c, 3.0, 0.5).c_eff, 6.0);
    }

    #[test]
    fn zero_solution_quantities() {
        let g = build_grid(48).unwrap();
        let z = RadialField::zeros(&g);
        let m = FourierMode::new(1, 1.0);
        let sol = solve_resolvent(m, 1e-3, C64::new(0.5, 0.0), &z, &z, &g).unwrap();
        assert_eq!(energy_identity_residuals(&sol, &z, &z).unwrap(), (0.0, 0.0));
        let pq = proof_quantities(&sol, &z, &z).unwrap();
        assert_eq!(pq.f22.max_abs(), 0.0);
        assert!(pq.delta > 0.0 && pq.g >= 0.0);
        let chi_in_layer = g
            .nodes()
            .iter()
            .zip(pq.chi0.values())
            .filter(|(&r, _)| (r - pq.r0).abs() < pq.delta)
            .all(|(_, v)| v.norm() == 0.0);
        assert!(chi_in_layer);
        assert!(check_resolvent_bound(&sol, &z, &z).iter().all(|r| r.trivial));
    }

    #[test]
    fn aggregate_variation() {
        let mk = |nu: f64, c: f64| {
            BoundReport::upper("a", Case::new(FourierMode::new(1, 1.0), nu, C64::new(0.5, 0.0), 1.0, 64), c, 1.0)
        };
        let rows = vec![mk(1e-2, 2.0), mk(1e-3, 4.0), mk(1e-3, 1.0), mk(1e-4, 8.0)];
        let agg = aggregate(&rows);
        assert_eq!(agg.len(), 1);
        assert_eq!(agg[0].min, 1.0);
        assert_eq!(agg[0].max, 8.0);
        assert_eq!(agg[0].nu_variation, 4.0);
    }
}
