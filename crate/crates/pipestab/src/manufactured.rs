//! Manufactured solutions: smooth fields with the right boundary data, and
//! the forcing that makes them exact, computed through the field operators
//! rather than the block assembler.

use num_complex::Complex64 as C64;

use crate::bvp::{discrete_residual, solve_forced, sub_grid, Problem, SystemKind};
use crate::error::Result;
use crate::grid::{build_grid, FourierMode, GridRef, RadialField};
use crate::operators::assemble;

/// Max-norm relative difference.
pub fn rel_err(a: &RadialField, b: &RadialField) -> f64 {
    let num = a.values().iter().zip(b.values()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    num / b.max_abs().max(1e-300)
}

/// Smooth field with prescribed wall value, vanishing like `r^p` at the axis.
pub fn shaped(g: &GridRef, p: i32, wall: C64, phase: f64) -> RadialField {
    let b = g.interval().1;
    RadialField::from_fn(g, |r| {
        let r = r / b;
        let bump = r.powi(p) * (1.0 - r) * C64::new((3.0 * r + phase).sin() + 1.5, (2.0 * r * r - phase).cos());
        bump + wall * r.powi(p.max(1))
    })
}

/// One field per unknown of `p`, matching its boundary data.
pub fn manufactured_fields(p: &Problem, g: &GridRef) -> Vec<RadialField> {
    let pole = p.mode.n.unsigned_abs().max(1) as i32;
    p.kind
        .wall_values(p.right_bc)
        .into_iter()
        .enumerate()
        .map(|(k, wall)| shaped(g, pole, wall, 0.37 * k as f64))
        .collect()
}

/// Forcing of every equation block for the given unknowns.
pub fn manufactured_forcing(p: &Problem, fields: &[RadialField]) -> Vec<RadialField> {
    let g = fields[0].grid().clone();
    let ops = assemble(p.mode, &g);
    let nu = C64::new(p.nu, 0.0);
    let c = |f: &RadialField| f.map(|r, v| p.reaction(r) * v);
    let add = |a: RadialField, b: RadialField| a.add(&b).expect("same grid");
    match p.kind {
        SystemKind::ResolventArtificial | SystemKind::HomogeneousForced => {
            let (u, w1, w) = (&fields[0], &fields[1], &fields[2]);
            let m = p.mode;
            let f0 = add(add(ops.lap(u).scale(-2.0 * nu), c(u)), ops.lap1_adj(w1).scale(nu));
            let coupling = w.map(|r, v| C64::new(0.0, 4.0 * m.n2() * m.l / m.q(r)) * v);
            let f1 = add(add(ops.lap1(u).scale(-nu), c(w1)), coupling);
            let f2 = w1.sub(&ops.lap1(w)).expect("same grid");
            vec![f0, f1, f2]
        }
        SystemKind::ApproxElliptic | SystemKind::ToyElliptic => {
            let (u, w) = (&fields[0], &fields[1]);
            vec![add(ops.lap1(u).scale(-nu), c(u)), ops.lap1(w).sub(u).expect("same grid")]
        }
        SystemKind::AxisymOmega | SystemKind::AxisymToy => {
            let (o, w) = (&fields[0], &fields[1]);
            vec![add(ops.lap_one(o).scale(-nu), c(o)), o.sub(&ops.lap_one(w)).expect("same grid")]
        }
        SystemKind::ScalarDhat => vec![add(ops.lap(&fields[0]).scale(-nu), c(&fields[0]))],
        SystemKind::ScalarDhat1 | SystemKind::ScalarDhat1Frozen => {
            vec![add(ops.lap1(&fields[0]).scale(-nu), c(&fields[0]))]
        }
        SystemKind::ScalarAxisym | SystemKind::AxisymJ => {
            vec![add(ops.lap_one(&fields[0]).scale(-nu), c(&fields[0]))]
        }
    }
}

/// Result of one manufactured solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Recovery {
    /// Largest relative error over the unknowns.
    pub error: f64,
    /// Relative residual of the discrete system.
    pub residual: f64,
}

/// Solve `kind` with manufactured forcing on an `n`-point grid. The scalar
/// kinds run on `(0, s)` with a nonzero right value.
pub fn recover(kind: SystemKind, mode: FourierMode, nu: f64, lambda: C64, s: f64, n: usize) -> Result<Recovery> {
    let g = build_grid(n)?;
    let mut p = Problem::new(kind, mode, nu, lambda);
    if kind.is_scalar_on_subinterval() {
        p = p.on_subinterval(s, C64::new(0.3, -0.8));
    }
    let work = if p.s == 1.0 { g.clone() } else { sub_grid(&g, p.s)? };
    let truth = manufactured_fields(&p, &work);
    let forcing = manufactured_forcing(&p, &truth);
    let refs: Vec<Option<&RadialField>> = forcing.iter().map(Some).collect();
    let sol = solve_forced(&p, &refs, &g)?;
    let error = sol.fields.iter().zip(&truth).map(|(a, b)| rel_err(a, b)).fold(0.0, f64::max);
    Ok(Recovery { error, residual: discrete_residual(&sol, &refs) })
}

/// Default mode for `kind`: axisymmetric kinds use `n = 0`.
pub fn mode_for(kind: SystemKind, n: i32, l: f64) -> FourierMode {
    use SystemKind::*;
    match kind {
        AxisymOmega | AxisymJ | AxisymToy | ScalarAxisym => FourierMode::new(0, l),
        _ => FourierMode::new(n, l),
    }
}

/// Manufactured `(U, W₁, W)` for the resolvent system together with its
/// forcing `(F₁, F₂)`; `W₁ = Δ̂₁W` holds exactly on the grid. Both fields are
/// `r^|n|` times a polynomial in `r²`, i.e. regular at the axis.
pub fn resolvent_case(
    mode: FourierMode,
    nu: f64,
    lambda: C64,
    g: &GridRef,
) -> ([RadialField; 3], RadialField, RadialField) {
    let ops = assemble(mode, g);
    let p = mode.n.unsigned_abs().max(1) as i32;
    let w = RadialField::from_real_fn(g, |r| r.powi(p) * (1.0 - r * r).powi(3) * (1.0 + r * r));
    let mut w1 = ops.lap1(&w);
    let last = g.n();
    w1.values_mut()[0] = C64::new(0.0, 0.0);
    w1.values_mut()[last] = C64::new(0.0, 0.0);
    let u = RadialField::from_real_fn(g, |r| r.powi(p) * (1.0 - r * r) * (2.0 - r * r));
    let prob = Problem::new(SystemKind::ResolventArtificial, mode, nu, lambda);
    let mut f = manufactured_forcing(&prob, &[u.clone(), w1.clone(), w.clone()]).into_iter();
    let (f1, f2) = (f.next().expect("three blocks"), f.next().expect("three blocks"));
    ([u, w1, w], f1, f2)
}
