//! Block collocation solvers for every radial boundary-value problem.
//!
//! Each unknown occupies one block of `N+1` nodal values. In each block the
//! row at the outer node (index 0) and at the inner node (index N) carry
//! boundary conditions; the remaining rows carry the equation. The coupled
//! (W, U) systems use the unknown order (U, W₁, W).

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::grid::{FourierMode, GridRef, RadialField, RadialGrid};
use crate::linalg::{mat_vec, solve_checked, CheckedSolver};
use crate::operators::{assemble, OperatorSet};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

fn i() -> C64 {
    C64::new(0.0, 1.0)
}

/// Which boundary-value problem is being solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SystemKind {
    /// Coupled system with `W = W₁ = U = 0` at the wall.
    ResolventArtificial,
    /// Coupled system with `W = 0`, `W₁ = U = 1` at the wall.
    HomogeneousForced,
    /// `−νΔ̂₁U + il(λ−r²)U = 0, U(1) = 1`, then `Δ̂₁W = U, W(1) = 0`.
    ApproxElliptic,
    /// As `ApproxElliptic` with the constant coefficient `il(λ−1)`.
    ToyElliptic,
    /// `−νΔ̂U + il(λ−r²)U = F` on `(0, s)`.
    ScalarDhat,
    /// `−νΔ̂₁U + il(λ−r²)U = F` on `(0, s)`.
    ScalarDhat1,
    /// `−νΔ̂₁U + il(λ−s²)U = F` on `(0, s)`, coefficient frozen at the right end.
    ScalarDhat1Frozen,
    /// `−νΔ̂₍₁₎J + il(λ−r²)J = F` on `(0, s)`.
    ScalarAxisym,
    /// `−νΔ̂₍₁₎Ω₁ + il(λ−r²)Ω₁ = 0, Ω₁ = Δ̂₍₁₎W₁, W₁(1) = 0, Ω₁(1) = 1`.
    AxisymOmega,
    /// `−νΔ̂₍₁₎J₁ + il(λ−r²)J₁ = F, J₁(1) = 0`.
    AxisymJ,
    /// `−νΔ̂₍₁₎U + il(λ−1)U = 0, U = Δ̂₍₁₎W, W(1) = 0, U(1) = 1`.
    AxisymToy,
}

impl SystemKind {
    pub const ALL: [SystemKind; 11] = [
        SystemKind::ResolventArtificial,
        SystemKind::HomogeneousForced,
        SystemKind::ApproxElliptic,
        SystemKind::ToyElliptic,
        SystemKind::ScalarDhat,
        SystemKind::ScalarDhat1,
        SystemKind::ScalarDhat1Frozen,
        SystemKind::ScalarAxisym,
        SystemKind::AxisymOmega,
        SystemKind::AxisymJ,
        SystemKind::AxisymToy,
    ];

    /// Number of unknown fields (= number of equation blocks).
    pub fn blocks(self) -> usize {
        use SystemKind::*;
        match self {
            ResolventArtificial | HomogeneousForced => 3,
            ApproxElliptic | ToyElliptic | AxisymOmega | AxisymToy => 2,
            ScalarDhat | ScalarDhat1 | ScalarDhat1Frozen | ScalarAxisym | AxisymJ => 1,
        }
    }

    /// Dirichlet data at the outer end for each block, in unknown order.
    pub fn wall_values(self, right_bc: C64) -> Vec<C64> {
        use SystemKind::*;
        match self {
            ResolventArtificial => vec![ZERO, ZERO, ZERO],
            HomogeneousForced => vec![ONE, ONE, ZERO],
            ApproxElliptic | ToyElliptic | AxisymOmega | AxisymToy => vec![ONE, ZERO],
            AxisymJ => vec![ZERO],
            ScalarDhat | ScalarDhat1 | ScalarDhat1Frozen | ScalarAxisym => vec![right_bc],
        }
    }

    fn needs_n(self) -> bool {
        matches!(self, SystemKind::ResolventArtificial | SystemKind::HomogeneousForced)
    }

    pub fn is_scalar_on_subinterval(self) -> bool {
        use SystemKind::*;
        matches!(self, ScalarDhat | ScalarDhat1 | ScalarDhat1Frozen | ScalarAxisym)
    }
}

/// Parameters of one solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Problem {
    pub kind: SystemKind,
    pub mode: FourierMode,
    pub nu: f64,
    pub lambda: C64,
    /// Right end of the interval (1 except for the sub-interval scalar kinds).
    pub s: f64,
    /// Right boundary value for the scalar kinds.
    pub right_bc: C64,
}

impl Problem {
    pub fn new(kind: SystemKind, mode: FourierMode, nu: f64, lambda: C64) -> Self {
        Self { kind, mode, nu, lambda, s: 1.0, right_bc: ZERO }
    }

    pub fn on_subinterval(mut self, s: f64, right_bc: C64) -> Self {
        self.s = s;
        self.right_bc = right_bc;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.nu > 0.0 && self.nu.is_finite()) {
            return Err(Error::Domain(format!("viscosity {} must be positive", self.nu)));
        }
        if !(self.lambda.re.is_finite() && self.lambda.im.is_finite()) {
            return Err(Error::Domain("λ not finite".into()));
        }
        self.mode.require_l()?;
        if self.kind.needs_n() {
            self.mode.require_n()?;
        }
        if !(self.s > 0.0 && self.s <= 1.0) {
            return Err(Error::Domain(format!("s = {} outside (0, 1]", self.s)));
        }
        if self.s != 1.0 && !self.kind.is_scalar_on_subinterval() {
            return Err(Error::Domain("only scalar kinds live on a sub-interval".into()));
        }
        Ok(())
    }

    /// Zeroth-order coefficient `il(λ−r²)` (or its frozen/constant variants).
    pub fn reaction(&self, r: f64) -> C64 {
        use SystemKind::*;
        let l = self.mode.l;
        let arg = match self.kind {
            ToyElliptic | AxisymToy => self.lambda - 1.0,
            ScalarDhat1Frozen => self.lambda - self.s * self.s,
            _ => self.lambda - r * r,
        };
        i() * l * arg
    }
}

/// Dense block system under assembly.
pub(crate) struct Blocks {
    m: usize,
    pub(crate) a: DMatrix<C64>,
    pub(crate) rhs: Vec<C64>,
}

impl Blocks {
    pub(crate) fn new(m: usize, nb: usize) -> Self {
        Self { m, a: DMatrix::zeros(nb * m, nb * m), rhs: vec![ZERO; nb * m] }
    }

    fn interior(&self) -> std::ops::Range<usize> {
        1..self.m - 1
    }

    /// Add `c·mat` to the interior rows of block `(rb, cb)`.
    pub(crate) fn op(&mut self, rb: usize, cb: usize, mat: &DMatrix<f64>, c: C64) {
        let m = self.m;
        for i in self.interior() {
            for j in 0..m {
                let v = mat[(i, j)];
                if v != 0.0 {
                    self.a[(rb * m + i, cb * m + j)] += c * v;
                }
            }
        }
    }

    /// Add `diag(f(r))` to the interior rows of block `(rb, cb)`.
    pub(crate) fn diag(&mut self, rb: usize, cb: usize, nodes: &[f64], f: impl Fn(f64) -> C64) {
        let m = self.m;
        for i in self.interior() {
            self.a[(rb * m + i, cb * m + i)] += f(nodes[i]);
        }
    }

    pub(crate) fn forcing(&mut self, rb: usize, f: &[C64]) {
        let m = self.m;
        for i in self.interior() {
            self.rhs[rb * m + i] = f[i];
        }
    }

    /// Overwrite row `(rb, node)` with `Σ c·x[cb, node]` = rhs.
    pub(crate) fn value_row(&mut self, rb: usize, node: usize, terms: &[(usize, C64)], rhs: C64) {
        let m = self.m;
        let row = rb * m + node;
        self.a.row_mut(row).fill(ZERO);
        for &(cb, c) in terms {
            self.a[(row, cb * m + node)] += c;
        }
        self.rhs[row] = rhs;
    }

    /// Overwrite row `(rb, node)` with `(D x[cb])(node)` = rhs.
    pub(crate) fn derivative_row(&mut self, rb: usize, node: usize, cb: usize, d1: &DMatrix<f64>, rhs: C64) {
        let m = self.m;
        let row = rb * m + node;
        self.a.row_mut(row).fill(ZERO);
        for j in 0..m {
            self.a[(row, cb * m + j)] = C64::new(d1[(node, j)], 0.0);
        }
        self.rhs[row] = rhs;
    }
}

/// Coupled (U, W₁, W) operator with a given zeroth-order coefficient.
/// Rows: `−ν(2Δ̂U − Δ̂₁*W₁) + cU`, `−νΔ̂₁U + cW₁ + 4in²lW/q`, `W₁ − Δ̂₁W`.
pub(crate) fn wu_blocks(ops: &OperatorSet, nu: f64, coef: impl Fn(f64) -> C64 + Copy) -> Blocks {
    let grid = ops.grid();
    let nodes = grid.nodes();
    let mode = ops.mode();
    let mut b = Blocks::new(grid.len(), 3);
    b.op(0, 0, ops.lap_matrix(), C64::new(-2.0 * nu, 0.0));
    b.diag(0, 0, nodes, coef);
    b.op(0, 1, ops.lap1_adj_matrix(), C64::new(nu, 0.0));
    b.op(1, 0, ops.lap1_matrix(), C64::new(-nu, 0.0));
    b.diag(1, 1, nodes, coef);
    b.diag(1, 2, nodes, |r| i() * 4.0 * mode.n2() * mode.l / mode.q(r));
    b.diag(2, 1, nodes, |_| ONE);
    b.op(2, 2, ops.lap1_matrix(), -ONE);
    let n = grid.n();
    for blk in 0..3 {
        b.value_row(blk, n, &[(blk, ONE)], ZERO);
    }
    b
}

/// Two-block (Ω, W) operator `−νLΩ + cΩ`, `Ω − LW` for a fixed radial operator `L`.
pub(crate) fn pair_blocks(grid: &RadialGrid, lmat: &DMatrix<f64>, nu: f64, coef: impl Fn(f64) -> C64) -> Blocks {
    let mut b = Blocks::new(grid.len(), 2);
    b.op(0, 0, lmat, C64::new(-nu, 0.0));
    b.diag(0, 0, grid.nodes(), coef);
    b.diag(1, 0, grid.nodes(), |_| ONE);
    b.op(1, 1, lmat, -ONE);
    let n = grid.n();
    for blk in 0..2 {
        b.value_row(blk, n, &[(blk, ONE)], ZERO);
    }
    b
}

/// Solution of the coupled (W, U) system.
#[derive(Debug, Clone)]
pub struct ResolventSolution {
    pub mode: FourierMode,
    pub nu: f64,
    pub lambda: C64,
    pub u: RadialField,
    pub w1: RadialField,
    pub w: RadialField,
    /// `U₁ = U − W₁`.
    pub u1: RadialField,
    /// `∂rW(1)`.
    pub dw_wall: C64,
    pub cond: f64,
}

/// Solution of a two-field elliptic pair `(U, W)` or a scalar problem.
#[derive(Debug, Clone)]
pub struct PairSolution {
    pub primary: RadialField,
    pub secondary: Option<RadialField>,
    /// Derivative of the primary field at the outer end.
    pub d_primary_wall: C64,
    /// Derivative of the secondary field at the outer end.
    pub d_secondary_wall: C64,
    pub cond: f64,
}

/// Generic solution record.
#[derive(Debug, Clone)]
pub struct Solution {
    pub problem: Problem,
    pub fields: Vec<RadialField>,
    pub cond: f64,
}

impl Solution {
    pub fn wall_derivative(&self, k: usize) -> C64 {
        self.fields[k].dr().at_wall()
    }
}

/// The sub-grid `[0, s]` with the same polynomial degree, or the grid itself when s = 1.
pub fn sub_grid(grid: &GridRef, s: f64) -> Result<GridRef> {
    if s == 1.0 && grid.interval() == (0.0, 1.0) {
        Ok(grid.clone())
    } else {
        RadialGrid::on_interval(grid.n(), 0.0, s)
    }
}

fn forcing_on(grid: &GridRef, f: Option<&RadialField>) -> Vec<C64> {
    match f {
        None => vec![ZERO; grid.len()],
        Some(f) if f.grid().same_as(grid) => f.values().to_vec(),
        Some(f) => f.resample(grid).into_values(),
    }
}

fn scalar_matrix(kind: SystemKind, ops: &OperatorSet) -> &DMatrix<f64> {
    match kind {
        SystemKind::ScalarDhat => ops.lap_matrix(),
        SystemKind::ScalarAxisym | SystemKind::AxisymJ => ops.lap_one_matrix(),
        _ => ops.lap1_matrix(),
    }
}

fn solve_scalar_block(
    grid: &GridRef,
    lmat: &DMatrix<f64>,
    nu: f64,
    coef: impl Fn(f64) -> C64,
    f: &[C64],
    wall: C64,
) -> Result<(RadialField, f64)> {
    let mut b = Blocks::new(grid.len(), 1);
    b.op(0, 0, lmat, C64::new(-nu, 0.0));
    b.diag(0, 0, grid.nodes(), coef);
    b.forcing(0, f);
    b.value_row(0, 0, &[(0, ONE)], wall);
    b.value_row(0, grid.n(), &[(0, ONE)], ZERO);
    let (x, cond) = solve_checked(b.a, b.rhs)?;
    Ok((RadialField::from_vec(grid, x), cond))
}

/// Assemble the full discrete system for `problem` on `grid` (already the
/// sub-grid for scalar kinds) with per-block forcing. Sequential kinds are
/// assembled as their block-triangular coupled form.
pub(crate) fn assemble_problem(problem: &Problem, grid: &GridRef, forcing: &[Option<&RadialField>]) -> Blocks {
    use SystemKind::*;
    let ops = assemble(problem.mode, grid);
    let nu = problem.nu;
    let coef = |r: f64| problem.reaction(r);
    let nb = problem.kind.blocks();
    let n = grid.n();
    let mut b = match problem.kind {
        ResolventArtificial | HomogeneousForced => wu_blocks(&ops, nu, coef),
        AxisymOmega | AxisymToy => pair_blocks(grid, ops.lap_one_matrix(), nu, coef),
        ApproxElliptic | ToyElliptic => pair_blocks(grid, ops.lap1_matrix(), nu, coef),
        _ => {
            let mut b = Blocks::new(grid.len(), 1);
            b.op(0, 0, scalar_matrix(problem.kind, &ops), C64::new(-nu, 0.0));
            b.diag(0, 0, grid.nodes(), coef);
            b.value_row(0, n, &[(0, ONE)], ZERO);
            b
        }
    };
    // pair systems read Ω − LW = g; the elliptic pair reads LW − U = g
    if matches!(problem.kind, ApproxElliptic | ToyElliptic) {
        let m = grid.len();
        for r in 1..m - 1 {
            let row = m + r;
            for c in 0..2 * m {
                b.a[(row, c)] = -b.a[(row, c)];
            }
        }
    }
    for (k, f) in forcing.iter().enumerate().take(nb) {
        b.forcing(k, &forcing_on(grid, *f));
    }
    let wall = problem.kind.wall_values(problem.right_bc);
    for (k, v) in wall.into_iter().enumerate() {
        b.value_row(k, 0, &[(k, ONE)], v);
    }
    b
}

/// Solve any kind with optional per-block forcing (missing entries are zero).
pub fn solve_forced(problem: &Problem, forcing: &[Option<&RadialField>], grid: &GridRef) -> Result<Solution> {
    problem.validate()?;
    if grid.interval() != (0.0, 1.0) {
        return Err(Error::Domain("solvers take the full grid on [0, 1]".into()));
    }
    let g = if problem.kind.is_scalar_on_subinterval() { sub_grid(grid, problem.s)? } else { grid.clone() };
    use SystemKind::*;
    let (fields, cond) = match problem.kind {
        ApproxElliptic | ToyElliptic => {
            let ops = assemble(problem.mode, &g);
            let f0 = forcing_on(&g, forcing.first().copied().flatten());
            let (u, c1) = solve_scalar_block(&g, ops.lap1_matrix(), problem.nu, |r| problem.reaction(r), &f0, ONE)?;
            let f1 = forcing_on(&g, forcing.get(1).copied().flatten());
            let rhs: Vec<C64> = u.values().iter().zip(&f1).map(|(a, b)| -(a + b)).collect();
            // −Δ̂₁W = −(U + g) with unit "viscosity" and no reaction
            let (w, c2) = solve_scalar_block(&g, ops.lap1_matrix(), 1.0, |_| ZERO, &rhs, ZERO)?;
            (vec![u, w], c1.max(c2))
        }
        _ => {
            let b = assemble_problem(problem, &g, forcing);
            let (x, cond) = solve_checked(b.a, b.rhs)?;
            let m = g.len();
            let fields =
                (0..problem.kind.blocks()).map(|k| RadialField::from_vec(&g, x[k * m..(k + 1) * m].to_vec())).collect();
            (fields, cond)
        }
    };
    Ok(Solution { problem: *problem, fields, cond })
}

/// Relative residual `‖Mx − b‖∞ / max(‖b‖∞, tiny)` of a solution re-inserted
/// into its discrete equations, boundary rows included.
pub fn discrete_residual(sol: &Solution, forcing: &[Option<&RadialField>]) -> f64 {
    let g = sol.fields[0].grid().clone();
    let b = assemble_problem(&sol.problem, &g, forcing);
    let x: Vec<C64> = sol.fields.iter().flat_map(|f| f.values().iter().copied()).collect();
    let ax = mat_vec(&b.a, &x);
    let num = ax.iter().zip(&b.rhs).map(|(a, r)| (a - r).norm()).fold(0.0, f64::max);
    let scale = b.rhs.iter().map(|v| v.norm()).fold(0.0, f64::max);
    num / scale.max(f64::MIN_POSITIVE)
}

fn into_resolvent(sol: Solution) -> ResolventSolution {
    let Problem { mode, nu, lambda, .. } = sol.problem;
    let mut it = sol.fields.into_iter();
    let u = it.next().expect("U");
    let w1 = it.next().expect("W1");
    let w = it.next().expect("W");
    let u1 = u.sub(&w1).expect("same grid");
    let dw_wall = w.dr().at_wall();
    ResolventSolution { mode, nu, lambda, u, w1, w, u1, dw_wall, cond: sol.cond }
}

fn into_pair(sol: Solution) -> PairSolution {
    let mut it = sol.fields.into_iter();
    let primary = it.next().expect("primary");
    let secondary = it.next();
    let d_primary_wall = primary.dr().at_wall();
    let d_secondary_wall = secondary.as_ref().map(|f| f.dr().at_wall()).unwrap_or(ZERO);
    PairSolution { primary, secondary, d_primary_wall, d_secondary_wall, cond: sol.cond }
}

/// Inhomogeneous system with artificial wall conditions.
pub fn solve_resolvent(
    mode: FourierMode,
    nu: f64,
    lambda: C64,
    f1: &RadialField,
    f2: &RadialField,
    grid: &GridRef,
) -> Result<ResolventSolution> {
    if !f1.grid().same_as(grid) || !f2.grid().same_as(grid) {
        return Err(Error::GridMismatch);
    }
    let p = Problem::new(SystemKind::ResolventArtificial, mode, nu, lambda);
    solve_forced(&p, &[Some(f1), Some(f2)], grid).map(into_resolvent)
}

/// Factored artificial-boundary system, reusable across forcings.
pub struct ResolventOperator {
    problem: Problem,
    grid: GridRef,
    template: Vec<C64>,
    solver: CheckedSolver,
}

impl ResolventOperator {
    pub fn new(mode: FourierMode, nu: f64, lambda: C64, grid: &GridRef) -> Result<Self> {
        let problem = Problem::new(SystemKind::ResolventArtificial, mode, nu, lambda);
        problem.validate()?;
        let b = assemble_problem(&problem, grid, &[]);
        let solver = CheckedSolver::new(b.a)?;
        Ok(Self { problem, grid: grid.clone(), template: b.rhs, solver })
    }

    pub fn cond(&self) -> f64 {
        self.solver.cond()
    }

    pub fn solve(&self, f1: &RadialField, f2: &RadialField) -> Result<ResolventSolution> {
        if !f1.grid().same_as(&self.grid) || !f2.grid().same_as(&self.grid) {
            return Err(Error::GridMismatch);
        }
        let m = self.grid.len();
        let mut rhs = self.template.clone();
        rhs[1..m - 1].copy_from_slice(&f1.values()[1..m - 1]);
        rhs[m + 1..2 * m - 1].copy_from_slice(&f2.values()[1..m - 1]);
        let x = self.solver.solve(&rhs);
        let fields = (0..3).map(|k| RadialField::from_vec(&self.grid, x[k * m..(k + 1) * m].to_vec())).collect();
        Ok(into_resolvent(Solution { problem: self.problem, fields, cond: self.solver.cond() }))
    }
}

/// Homogeneous system with `W₁(1) = U(1) = 1`.
pub fn solve_homogeneous(mode: FourierMode, nu: f64, lambda: C64, grid: &GridRef) -> Result<ResolventSolution> {
    let p = Problem::new(SystemKind::HomogeneousForced, mode, nu, lambda);
    solve_forced(&p, &[], grid).map(into_resolvent)
}

/// Approximate elliptic pair `(U_a, W_a)`.
pub fn solve_approx_elliptic(mode: FourierMode, nu: f64, lambda: C64, grid: &GridRef) -> Result<PairSolution> {
    let p = Problem::new(SystemKind::ApproxElliptic, mode, nu, lambda);
    solve_forced(&p, &[], grid).map(into_pair)
}

/// Constant-coefficient toy pair.
pub fn solve_toy(mode: FourierMode, nu: f64, lambda: C64, grid: &GridRef) -> Result<PairSolution> {
    let p = Problem::new(SystemKind::ToyElliptic, mode, nu, lambda);
    solve_forced(&p, &[], grid).map(into_pair)
}

/// Scalar operator families for [`solve_scalar`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarKind {
    Dhat,
    Dhat1,
    /// Δ̂₁ with the coefficient frozen at `il(λ−s²)`.
    Dhat1Frozen,
    Axisym1,
}

/// Scalar problem on `(0, s)` with zero value at the axis. The result lives on
/// the sub-grid `[0, s]`.
#[allow(clippy::too_many_arguments)]
pub fn solve_scalar(
    kind: ScalarKind,
    mode: FourierMode,
    nu: f64,
    lambda: C64,
    s: f64,
    f: &RadialField,
    right_bc: C64,
    grid: &GridRef,
) -> Result<RadialField> {
    let sk = match kind {
        ScalarKind::Dhat => SystemKind::ScalarDhat,
        ScalarKind::Dhat1 => SystemKind::ScalarDhat1,
        ScalarKind::Dhat1Frozen => SystemKind::ScalarDhat1Frozen,
        ScalarKind::Axisym1 => SystemKind::ScalarAxisym,
    };
    let p = Problem::new(sk, mode, nu, lambda).on_subinterval(s, right_bc);
    let mut sol = solve_forced(&p, &[Some(f)], grid)?;
    Ok(sol.fields.remove(0))
}

/// Axisymmetric variants for [`solve_axisym`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisymKind {
    OmegaPair,
    JOnly,
    ToyPair,
}

/// Axisymmetric problems. `f` forces the first equation (ignored by the
/// homogeneous pairs when `None`).
pub fn solve_axisym(
    kind: AxisymKind,
    l: f64,
    nu: f64,
    lambda: C64,
    f: Option<&RadialField>,
    grid: &GridRef,
) -> Result<PairSolution> {
    let sk = match kind {
        AxisymKind::OmegaPair => SystemKind::AxisymOmega,
        AxisymKind::JOnly => SystemKind::AxisymJ,
        AxisymKind::ToyPair => SystemKind::AxisymToy,
    };
    let p = Problem::new(sk, FourierMode::new(0, l), nu, lambda);
    solve_forced(&p, &[f], grid).map(into_pair)
}

/// Residual of `W₁ = Δ̂₁W` at interior nodes relative to `‖W₁‖∞`.
pub fn constraint_residual(sol: &ResolventSolution) -> f64 {
    let ops = assemble(sol.mode, sol.w.grid());
    let lw = ops.lap1(&sol.w);
    let n = sol.w.grid().n();
    let num = (1..n).map(|j| (lw.values()[j] - sol.w1.values()[j]).norm()).fold(0.0, f64::max);
    num / sol.w1.max_abs().max(f64::MIN_POSITIVE)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::build_grid;

    #[test]
    fn zero_forcing_gives_zero() {
        let g = build_grid(48).unwrap();
        let z = RadialField::zeros(&g);
        let sol = solve_resolvent(FourierMode::new(1, 1.0), 1e-2, C64::new(-0.5, 0.0), &z, &z, &g).unwrap();
        assert!(sol.u.max_abs() + sol.w1.max_abs() + sol.w.max_abs() < 1e-12);
    }

    #[test]
    fn homogeneous_wall_rows() {
        let g = build_grid(64).unwrap();
        let sol = solve_homogeneous(FourierMode::new(1, 1.0), 1e-2, C64::new(0.5, 0.0), &g).unwrap();
        assert!((sol.u.at_wall() - ONE).norm() < 1e-12);
        assert!((sol.w1.at_wall() - ONE).norm() < 1e-12);
        assert!(sol.w.at_wall().norm() < 1e-12);
        assert!(sol.u.at_inner().norm() < 1e-12 && sol.w.at_inner().norm() < 1e-12);
    }

    #[test]
    fn sequential_pair_satisfies_coupled_rows() {
        let g = build_grid(64).unwrap();
        let m = FourierMode::new(2, 1.5);
        for kind in [SystemKind::ApproxElliptic, SystemKind::ToyElliptic] {
            let p = Problem::new(kind, m, 1e-3, C64::new(0.7, 0.0));
            let sol = solve_forced(&p, &[], &g).unwrap();
            assert!(discrete_residual(&sol, &[]) < 1e-10);
        }
    }

    #[test]
    fn mode_and_grid_preconditions() {
        let g = build_grid(16).unwrap();
        let other = build_grid(18).unwrap();
        let z = RadialField::zeros(&g);
        let zo = RadialField::zeros(&other);
        assert!(solve_resolvent(FourierMode::new(0, 1.0), 1e-2, ONE, &z, &z, &g).is_err());
        assert!(solve_resolvent(FourierMode::new(1, 0.0), 1e-2, ONE, &z, &z, &g).is_err());
        assert_eq!(solve_resolvent(FourierMode::new(1, 1.0), 1e-2, ONE, &zo, &z, &g).unwrap_err(), Error::GridMismatch);
    }
}
