//! Sweep orchestration and report writing shared by the command-line front end.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use crate::acceptance::operator_residuals;
use crate::bvp::{constraint_residual, sub_grid, ResolventOperator, SystemKind};
use crate::checks::{
    aggregate, check_approx_elliptic, check_axisym, check_critical_layer, check_error_terms, check_frozen,
    check_homogeneous_lower, check_resolvent_bound, check_scalar, check_toy, energy_identity_residuals,
    proof_quantities, sort_rows, Aggregate, BoundReport, Case,
};
use crate::config::{ForcingSpec, SweepConfig};
use crate::error::{Error, Result};
use crate::grid::{build_grid, integrate_r, FourierMode, GridRef, RadialField};
use crate::inequalities::{airy_suite, harmonic_suite, run_harness, HarnessReport};
use crate::manufactured::{mode_for, recover, rel_err, resolvent_case};
use crate::operators::{assemble, interior_norm, COLLAR};
use crate::special::{airy_a0, bessel_j, bessel_zero};
use crate::spectrum::{dissipation_slope, spectral_bound, SlopeFit, SpectralBound};
use crate::testfn::random_forcing;

/// Column contract of every report CSV.
pub const CSV_HEADER: [&str; 13] =
    ["check_id", "nu", "n", "l", "lambda_re", "lambda_im", "s", "N", "left", "right", "c_eff", "pass", "error"];

/// Tolerance of the energy balances in a sweep.
pub const ENERGY_TOL: f64 = 1e-7;

/// Shortest round-trip decimal, with an exponent outside `[1e-4, 1e15)`.
pub fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || !a.is_finite() || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// Rows as CSV text, in the order given.
pub fn csv_table(rows: &[BoundReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in rows {
        let c = &r.case;
        let pass = match r.pass {
            Some(true) => "true",
            Some(false) => "false",
            None => "",
        };
        w.write_record([
            r.id.clone(),
            fmt_f64(c.nu),
            format!("{}", c.n),
            fmt_f64(c.l),
            fmt_f64(c.lambda_re),
            fmt_f64(c.lambda_im),
            fmt_f64(c.s),
            format!("{}", c.grid_n),
            fmt_f64(r.left),
            fmt_f64(r.right),
            fmt_f64(r.c_eff),
            pass.to_string(),
            r.error.clone().unwrap_or_default(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

/// Run `f` on a pool of `workers` threads (0: available parallelism).
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    Ok(pool.install(f))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub config: SweepConfig,
    /// Sorted with [`sort_rows`].
    pub rows: Vec<BoundReport>,
    pub aggregates: Vec<Aggregate>,
    /// Reasons for points that were not run, with counts.
    pub skipped: BTreeMap<String, usize>,
}

impl SweepReport {
    pub fn hard_failures(&self) -> usize {
        self.rows.iter().filter(|r| r.is_hard_failure()).count()
    }
}

fn forcing_seed(base: u64, j: usize) -> u64 {
    base.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(j as u64)
}

struct Point {
    nu: f64,
    mode: FourierMode,
    lambda: C64,
}

#[derive(Default)]
struct PointOut {
    rows: Vec<BoundReport>,
    skipped: Vec<String>,
}

impl PointOut {
    fn push_result(&mut self, id: &str, case: Case, r: Result<Vec<BoundReport>>) {
        match r {
            Ok(rows) => self.rows.extend(rows),
            Err(e) => self.rows.push(BoundReport::failed(id, case, &e)),
        }
    }
}

fn forcing_pairs(
    cfg: &SweepConfig,
    p: &Point,
    g: &GridRef,
) -> Vec<(RadialField, RadialField, Option<[RadialField; 3]>)> {
    let order = p.mode.n.unsigned_abs().max(1);
    match cfg.forcing {
        ForcingSpec::Random { count } => (0..count)
            .map(|j| {
                let s = forcing_seed(cfg.seed, j);
                (random_forcing(s.wrapping_mul(2), g, order), random_forcing(s.wrapping_mul(2) | 1, g, order), None)
            })
            .collect(),
        ForcingSpec::Manufactured => {
            let (truth, f1, f2) = resolvent_case(p.mode, p.nu, p.lambda, g);
            vec![(f1, f2, Some(truth))]
        }
    }
}

fn run_point(cfg: &SweepConfig, p: &Point) -> PointOut {
    let mut out = PointOut::default();
    let n = cfg.grid_n_for(p.nu);
    let case = Case::new(p.mode, p.nu, p.lambda, 1.0, n);
    let g = match build_grid(n) {
        Ok(g) => g,
        Err(e) => {
            out.rows.push(BoundReport::failed("grid", case, &e));
            return out;
        }
    };
    let has = |c: &str| cfg.checks.iter().any(|x| x == c);
    let axisymmetric = p.mode.n == 0;
    if axisymmetric {
        for c in cfg.checks.iter().filter(|c| c.as_str() != "axisym") {
            out.skipped.push(format!("{c}: needs n ≠ 0"));
        }
        if has("axisym") {
            for (f, _, _) in forcing_pairs(cfg, p, &g) {
                out.push_result("axisym", case, check_axisym(p.mode.l, p.nu, p.lambda, &f, &g));
            }
        }
        return out;
    }
    if has("axisym") {
        out.skipped.push("axisym: needs n = 0".into());
    }
    let forcings = if has("resolvent") || has("energy") || has("critical_layer") || has("scalar") {
        forcing_pairs(cfg, p, &g)
    } else {
        vec![]
    };
    if has("resolvent") || has("energy") || has("critical_layer") {
        match ResolventOperator::new(p.mode, p.nu, p.lambda, &g) {
            Err(e) => out.rows.push(BoundReport::failed("resolvent", case, &e)),
            Ok(op) => {
                for (f1, f2, truth) in &forcings {
                    let sol = match op.solve(f1, f2) {
                        Ok(s) => s,
                        Err(e) => {
                            out.rows.push(BoundReport::failed("resolvent", case, &e));
                            continue;
                        }
                    };
                    if has("resolvent") {
                        out.rows.extend(check_resolvent_bound(&sol, f1, f2));
                        if let Some([u, w1, w]) = truth {
                            let err = [rel_err(&sol.u, u), rel_err(&sol.w1, w1), rel_err(&sol.w, w)];
                            out.rows.push(BoundReport::residual(
                                "manufactured_error",
                                case,
                                err.into_iter().fold(0.0, f64::max),
                            ));
                        }
                        out.rows.push(BoundReport::residual("constraint_residual", case, constraint_residual(&sol)));
                    }
                    if has("energy") {
                        if p.lambda.im != 0.0 {
                            out.skipped.push("energy: needs real λ".into());
                        } else {
                            out.push_result(
                                "energy_identity",
                                case,
                                energy_identity_residuals(&sol, f1, f2).map(|(re, im)| {
                                    vec![
                                        BoundReport::explicit("energy_identity_real", case, re, ENERGY_TOL, 1.0),
                                        BoundReport::explicit("energy_identity_imag", case, im, ENERGY_TOL, 1.0),
                                    ]
                                }),
                            );
                        }
                    }
                    if has("critical_layer") {
                        if !(p.lambda.re > 0.0 && p.lambda.re < 1.0) {
                            out.skipped.push("critical_layer: needs 0 < Re λ < 1".into());
                        } else {
                            let r =
                                proof_quantities(&sol, f1, f2).and_then(|pq| check_critical_layer(&sol, f1, f2, &pq));
                            out.push_result("critical_layer", case, r);
                        }
                    }
                }
            }
        }
    }
    if has("homogeneous") {
        out.push_result(
            "homogeneous_wall_slope_lower",
            case,
            check_homogeneous_lower(p.mode, p.nu, p.lambda, &g).map(|r| vec![r]),
        );
    }
    if has("approx") {
        out.push_result("approx", case, check_approx_elliptic(p.mode, p.nu, p.lambda, &g));
    }
    if has("toy") {
        out.push_result("toy", case, check_toy(p.mode, p.nu, p.lambda, &g));
    }
    if has("error_terms") {
        out.push_result("error_terms", case, check_error_terms(p.mode, p.nu, p.lambda, &g).map(|(a, b)| vec![a, b]));
    }
    for &s in &cfg.s {
        let cs = Case { s, ..case };
        if has("frozen") {
            out.push_result("frozen", cs, check_frozen(p.mode, p.nu, p.lambda, s, &g));
        }
        if has("scalar") {
            match sub_grid(&g, s) {
                Err(e) => out.rows.push(BoundReport::failed("scalar", cs, &e)),
                Ok(sub) => {
                    for (f1, _, _) in &forcings {
                        let f = f1.resample(&sub);
                        out.push_result("scalar", cs, check_scalar(p.mode, p.nu, p.lambda, s, &f, &g));
                    }
                }
            }
        }
    }
    out
}

/// Run every selected check over the configured grid of points.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    cfg.validate()?;
    let mut skipped: BTreeMap<String, usize> = BTreeMap::new();
    let mut points = Vec::new();
    for &nu in &cfg.nu {
        if !cfg.admits(nu) {
            *skipped.entry(format!("ν = {nu}: ν(Lz+1) > {}", cfg.admission_c0)).or_default() += 1;
            continue;
        }
        for mode in cfg.modes.modes() {
            for lambda in cfg.lambda.values() {
                points.push(Point { nu, mode, lambda });
            }
        }
    }
    let outs: Vec<PointOut> = points.par_iter().map(|p| run_point(cfg, p)).collect();
    let mut rows = Vec::new();
    for o in outs {
        rows.extend(o.rows);
        for s in o.skipped {
            *skipped.entry(s).or_default() += 1;
        }
    }
    sort_rows(&mut rows);
    let aggregates = aggregate(&rows);
    Ok(SweepReport { config: cfg.clone(), rows, aggregates, skipped })
}

/// One resolvent solve with the configured mode and random forcing, plus its checks.
pub fn run_resolvent(cfg: &SweepConfig) -> Result<Vec<BoundReport>> {
    let r = &cfg.resolvent;
    let mode = FourierMode::new(r.n, r.l);
    let lambda = C64::new(r.lambda[0], r.lambda[1]);
    let one = SweepConfig {
        nu: vec![r.nu],
        modes: crate::config::ModeSpec { n: vec![r.n], k: vec![], l: vec![r.l], lz: cfg.modes.lz },
        lambda: crate::config::LambdaSpec::List { values: vec![r.lambda] },
        checks: ["resolvent", "energy", "critical_layer", "homogeneous"].map(String::from).to_vec(),
        admission_c0: f64::INFINITY,
        ..cfg.clone()
    };
    one.validate()?;
    let mut rows = run_point(&one, &Point { nu: r.nu, mode, lambda }).rows;
    sort_rows(&mut rows);
    Ok(rows)
}

fn tol_row(id: &str, case: Case, value: f64, tol: f64) -> BoundReport {
    BoundReport::explicit(id, case, value, tol, 1.0)
}

/// Grid, operator and special-function invariants as explicit rows `value ≤ tol`.
pub fn run_selftest(grid_n: usize, seed: u64) -> Result<Vec<BoundReport>> {
    let g = build_grid(grid_n)?;
    let zero = C64::new(0.0, 0.0);
    let case = |n: i32, l: f64| Case::new(FourierMode::new(n, l), 0.0, zero, 1.0, grid_n);
    let mut rows = Vec::new();

    // quadrature: ∫₀¹ r^k · r dr = 1/(k+2)
    let quad = (0..=10)
        .map(|k| {
            let h: Vec<f64> = g.nodes().iter().map(|&r| r.powi(k)).collect();
            (integrate_r(&g, &h) - 1.0 / (k as f64 + 2.0)).abs()
        })
        .fold(0.0, f64::max);
    rows.push(tol_row("selftest_quadrature", case(0, 0.0), quad, 1e-13));
    let cubic = RadialField::from_real_fn(&g, |r| r * r * r);
    let d = cubic.dr();
    let deriv = g.nodes().iter().zip(d.values()).map(|(&r, v)| (v - 3.0 * r * r).norm()).fold(0.0, f64::max);
    rows.push(tol_row("selftest_derivative", case(0, 0.0), deriv, 1e-10));

    for n in 0..=4i32 {
        let ops = assemble(FourierMode::new(n, 0.0), &g);
        let f = RadialField::from_real_fn(&g, |r| r.powi(n));
        rows.push(tol_row("selftest_harmonic_monomial", case(n, 0.0), interior_norm(&ops.lap(&f), COLLAR), 1e-9));
    }
    let w = operator_residuals(seed, 12, grid_n.clamp(48, 96))?;
    rows.push(tol_row("selftest_adjointness", case(1, 1.0), w.adjointness, 1e-8));
    rows.push(tol_row("selftest_factorization", case(1, 1.0), w.factorization, 1e-7));

    for kind in SystemKind::ALL {
        let mode = mode_for(kind, 1, 1.0);
        let r = recover(kind, mode, 1e-2, C64::new(0.5, 0.0), 0.7, grid_n.min(96))?;
        let c = Case::new(
            mode,
            1e-2,
            C64::new(0.5, 0.0),
            if kind.is_scalar_on_subinterval() { 0.7 } else { 1.0 },
            grid_n.min(96),
        );
        rows.push(tol_row(&format!("selftest_manufactured_{kind:?}").to_lowercase(), c, r.error, 1e-9));
    }

    for n in 0..=2u32 {
        for k in 1..=3u32 {
            let j = bessel_zero(n, k)?;
            rows.push(tol_row("selftest_bessel_zero", case(n as i32, k as f64), bessel_j(n, j).abs(), 1e-13));
        }
    }
    let a0 = airy_a0(zero)?;
    rows.push(tol_row("selftest_a0_origin", case(0, 0.0), (a0.a0 - 1.0 / 3.0).norm(), 1e-12));
    sort_rows(&mut rows);
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub bounds: Vec<SpectralBound>,
    pub slope: Option<SlopeFit>,
}

/// Eigenvalue table: one row per mode and viscosity.
pub const SPECTRUM_HEADER: [&str; 11] =
    ["nu", "n", "k", "l", "re", "im", "residual", "max_re", "eigen_count", "mirror_n", "mirror_k"];

pub fn spectrum_table(bounds: &[SpectralBound]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SPECTRUM_HEADER).expect("in-memory write");
    for b in bounds {
        for m in &b.modes {
            let (mn, mk) = m.mirror_of.map(|(a, b)| (a.to_string(), b.to_string())).unwrap_or_default();
            w.write_record([
                fmt_f64(b.nu),
                format!("{}", m.n),
                format!("{}", m.k),
                fmt_f64(m.l),
                fmt_f64(m.rightmost.re),
                fmt_f64(m.rightmost.im),
                fmt_f64(m.residual),
                fmt_f64(m.max_re),
                format!("{}", m.eigen_count),
                mn,
                mk,
            ])
            .expect("in-memory write");
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

pub fn run_spectrum(cfg: &SweepConfig) -> Result<SpectrumReport> {
    let sp = &cfg.spectrum;
    let g = build_grid(cfg.grid_n)?;
    let bounds = sp
        .nu
        .iter()
        .map(|&nu| spectral_bound(nu, sp.lz, sp.n_max, sp.k_max, &g, &sp.scan))
        .collect::<Result<Vec<_>>>()?;
    let slope = if sp.slope_nu.is_empty() {
        None
    } else {
        let mode = FourierMode::new(sp.slope_mode[0] as i32, sp.slope_mode[1]);
        Some(dissipation_slope(mode, &sp.slope_nu, &g, &sp.scan)?)
    };
    Ok(SpectrumReport { bounds, slope })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub harness: HarnessReport,
    /// Harness, Airy and harmonic rows, sorted.
    pub rows: Vec<BoundReport>,
}

impl InequalityReport {
    pub fn hard_failures(&self) -> usize {
        self.rows.iter().filter(|r| r.is_hard_failure()).count() + self.harness.hard_failures()
    }
}

pub fn run_inequalities(cfg: &SweepConfig) -> Result<InequalityReport> {
    let harness = run_harness(&cfg.inequalities)?;
    let mut rows = harness.rows.clone();
    rows.extend(airy_suite()?);
    rows.extend(harmonic_suite()?);
    sort_rows(&mut rows);
    Ok(InequalityReport { harness, rows })
}

/// Create `dir` and write `name` into it.
pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::Config(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    // NaN and infinities become null
    serde_json::to_string_pretty(value).expect("report types serialize")
}
