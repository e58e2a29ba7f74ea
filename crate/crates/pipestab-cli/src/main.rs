use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use pipestab::acceptance::{run_criterion, AcceptanceOptions, CRITERIA};
use pipestab::checks::{Aggregate, BoundReport};
use pipestab::config::SweepConfig;
use pipestab::runner::{
    csv_table, run_inequalities, run_resolvent, run_selftest, run_spectrum, run_sweep, spectrum_table, to_json,
    with_workers, write_file,
};
use pipestab::Error;

/// Linear-stability checks for pipe Poiseuille flow.
#[derive(Debug, Parser)]
#[command(name = "pipestab", version)]
struct Cli {
    /// TOML configuration file; every key is optional.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides `output.dir`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Radial grid size N (overrides `grid_n`).
    #[arg(long, global = true)]
    grid_n: Option<usize>,
    /// Worker threads, 0 for available parallelism (overrides `workers`).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Base seed (overrides `seed` and `inequalities.seed`).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Grid, operator, solver and special-function invariants.
    Selftest,
    /// One resolvent solve (the `[resolvent]` table) with its checks.
    Resolvent,
    /// Estimate checks over the configured ν × mode × λ × forcing grid.
    Sweep,
    /// Spectral bounds over the `[spectrum]` mode set, and the optional slope fit.
    Spectrum,
    /// Random-input inequality harness, Airy suite and harmonic bounds.
    Inequalities,
    /// The acceptance suite.
    Acceptance {
        /// Run only these criteria (1-based); all by default.
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
    },
}

enum Failure {
    Config(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(m) => Failure::Config(m),
            other => Failure::Numeric(other.to_string()),
        }
    }
}

fn resolve(cli: &Cli) -> Result<(SweepConfig, PathBuf), Failure> {
    let mut cfg = match &cli.config {
        Some(p) => SweepConfig::load(p)?,
        None => SweepConfig::default(),
    };
    if let Some(n) = cli.grid_n {
        cfg.grid_n = n;
    }
    if let Some(w) = cli.workers {
        cfg.workers = w;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
        cfg.inequalities.seed = s;
    }
    if let Some(o) = &cli.out {
        cfg.output.dir = o.to_string_lossy().into_owned();
    }
    cfg.validate()?;
    let dir = PathBuf::from(&cfg.output.dir);
    Ok((cfg, dir))
}

#[derive(Serialize)]
struct RowSummary<'a> {
    config: &'a SweepConfig,
    rows: usize,
    hard_failures: usize,
    errors: usize,
    aggregates: &'a [Aggregate],
}

fn row_counts(rows: &[BoundReport]) -> (usize, usize) {
    (rows.iter().filter(|r| r.is_hard_failure()).count(), rows.iter().filter(|r| r.error.is_some()).count())
}

fn report_rows(dir: &Path, stem: &str, cfg: &SweepConfig, rows: &[BoundReport]) -> Result<usize, Failure> {
    let aggregates = pipestab::checks::aggregate(rows);
    let (hard, errors) = row_counts(rows);
    write_file(dir, &format!("{stem}.csv"), &csv_table(rows))?;
    let summary = RowSummary { config: cfg, rows: rows.len(), hard_failures: hard, errors, aggregates: &aggregates };
    write_file(dir, &format!("{stem}.json"), &to_json(&summary))?;
    println!("{stem}: {} rows, {hard} hard failures, {errors} errors -> {}", rows.len(), dir.display());
    Ok(hard)
}

fn run(cli: &Cli) -> Result<usize, Failure> {
    let (cfg, dir) = resolve(cli)?;
    write_file(&dir, "config.toml", &cfg.to_toml())?;
    let work = || -> Result<usize, Failure> {
        match &cli.command {
            Command::Selftest => {
                let rows = run_selftest(cfg.grid_n, cfg.seed)?;
                report_rows(&dir, "selftest", &cfg, &rows)
            }
            Command::Resolvent => {
                let rows = run_resolvent(&cfg)?;
                report_rows(&dir, "resolvent", &cfg, &rows)
            }
            Command::Sweep => {
                let rep = run_sweep(&cfg)?;
                write_file(&dir, &cfg.output.csv, &csv_table(&rep.rows))?;
                #[derive(Serialize)]
                struct Summary<'a> {
                    config: &'a SweepConfig,
                    rows: usize,
                    hard_failures: usize,
                    errors: usize,
                    skipped: &'a std::collections::BTreeMap<String, usize>,
                    aggregates: &'a [Aggregate],
                }
                let (hard, errors) = row_counts(&rep.rows);
                let s = Summary {
                    config: &cfg,
                    rows: rep.rows.len(),
                    hard_failures: hard,
                    errors,
                    skipped: &rep.skipped,
                    aggregates: &rep.aggregates,
                };
                write_file(&dir, &cfg.output.json, &to_json(&s))?;
                println!("sweep: {} rows, {hard} hard failures, {errors} errors -> {}", rep.rows.len(), dir.display());
                for (why, count) in &rep.skipped {
                    println!("  skipped {count}× {why}");
                }
                Ok(hard)
            }
            Command::Spectrum => {
                let rep = run_spectrum(&cfg)?;
                write_file(&dir, "spectrum.csv", &spectrum_table(&rep.bounds))?;
                #[derive(Serialize)]
                struct Summary<'a> {
                    config: &'a SweepConfig,
                    report: &'a pipestab::runner::SpectrumReport,
                }
                write_file(&dir, "spectrum.json", &to_json(&Summary { config: &cfg, report: &rep }))?;
                let mut bad = 0;
                for b in &rep.bounds {
                    println!(
                        "ν={:e}: m̂₀ {:.4e}  m̂₁ {:.4e}  m̂ {:.4e}  max Re {:.4e}  c_eff(m̂₁) {:.4}  c_eff(m̂) {:.4}",
                        b.nu, b.m0, b.m1, b.m, b.max_re_all, b.c_eff_m1, b.c_eff_m
                    );
                    bad += usize::from(b.max_re_all.is_nan() || b.max_re_all >= 0.0);
                }
                if let Some(s) = &rep.slope {
                    println!("slope of −Re s vs ν: {:.4}", s.slope);
                }
                Ok(bad)
            }
            Command::Inequalities => {
                let rep = run_inequalities(&cfg)?;
                write_file(&dir, "inequalities.csv", &csv_table(&rep.rows))?;
                #[derive(Serialize)]
                struct Summary<'a> {
                    config: &'a SweepConfig,
                    hard_failures: usize,
                    tallies: &'a [pipestab::inequalities::Tally],
                    aggregates: Vec<Aggregate>,
                }
                let hard = rep.hard_failures();
                let s = Summary {
                    config: &cfg,
                    hard_failures: hard,
                    tallies: &rep.harness.tallies,
                    aggregates: pipestab::checks::aggregate(&rep.rows),
                };
                write_file(&dir, "inequalities.json", &to_json(&s))?;
                for t in &rep.harness.tallies {
                    println!(
                        "{:28} checked {:7} passed {:7} failed {} skipped {:6} errors {} max C_eff {:.4}",
                        t.id, t.checked, t.passed, t.failed, t.skipped, t.errors, t.max_c_eff
                    );
                }
                println!("inequalities: {} rows, {hard} hard failures -> {}", rep.rows.len(), dir.display());
                Ok(hard)
            }
            Command::Acceptance { only } => {
                let opts = AcceptanceOptions { grid_n: cfg.grid_n, seed: cfg.seed };
                let picks: Vec<usize> = if only.is_empty() { (1..=CRITERIA.len()).collect() } else { only.clone() };
                let mut results = Vec::new();
                for k in picks {
                    let r = run_criterion(k, &opts);
                    println!("{r}");
                    results.push(r);
                }
                write_file(&dir, "acceptance.json", &to_json(&results))?;
                let failed = results.iter().filter(|r| !r.pass).count();
                println!("acceptance: {}/{} passed", results.len() - failed, results.len());
                Ok(failed)
            }
        }
    };
    with_workers(cfg.workers, work)?
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(Failure::Numeric(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Config(m)) => {
            eprintln!("configuration error: {m}");
            ExitCode::from(2)
        }
    }
}
