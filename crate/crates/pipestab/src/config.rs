//! Sweep configuration: a TOML file, every field optional.
//!
//! ```toml
//! grid_n = 128
//! seed = 0
//! nu = [1e-2, 1e-3, 1e-4, 1e-5]
//! checks = ["resolvent", "homogeneous"]
//!
//! [modes]
//! n = [1, 2]
//! k = [1]
//! lz = 6.283185307179586
//!
//! [lambda]
//! kind = "list"
//! values = [[0.5, 0.0], [-0.5, 0.0]]
//!
//! [forcing]
//! kind = "random"
//! count = 20
//! ```

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::FourierMode;
use crate::inequalities::HarnessConfig;
use crate::spectrum::ScanConfig;

/// Every sweep check identifier, in execution order.
pub const SWEEP_CHECKS: [&str; 10] = [
    "resolvent",
    "energy",
    "critical_layer",
    "homogeneous",
    "approx",
    "toy",
    "frozen",
    "scalar",
    "error_terms",
    "axisym",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub grid_n: usize,
    /// Finer grid used below a viscosity threshold (boundary layers thin like ν^{1/3}).
    pub fine_grid: Option<FineGrid>,
    pub seed: u64,
    /// Worker threads; 0 means available parallelism.
    pub workers: usize,
    pub nu: Vec<f64>,
    pub modes: ModeSpec,
    pub lambda: LambdaSpec,
    pub forcing: ForcingSpec,
    pub checks: Vec<String>,
    /// Sub-interval ends used by the `frozen` and `scalar` checks.
    pub s: Vec<f64>,
    /// Admission filter `ν(Lz + 1) ≤ admission_c0`.
    pub admission_c0: f64,
    pub resolvent: ResolventSpec,
    pub spectrum: SpectrumSpec,
    pub inequalities: HarnessConfig,
    pub output: OutputSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FineGrid {
    pub below_nu: f64,
    pub grid_n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModeSpec {
    pub n: Vec<i32>,
    /// Axial wavenumber indices, `l = 2πk/Lz`.
    pub k: Vec<i32>,
    /// Explicit axial wavenumbers, used in addition to `k`.
    pub l: Vec<f64>,
    pub lz: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LambdaSpec {
    List { values: Vec<[f64; 2]> },
    Interval { re: [f64; 2], count: usize },
    Strip { re: [f64; 2], im: [f64; 2], re_count: usize, im_count: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ForcingSpec {
    /// `count` random forcing pairs with seeds derived from the run seed.
    Random { count: usize },
    /// A single forcing built from a known smooth solution.
    Manufactured,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ResolventSpec {
    pub n: i32,
    pub l: f64,
    pub nu: f64,
    pub lambda: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumSpec {
    pub nu: Vec<f64>,
    pub lz: f64,
    pub n_max: i32,
    pub k_max: i32,
    /// Viscosities of the slope fit for `slope_mode`; empty skips the fit.
    pub slope_nu: Vec<f64>,
    pub slope_mode: [f64; 2],
    pub scan: ScanConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    pub dir: String,
    pub csv: String,
    pub json: String,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            grid_n: 128,
            fine_grid: None,
            seed: 0,
            workers: 0,
            nu: vec![1e-2, 1e-3, 1e-4, 1e-5],
            modes: ModeSpec::default(),
            lambda: LambdaSpec::List { values: vec![[-0.5, 0.0], [0.3, 0.0], [0.5, 0.0], [0.9, 0.0], [2.0, 0.0]] },
            forcing: ForcingSpec::Random { count: 4 },
            checks: vec!["resolvent".into(), "energy".into(), "homogeneous".into()],
            s: vec![0.5, 0.8],
            admission_c0: 0.1,
            resolvent: ResolventSpec::default(),
            spectrum: SpectrumSpec::default(),
            inequalities: HarnessConfig::default(),
            output: OutputSpec::default(),
        }
    }
}

impl Default for ModeSpec {
    fn default() -> Self {
        Self { n: vec![1], k: vec![], l: vec![1.0], lz: 2.0 * PI }
    }
}

impl Default for ResolventSpec {
    fn default() -> Self {
        Self { n: 1, l: 1.0, nu: 1e-3, lambda: [0.5, 0.0] }
    }
}

impl Default for SpectrumSpec {
    fn default() -> Self {
        Self {
            nu: vec![1e-3, 1e-4],
            lz: 2.0 * PI,
            n_max: 1,
            k_max: 1,
            slope_nu: vec![],
            slope_mode: [1.0, 1.0],
            scan: ScanConfig::default(),
        }
    }
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self { dir: "out".into(), csv: "report.csv".into(), json: "summary.json".into() }
    }
}

fn linspace(a: f64, b: f64, count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![a],
        _ => (0..count).map(|k| a + (b - a) * k as f64 / (count - 1) as f64).collect(),
    }
}

impl LambdaSpec {
    pub fn values(&self) -> Vec<C64> {
        match self {
            LambdaSpec::List { values } => values.iter().map(|&[re, im]| C64::new(re, im)).collect(),
            LambdaSpec::Interval { re, count } => {
                linspace(re[0], re[1], *count).into_iter().map(|x| C64::new(x, 0.0)).collect()
            }
            LambdaSpec::Strip { re, im, re_count, im_count } => {
                let ims = linspace(im[0], im[1], *im_count);
                linspace(re[0], re[1], *re_count)
                    .into_iter()
                    .flat_map(|x| ims.iter().map(move |&y| C64::new(x, y)))
                    .collect()
            }
        }
    }
}

impl ModeSpec {
    /// All `(n, l)` pairs, `k` values first.
    pub fn modes(&self) -> Vec<FourierMode> {
        let mut ls: Vec<f64> = self.k.iter().map(|&k| 2.0 * PI * k as f64 / self.lz).collect();
        ls.extend(&self.l);
        self.n.iter().flat_map(|&n| ls.iter().map(move |&l| FourierMode::new(n, l))).collect()
    }
}

impl SweepConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always serializable")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.grid_n < 2 {
            return bad(format!("grid_n = {} must be at least 2", self.grid_n));
        }
        if let Some(f) = self.fine_grid {
            if f.grid_n < 2 || !(f.below_nu > 0.0) {
                return bad("fine_grid needs grid_n ≥ 2 and below_nu > 0".into());
            }
        }
        let known: BTreeSet<&str> = SWEEP_CHECKS.into_iter().collect();
        for c in &self.checks {
            if !known.contains(c.as_str()) {
                return bad(format!("unknown check `{c}` (known: {})", SWEEP_CHECKS.join(", ")));
            }
        }
        if !self.checks.is_empty() {
            if self.nu.is_empty() || self.modes.modes().is_empty() || self.lambda.values().is_empty() {
                return bad("nu, modes and lambda must be nonempty when checks are selected".into());
            }
            if matches!(self.forcing, ForcingSpec::Random { count: 0 }) {
                return bad("forcing.count must be positive".into());
            }
        }
        if self.nu.iter().chain(&self.spectrum.nu).chain(&self.spectrum.slope_nu).any(|&v| !(v > 0.0 && v.is_finite()))
        {
            return bad("viscosities must be positive and finite".into());
        }
        if !(self.modes.lz > 0.0) || !(self.spectrum.lz > 0.0) {
            return bad("lz must be positive".into());
        }
        if self.s.iter().any(|&s| !(s > 0.0 && s <= 1.0)) {
            return bad("s values must lie in (0, 1]".into());
        }
        if self.spectrum.n_max < 0 || self.spectrum.k_max < 1 {
            return bad("spectrum needs n_max ≥ 0 and k_max ≥ 1".into());
        }
        Ok(())
    }

    pub fn grid_n_for(&self, nu: f64) -> usize {
        match self.fine_grid {
            Some(f) if nu < f.below_nu => f.grid_n,
            _ => self.grid_n,
        }
    }

    /// `0 < ν(Lz + 1) ≤ c₀`.
    pub fn admits(&self, nu: f64) -> bool {
        nu > 0.0 && nu * (self.modes.lz + 1.0) <= self.admission_c0
    }
}
