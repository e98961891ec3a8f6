//! JSON experiment configuration.
//!
//! Every config carries `"version": 1`; unknown keys are rejected at every level.

use std::fs;
use std::path::{Path, PathBuf};

use eigenbound::contour::ContourSpec;
use eigenbound::noise::SubGaussian;
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::error::{CliError, Result};

pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Seed schedule and output destination shared by all commands.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed_base: u64,
    #[serde(default = "one")]
    pub trials: usize,
    /// Explicit seed list; takes precedence over `seed_base`/`trials`.
    #[serde(default)]
    pub seeds: Option<Vec<u64>>,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed_base: 0,
            trials: 1,
            seeds: None,
            format: Format::Csv,
            out: None,
        }
    }
}

impl RunConfig {
    pub fn seeds(&self) -> Vec<u64> {
        match &self.seeds {
            Some(s) => s.clone(),
            None => (0..self.trials as u64).map(|i| self.seed_base.wrapping_add(i)).collect(),
        }
    }

    fn validate(&self) -> Result<()> {
        match &self.seeds {
            Some(s) if s.is_empty() => Err(CliError::Config("seed list is empty".into())),
            None if self.trials == 0 => Err(CliError::Config("trials must be >= 1".into())),
            _ => Ok(()),
        }
    }
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Law {
    #[default]
    Gaussian,
    Rademacher,
}

impl From<Law> for SubGaussian {
    fn from(l: Law) -> Self {
        match l {
            Law::Gaussian => SubGaussian::Gaussian,
            Law::Rademacher => SubGaussian::Rademacher,
        }
    }
}

/// Symmetric ground truth `A`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GroundConfig {
    /// `A = U diag(spectrum) Uᵀ` with a seeded orthonormal `U` of width `spectrum.len()`.
    LowRank { n: usize, spectrum: Vec<f64> },
    /// Fixed symmetric MatrixMarket file.
    File { path: PathBuf },
}

impl GroundConfig {
    fn validate(&self) -> Result<()> {
        match self {
            GroundConfig::LowRank { n, spectrum } => {
                if *n < 2 {
                    return Err(CliError::Config(format!("ground n = {n} must be >= 2")));
                }
                if spectrum.is_empty() || spectrum.len() > *n {
                    return Err(CliError::Config(format!(
                        "ground spectrum length {} must lie in 1..={n}",
                        spectrum.len()
                    )));
                }
                if spectrum.iter().any(|v| !v.is_finite()) {
                    return Err(CliError::Config("ground spectrum has non-finite entries".into()));
                }
                Ok(())
            }
            GroundConfig::File { path } => require_file(path),
        }
    }
}

/// Noise `E`; `wigner`, `sparsify` and `zero` apply to symmetric instances,
/// `gaussian` to rectangular ones, `custom-file` to both.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum NoiseConfig {
    Wigner {
        #[serde(default)]
        law: Law,
        scale: f64,
    },
    Sparsify {
        rho: f64,
    },
    Gaussian {
        scale: f64,
    },
    CustomFile {
        path: PathBuf,
    },
    Zero,
}

impl NoiseConfig {
    fn validate(&self, rectangular: bool) -> Result<()> {
        match self {
            NoiseConfig::Wigner { scale, .. } | NoiseConfig::Gaussian { scale } if !(*scale >= 0.0 && scale.is_finite()) => {
                Err(CliError::Config(format!("noise scale {scale} must be finite and >= 0")))
            }
            NoiseConfig::Sparsify { rho } => check_rho(*rho),
            NoiseConfig::CustomFile { path } => require_file(path),
            _ => Ok(()),
        }?;
        let ok = match self {
            NoiseConfig::Wigner { .. } | NoiseConfig::Sparsify { .. } => !rectangular,
            NoiseConfig::Gaussian { .. } => rectangular,
            NoiseConfig::CustomFile { .. } | NoiseConfig::Zero => true,
        };
        if ok {
            Ok(())
        } else if rectangular {
            Err(CliError::Config("rectangular instances take gaussian, custom-file or zero noise".into()))
        } else {
            Err(CliError::Config("symmetric instances take wigner, sparsify, custom-file or zero noise".into()))
        }
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if rho > 0.0 && rho <= 1.0 {
        Ok(())
    } else {
        Err(CliError::Config(format!("rho = {rho} must lie in (0, 1]")))
    }
}

fn require_file(path: &Path) -> Result<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(CliError::Config(format!("file {} does not exist", path.display())))
    }
}

fn check_version(v: u32) -> Result<()> {
    if v == CONFIG_VERSION {
        Ok(())
    } else {
        Err(CliError::Config(format!("unsupported config version {v} (expected {CONFIG_VERSION})")))
    }
}

fn default_low_rank() -> GroundConfig {
    GroundConfig::LowRank {
        n: 40,
        spectrum: vec![100.0, 90.0, 40.0, 10.0],
    }
}

fn default_wigner() -> NoiseConfig {
    NoiseConfig::Wigner {
        law: Law::Gaussian,
        scale: 0.15,
    }
}

fn default_p() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundCompareConfig {
    pub version: u32,
    #[serde(default)]
    pub run: RunConfig,
    #[serde(default = "default_low_rank")]
    pub ground: GroundConfig,
    #[serde(default = "default_wigner")]
    pub noise: NoiseConfig,
    /// Leading block size; ignored when `subset` is given.
    #[serde(default = "default_p")]
    pub p: usize,
    /// 0-based eigenvalue indices (descending order).
    #[serde(default)]
    pub subset: Option<Vec<usize>>,
}

impl Default for BoundCompareConfig {
    fn default() -> Self {
        Self {
            version: CONFIG_VERSION,
            run: RunConfig::default(),
            ground: default_low_rank(),
            noise: default_wigner(),
            p: 1,
            subset: None,
        }
    }
}

impl BoundCompareConfig {
    pub fn subset(&self) -> Vec<usize> {
        self.subset.clone().unwrap_or_else(|| (0..self.p).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContourKind {
    /// Rectangle from `λ_p − δ_p/2` to `2σ₁`.
    #[default]
    Theorem,
    /// Rectangle bisecting the gaps around the leading block.
    Bisecting,
}

fn default_nodes() -> usize {
    ContourSpec::DEFAULT_NODES
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContourVerifyConfig {
    pub version: u32,
    #[serde(default)]
    pub run: RunConfig,
    #[serde(default = "default_contour_ground")]
    pub ground: GroundConfig,
    #[serde(default = "default_wigner")]
    pub noise: NoiseConfig,
    #[serde(default = "default_p")]
    pub p: usize,
    #[serde(default)]
    pub contour: ContourKind,
    #[serde(default = "default_nodes")]
    pub nodes: usize,
    /// When false only the Cauchy projector is checked.
    #[serde(default = "yes")]
    pub integrals: bool,
}

fn default_contour_ground() -> GroundConfig {
    GroundConfig::LowRank {
        n: 16,
        spectrum: vec![100.0, 90.0, 40.0, 10.0],
    }
}

impl Default for ContourVerifyConfig {
    fn default() -> Self {
        Self {
            version: CONFIG_VERSION,
            run: RunConfig::default(),
            ground: default_contour_ground(),
            noise: default_wigner(),
            p: 1,
            contour: ContourKind::Theorem,
            nodes: default_nodes(),
            integrals: true,
        }
    }
}

fn default_power_ground() -> GroundConfig {
    GroundConfig::LowRank {
        n: 500,
        spectrum: vec![500.0, 450.0, 200.0, 100.0, 50.0],
    }
}

fn default_rho() -> Vec<f64> {
    vec![0.5]
}

fn default_iterations() -> usize {
    300
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SparsifyPowerConfig {
    pub version: u32,
    #[serde(default)]
    pub run: RunConfig,
    #[serde(default = "default_power_ground")]
    pub ground: GroundConfig,
    /// Densities swept in order; each runs the full seed list.
    #[serde(default = "default_rho")]
    pub rho: Vec<f64>,
    #[serde(default = "default_iterations")]
    pub iterations: usize,
    #[serde(default)]
    pub stop_tol: Option<f64>,
    /// Entry bound `K` for the certificate; defaults to `max|a_ij|`.
    #[serde(default)]
    pub entry_bound: Option<f64>,
    /// Explicit noise replacing sparsification.
    #[serde(default)]
    pub noise_file: Option<PathBuf>,
}

impl Default for SparsifyPowerConfig {
    fn default() -> Self {
        Self {
            version: CONFIG_VERSION,
            run: RunConfig::default(),
            ground: default_power_ground(),
            rho: default_rho(),
            iterations: default_iterations(),
            stop_tol: None,
            entry_bound: None,
            noise_file: None,
        }
    }
}

/// Instance for the singular-space commands.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InstanceConfig {
    /// `A = U diag(σ) Vᵀ` of shape `rows × cols`.
    Rectangular {
        rows: usize,
        cols: usize,
        singular_values: Vec<f64>,
    },
    /// Fixed general MatrixMarket file.
    File { path: PathBuf },
    /// Symmetric low-rank instance whose top `p` singular values split into
    /// `k` positive and `p − k` negative eigenvalues.
    Signed { n: usize, spectrum: Vec<f64>, k: usize },
}

fn default_instance() -> InstanceConfig {
    InstanceConfig::Rectangular {
        rows: 30,
        cols: 20,
        singular_values: vec![100.0, 90.0, 40.0, 5.0, 1.0],
    }
}

fn default_gaussian() -> NoiseConfig {
    NoiseConfig::Gaussian { scale: 0.15 }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingularRectConfig {
    pub version: u32,
    #[serde(default)]
    pub run: RunConfig,
    #[serde(default = "default_instance")]
    pub instance: InstanceConfig,
    #[serde(default = "default_gaussian")]
    pub noise: NoiseConfig,
    #[serde(default = "default_p")]
    pub p: usize,
}

impl Default for SingularRectConfig {
    fn default() -> Self {
        Self {
            version: CONFIG_VERSION,
            run: RunConfig::default(),
            instance: default_instance(),
            noise: default_gaussian(),
            p: 1,
        }
    }
}

/// Checks run after flags are merged, before any trial executes.
pub trait Validate {
    fn validate(&self) -> Result<()>;
    fn run_mut(&mut self) -> &mut RunConfig;
}

impl Validate for BoundCompareConfig {
    fn validate(&self) -> Result<()> {
        check_version(self.version)?;
        self.run.validate()?;
        self.ground.validate()?;
        self.noise.validate(false)?;
        if let Some(s) = &self.subset {
            if s.is_empty() {
                return Err(CliError::Config("subset is empty".into()));
            }
        } else if self.p == 0 {
            return Err(CliError::Config("p must be >= 1".into()));
        }
        Ok(())
    }

    fn run_mut(&mut self) -> &mut RunConfig {
        &mut self.run
    }
}

impl Validate for ContourVerifyConfig {
    fn validate(&self) -> Result<()> {
        check_version(self.version)?;
        self.run.validate()?;
        self.ground.validate()?;
        self.noise.validate(false)?;
        if self.p == 0 {
            return Err(CliError::Config("p must be >= 1".into()));
        }
        if self.nodes < ContourSpec::MIN_NODES {
            return Err(CliError::Config(format!("nodes = {} must be >= {}", self.nodes, ContourSpec::MIN_NODES)));
        }
        Ok(())
    }

    fn run_mut(&mut self) -> &mut RunConfig {
        &mut self.run
    }
}

impl Validate for SparsifyPowerConfig {
    fn validate(&self) -> Result<()> {
        check_version(self.version)?;
        self.run.validate()?;
        self.ground.validate()?;
        if self.rho.is_empty() {
            return Err(CliError::Config("rho list is empty".into()));
        }
        for &r in &self.rho {
            check_rho(r)?;
        }
        if self.iterations == 0 {
            return Err(CliError::Config("iterations must be >= 1".into()));
        }
        if let Some(k) = self.entry_bound {
            if !(k > 0.0 && k.is_finite()) {
                return Err(CliError::Config(format!("entry_bound = {k} must be positive")));
            }
        }
        if let Some(t) = self.stop_tol {
            if !(t > 0.0) {
                return Err(CliError::Config(format!("stop_tol = {t} must be positive")));
            }
        }
        if let Some(p) = &self.noise_file {
            require_file(p)?;
        }
        Ok(())
    }

    fn run_mut(&mut self) -> &mut RunConfig {
        &mut self.run
    }
}

impl Validate for SingularRectConfig {
    fn validate(&self) -> Result<()> {
        check_version(self.version)?;
        self.run.validate()?;
        match &self.instance {
            InstanceConfig::Rectangular { rows, cols, singular_values } => {
                if *rows == 0 || *cols == 0 {
                    return Err(CliError::Config("rectangular shape must be non-empty".into()));
                }
                if singular_values.is_empty() || singular_values.len() > (*rows).min(*cols) {
                    return Err(CliError::Config(format!(
                        "{} singular values do not fit a {rows} x {cols} matrix",
                        singular_values.len()
                    )));
                }
                self.noise.validate(true)?;
            }
            InstanceConfig::File { path } => {
                require_file(path)?;
                self.noise.validate(true)?;
            }
            InstanceConfig::Signed { n, spectrum, k } => {
                GroundConfig::LowRank {
                    n: *n,
                    spectrum: spectrum.clone(),
                }
                .validate()?;
                if *k == 0 || *k >= self.p || self.p >= *n {
                    return Err(CliError::Config(format!(
                        "signed instances need 1 <= k < p < n, got k = {k}, p = {}, n = {n}",
                        self.p
                    )));
                }
                self.noise.validate(false)?;
            }
        }
        if self.p == 0 {
            return Err(CliError::Config("p must be >= 1".into()));
        }
        Ok(())
    }

    fn run_mut(&mut self) -> &mut RunConfig {
        &mut self.run
    }
}

/// Parses a config document; the caller validates after applying flags.
pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
}

pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse(&text)
}
