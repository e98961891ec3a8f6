//! The four experiment commands. Each returns a [`Report`](crate::Report)
//! whose rows follow the seed list order.

pub mod bound_compare;
pub mod contour_verify;
pub mod singular_rect;
pub mod sparsify_power;

use std::time::Instant;

use eigenbound::bounds::BoundStatus;
use eigenbound::io::read_symmetric;
use eigenbound::noise::{low_rank_ground, sparsify, wigner_matrix, GroundSpec, SubGaussian};
use eigenbound::spectral::{spectral_decompose, SpectralData};
use eigenbound::SymmetricMatrix;
use rayon::prelude::*;
use serde_json::{Map, Value};

use crate::config::{GroundConfig, NoiseConfig};
use crate::error::{CliError, Result};
use crate::output::Cell;

/// Dominance slack used by every inequality check on measured quantities.
pub const DOMINANCE_SLACK: f64 = 1e-9;

pub(crate) enum Ground {
    Fixed(SymmetricMatrix, SpectralData),
    LowRank { n: usize, spectrum: Vec<f64> },
}

impl Ground {
    pub(crate) fn load(cfg: &GroundConfig) -> Result<Self> {
        Ok(match cfg {
            GroundConfig::File { path } => {
                let a = read_symmetric(path)?;
                let d = spectral_decompose(&a)?;
                Ground::Fixed(a, d)
            }
            GroundConfig::LowRank { n, spectrum } => Ground::LowRank {
                n: *n,
                spectrum: spectrum.clone(),
            },
        })
    }

    pub(crate) fn dim(&self) -> usize {
        match self {
            Ground::Fixed(a, _) => a.dim(),
            Ground::LowRank { n, .. } => *n,
        }
    }

    pub(crate) fn instance(&self, seed: u64) -> eigenbound::Result<(SymmetricMatrix, SpectralData)> {
        match self {
            Ground::Fixed(a, d) => Ok((a.clone(), d.clone())),
            Ground::LowRank { n, spectrum } => low_rank_ground(&GroundSpec {
                n: *n,
                rank: spectrum.len(),
                spectrum: spectrum.clone(),
                seed,
            }),
        }
    }
}

pub(crate) enum Noise {
    Wigner { law: SubGaussian, scale: f64 },
    Sparsify { rho: f64 },
    Fixed(SymmetricMatrix),
    Zero,
}

impl Noise {
    /// Loads symmetric noise and checks it against the ground dimension.
    pub(crate) fn load(cfg: &NoiseConfig, dim: usize) -> Result<Self> {
        Ok(match cfg {
            NoiseConfig::Wigner { law, scale } => Noise::Wigner {
                law: (*law).into(),
                scale: *scale,
            },
            NoiseConfig::Sparsify { rho } => Noise::Sparsify { rho: *rho },
            NoiseConfig::CustomFile { path } => {
                let e = read_symmetric(path)?;
                if e.dim() != dim {
                    return Err(CliError::Config(format!(
                        "noise file {} is {}x{}, ground is {dim}x{dim}",
                        path.display(),
                        e.dim(),
                        e.dim()
                    )));
                }
                Noise::Fixed(e)
            }
            NoiseConfig::Zero => Noise::Zero,
            NoiseConfig::Gaussian { .. } => {
                return Err(CliError::Config("gaussian noise needs a rectangular instance".into()))
            }
        })
    }

    pub(crate) fn sample(&self, a: &SymmetricMatrix, seed: u64) -> eigenbound::Result<SymmetricMatrix> {
        Ok(match self {
            Noise::Wigner { law, scale } => wigner_matrix(a.dim(), *law, seed).scaled(*scale),
            Noise::Sparsify { rho } => sparsify(a, *rho, seed)?.e,
            Noise::Fixed(e) => e.clone(),
            Noise::Zero => SymmetricMatrix::zeros(a.dim()),
        })
    }
}

/// Runs `f` over `items` on the rayon pool; outputs come back in input order.
pub(crate) fn run_trials<I: Sync, T: Send>(items: &[I], f: impl Fn(&I) -> T + Sync) -> (Vec<T>, Vec<f64>) {
    items
        .par_iter()
        .map(|item| {
            let start = Instant::now();
            let out = f(item);
            (out, start.elapsed().as_secs_f64())
        })
        .unzip()
}

pub(crate) fn status_text(b: &BoundStatus) -> String {
    match b {
        BoundStatus::Value(_) => "ok".into(),
        BoundStatus::Failed(p) => format!("failed: {p}"),
        BoundStatus::NotApplicable => "n/a".into(),
    }
}

/// A record for a trial that raised an error: the given leading cells, blanks,
/// and the message in the trailing `status` column.
pub(crate) fn error_row(width: usize, mut prefix: Vec<Cell>, message: &str) -> Vec<Cell> {
    prefix.resize(width - 1, Cell::Empty);
    prefix.push(Cell::Text(format!("error: {message}")));
    prefix
}

pub(crate) fn rate(count: usize, total: usize) -> Value {
    if total == 0 {
        Value::Null
    } else {
        Value::from(count as f64 / total as f64)
    }
}

pub(crate) fn count_map<'a>(entries: impl IntoIterator<Item = (&'a str, usize)>) -> Map<String, Value> {
    entries.into_iter().map(|(k, v)| (k.to_string(), Value::from(v))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trial_outputs_follow_input_order() {
        let seeds: Vec<u64> = (0..64).rev().collect();
        let (out, times) = run_trials(&seeds, |s| s * 2);
        assert_eq!(out, seeds.iter().map(|s| s * 2).collect::<Vec<_>>());
        assert_eq!(times.len(), 64);
    }

    #[test]
    fn error_rows_fill_width() {
        let row = error_row(4, vec![Cell::Int(3)], "boom");
        assert_eq!(row, vec![Cell::Int(3), Cell::Empty, Cell::Empty, Cell::Text("error: boom".into())]);
    }
}
