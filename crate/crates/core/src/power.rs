//! Power iteration and the sparsified leading-eigenvector estimate.

use std::f64::consts::PI;

use nalgebra::DVector;

use crate::bounds::{self, BoundStatus};
use crate::error::{Error, PreconditionFailure, Result};
use crate::matrix::SymmetricMatrix;
use crate::noise;
use crate::spectral::{self, SpectralData, SpectralNorm};

/// Alignment below which a run is reported as stalled.
pub const STALL_ALIGNMENT: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub enum StartVector {
    /// Uniform draw from the unit sphere.
    Seeded(u64),
    Explicit(DVector<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerConfig {
    pub max_iterations: usize,
    pub start: StartVector,
    /// Residual `‖Mv − (vᵀMv)v‖` at which to stop early; `None` runs all iterations.
    pub stop_tol: Option<f64>,
}

impl PowerConfig {
    pub fn fixed(max_iterations: usize, seed: u64) -> Self {
        Self {
            max_iterations,
            start: StartVector::Seeded(seed),
            stop_tol: None,
        }
    }

    fn start_vector(&self, n: usize) -> Result<DVector<f64>> {
        if self.max_iterations == 0 {
            return Err(Error::InvalidArgument("max_iterations must be at least 1".into()));
        }
        if let Some(tol) = self.stop_tol {
            if !(tol > 0.0) {
                return Err(Error::InvalidArgument(format!("stop_tol must be positive, got {tol}")));
            }
        }
        match &self.start {
            StartVector::Seeded(seed) => Ok(noise::unit_sphere_vector(n, *seed)),
            StartVector::Explicit(v) => {
                if v.len() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n.to_string(),
                        found: v.len().to_string(),
                    });
                }
                if (v.norm() - 1.0).abs() > 1e-10 {
                    return Err(Error::InvalidArgument(format!(
                        "start vector must have unit norm, has {}",
                        v.norm()
                    )));
                }
                Ok(v.clone())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigvecResult {
    pub vector: DVector<f64>,
    pub iterations_used: usize,
    pub rayleigh: f64,
    pub residual: f64,
    /// `|⟨v_k, u⟩|` for `k = 0..=iterations_used` when a reference was supplied.
    pub alignment_history: Vec<f64>,
    /// Final alignment with the reference stayed below [`STALL_ALIGNMENT`].
    pub stalled: bool,
}

/// `v_k = M v_{k−1} / ‖M v_{k−1}‖`.
pub fn power_iteration(m: &SymmetricMatrix, cfg: &PowerConfig) -> Result<EigvecResult> {
    run(m, cfg, None)
}

/// [`power_iteration`] recording the alignment with `reference` at every step.
pub fn power_iteration_tracked(
    m: &SymmetricMatrix,
    cfg: &PowerConfig,
    reference: &DVector<f64>,
) -> Result<EigvecResult> {
    if reference.len() != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim().to_string(),
            found: reference.len().to_string(),
        });
    }
    run(m, cfg, Some(reference))
}

fn run(m: &SymmetricMatrix, cfg: &PowerConfig, reference: Option<&DVector<f64>>) -> Result<EigvecResult> {
    let mut v = cfg.start_vector(m.dim())?;
    let a = m.as_matrix();
    let mut history = Vec::new();
    if let Some(u) = reference {
        history.push(v.dot(u).abs());
    }
    let mut w = a * &v;
    let mut used = 0;
    for k in 1..=cfg.max_iterations {
        if let Some(tol) = cfg.stop_tol {
            if residual(&v, &w) <= tol {
                break;
            }
        }
        let norm = w.norm();
        if norm == 0.0 {
            return Err(Error::PowerBreakdown { iteration: k });
        }
        v = &w / norm;
        w = a * &v;
        used = k;
        if let Some(u) = reference {
            history.push(v.dot(u).abs());
        }
    }
    let stalled = history.last().is_some_and(|&h| h < STALL_ALIGNMENT);
    Ok(EigvecResult {
        rayleigh: v.dot(&w),
        residual: residual(&v, &w),
        vector: v,
        iterations_used: used,
        alignment_history: history,
        stalled,
    })
}

fn residual(v: &DVector<f64>, mv: &DVector<f64>) -> f64 {
    (mv - v * v.dot(mv)).norm()
}

/// `min(‖u − v‖, ‖u + v‖)`.
pub fn sign_aligned_error(u: &DVector<f64>, v: &DVector<f64>) -> f64 {
    (u - v).norm().min((u + v).norm())
}

/// Outcome of one sparsified (or explicitly perturbed) power run.
#[derive(Debug, Clone, PartialEq)]
pub struct SparsePowerOutcome {
    pub result: EigvecResult,
    /// Sign-aligned distance to the top eigenvector of `A`.
    pub error: f64,
    pub certificate: BoundStatus,
    /// Probability with which the certificate may fail, `r²/n²`; zero for
    /// certificates computed from the realized noise.
    pub certificate_failure_probability: f64,
    /// Davis-Kahan style comparison value.
    pub dk_comparison: f64,
    pub noise_norm: f64,
    pub entry_bound: f64,
    pub rho: f64,
    pub rho_advisory: bool,
    /// Stored nonzeros of the iterated matrix.
    pub nonzeros: usize,
}

/// Certificate `72K/√ρ (√n/|λ₁| · log(6σ₁/δ₁) + r² log n / δ₁)` under
/// `8K√(n/ρ) ≤ δ₁ ≤ |λ₁|/4`.
pub fn sparsified_certificate(d: &SpectralData, entry_bound: f64, rho: f64) -> Result<f64> {
    let n = d.dim();
    if n < 2 {
        return Err(Error::InvalidArgument("need n >= 2 for a spectral gap".into()));
    }
    let eig = d.eigenvalues();
    let delta_1 = eig[0] - eig[1];
    let nf = n as f64;
    let k = entry_bound;
    crate::error::require_le("8K sqrt(n/rho) <= delta_1", 8.0 * k * (nf / rho).sqrt(), delta_1)?;
    crate::error::require_le("delta_1 <= |lambda_1|/4", delta_1, eig[0].abs() / 4.0)?;
    if delta_1 <= 0.0 {
        return Err(PreconditionFailure::new("delta_1 > 0", delta_1).into());
    }
    let r = bounds::halving_index_of(eig, 1) as f64;
    Ok(72.0 * k / rho.sqrt()
        * (nf.sqrt() / eig[0].abs() * (6.0 * d.source_norm() / delta_1).ln() + r * r * nf.ln() / delta_1))
}

/// Sparsifies `a` at density `rho`, runs power iteration on `Ã`, and certifies the result.
pub fn sparsified_leading_eigvec(
    a: &SymmetricMatrix,
    rho: f64,
    seed: u64,
    cfg: &PowerConfig,
) -> Result<SparsePowerOutcome> {
    let d = spectral::spectral_decompose(a)?;
    sparsified_leading_eigvec_with_spectrum(a, &d, rho, seed, cfg)
}

/// As [`sparsified_leading_eigvec`] with precomputed spectral data of `a`.
pub fn sparsified_leading_eigvec_with_spectrum(
    a: &SymmetricMatrix,
    d: &SpectralData,
    rho: f64,
    seed: u64,
    cfg: &PowerConfig,
) -> Result<SparsePowerOutcome> {
    let s = noise::sparsify(a, rho, seed)?;
    let u1 = d.eigenvector(0).into_owned();
    let result = power_iteration_tracked(&s.a_tilde, cfg, &u1)?;
    let n = a.dim();
    let certificate = BoundStatus::from_result(sparsified_certificate(d, s.entry_bound, rho), |v| v)?;
    let r = bounds::halving_index_of(d.eigenvalues(), 1) as f64;
    let delta_1 = d.eigenvalue(0) - d.eigenvalue(1);
    Ok(SparsePowerOutcome {
        error: sign_aligned_error(&u1, &result.vector),
        result,
        certificate,
        certificate_failure_probability: (r * r / (n * n) as f64).min(1.0),
        dk_comparison: PI * 2.0 * s.entry_bound * (n as f64 / rho).sqrt() / delta_1,
        noise_norm: s.e.spectral_norm(),
        entry_bound: s.entry_bound,
        rho,
        rho_advisory: noise::rho_advisory(n, rho),
        nonzeros: s.a_tilde.nonzeros(),
    })
}

/// Power iteration on `A + E` for a given `E`; the certificate is the
/// moderate-gap bound evaluated with the realized `‖E‖`.
pub fn leading_eigvec_with_noise(
    a: &SymmetricMatrix,
    d: &SpectralData,
    e: &SymmetricMatrix,
    cfg: &PowerConfig,
) -> Result<SparsePowerOutcome> {
    let a_tilde = a.add(e)?;
    let u1 = d.eigenvector(0).into_owned();
    let result = power_iteration_tracked(&a_tilde, cfg, &u1)?;
    let noise_norm = e.spectral_norm();
    let certificate = BoundStatus::from_result(bounds::new_bound_with_norm(d, e, noise_norm, 1), |b| b.value)?;
    let delta_1 = d.eigenvalue(0) - d.eigenvalue(1);
    Ok(SparsePowerOutcome {
        error: sign_aligned_error(&u1, &result.vector),
        result,
        certificate,
        certificate_failure_probability: 0.0,
        dk_comparison: PI * noise_norm / delta_1,
        noise_norm,
        entry_bound: a.max_abs_entry(),
        rho: 1.0,
        rho_advisory: false,
        nonzeros: a_tilde.nonzeros(),
    })
}
