//! Seeded instance generators: Wigner noise, random sparsification and
//! low-rank ground truths with prescribed spectra.
//!
//! Every random entry is drawn from its own ChaCha8 stream keyed by
//! `(seed, domain)` and indexed by the entry position, so results do not
//! depend on fill order or thread count.

use std::path::PathBuf;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matrix::SymmetricMatrix;
use crate::spectral::SpectralData;

const DOMAIN_WIGNER: u64 = 0x7769_676e_6572;
const DOMAIN_SPARSIFY: u64 = 0x7370_6172_7365;
const DOMAIN_BASIS: u64 = 0x0062_6173_6973;
const DOMAIN_BASIS_RIGHT: u64 = 0x6261_7369_7352;
const DOMAIN_GAUSSIAN: u64 = 0x0067_6175_7373;
const DOMAIN_SPHERE: u64 = 0x7370_6865_7265;

/// Generator for entry `index` under `(seed, domain)`.
pub fn entry_rng(seed: u64, domain: u64, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&domain.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}

/// Column-wise index of the upper-triangle pair `(i, j)`, `i <= j`.
fn pair_index(i: usize, j: usize) -> u64 {
    (j * (j + 1) / 2 + i) as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubGaussian {
    Gaussian,
    Rademacher,
}

impl SubGaussian {
    fn draw(self, rng: &mut ChaCha8Rng) -> f64 {
        match self {
            SubGaussian::Gaussian => rng.sample(StandardNormal),
            SubGaussian::Rademacher => {
                if rng.random_bool(0.5) {
                    1.0
                } else {
                    -1.0
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NoiseKind {
    Wigner(SubGaussian),
    Sparsify { rho: f64 },
    CustomFile(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    pub n: usize,
    pub seed: u64,
}

impl NoiseSpec {
    /// Produces `E` for the ground matrix `a`.
    pub fn generate(&self, a: &SymmetricMatrix) -> Result<SymmetricMatrix> {
        if a.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n.to_string(),
                found: a.dim().to_string(),
            });
        }
        match &self.kind {
            NoiseKind::Wigner(_) => wigner(self),
            NoiseKind::Sparsify { rho } => Ok(sparsify(a, *rho, self.seed)?.e),
            NoiseKind::CustomFile(path) => {
                let e = crate::io::read_symmetric(path)?;
                if e.dim() != self.n {
                    return Err(Error::DimensionMismatch {
                        expected: format!("{0}x{0}", self.n),
                        found: format!("{0}x{0}", e.dim()),
                    });
                }
                Ok(e)
            }
        }
    }
}

/// Symmetric matrix with i.i.d. mean-0 variance-1 upper-triangle entries.
pub fn wigner(spec: &NoiseSpec) -> Result<SymmetricMatrix> {
    match spec.kind {
        NoiseKind::Wigner(law) => {
            if spec.n == 0 {
                return Err(Error::InvalidArgument("dimension must be at least 1".into()));
            }
            Ok(wigner_matrix(spec.n, law, spec.seed))
        }
        _ => Err(Error::InvalidArgument("noise spec is not of Wigner kind".into())),
    }
}

pub fn wigner_matrix(n: usize, law: SubGaussian, seed: u64) -> SymmetricMatrix {
    SymmetricMatrix::from_upper_fn(n, |i, j| law.draw(&mut entry_rng(seed, DOMAIN_WIGNER, pair_index(i, j))))
}

/// Result of random sparsification `Ã = ρ⁻¹A'`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sparsified {
    pub a_tilde: SymmetricMatrix,
    /// `Ã − A`.
    pub e: SymmetricMatrix,
    pub rho: f64,
    /// `‖A‖_∞`.
    pub entry_bound: f64,
    /// Kept upper-triangle positions, diagonal included.
    pub kept_pairs: usize,
}

/// Keeps each symmetric pair (and each diagonal entry) with probability `rho`,
/// scaling kept entries by `1/rho`.
pub fn sparsify(a: &SymmetricMatrix, rho: f64, seed: u64) -> Result<Sparsified> {
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::InvalidArgument(format!("rho must lie in (0, 1], got {rho}")));
    }
    let mut kept_pairs = 0;
    let a_tilde = SymmetricMatrix::from_upper_fn(a.dim(), |i, j| {
        let u: f64 = entry_rng(seed, DOMAIN_SPARSIFY, pair_index(i, j)).random();
        if u < rho {
            kept_pairs += 1;
            a.get(i, j) / rho
        } else {
            0.0
        }
    });
    let e = a_tilde.sub(a)?;
    Ok(Sparsified {
        a_tilde,
        e,
        rho,
        entry_bound: a.max_abs_entry(),
        kept_pairs,
    })
}

/// True when `ρn / log⁴n < 1`, i.e. the density is below the advisory threshold.
pub fn rho_advisory(n: usize, rho: f64) -> bool {
    let l = (n as f64).ln();
    rho * (n as f64) < l.powi(4)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundSpec {
    pub n: usize,
    pub rank: usize,
    /// Prescribed nonzero eigenvalues.
    pub spectrum: Vec<f64>,
    pub seed: u64,
}

/// Orthonormal factor of a seeded `rows x rows` Gaussian matrix.
fn random_orthogonal(rows: usize, seed: u64, domain: u64) -> DMatrix<f64> {
    let g = DMatrix::from_fn(rows, rows, |i, j| {
        entry_rng(seed, domain, (j * rows + i) as u64).sample::<f64, _>(StandardNormal)
    });
    g.qr().q()
}

/// `A = Σ s_i q_i q_iᵀ` with `Q` from a seeded Gaussian matrix, together with
/// its exact spectral data.
pub fn low_rank_ground(spec: &GroundSpec) -> Result<(SymmetricMatrix, SpectralData)> {
    let GroundSpec { n, rank, ref spectrum, seed } = *spec;
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    if rank > n {
        return Err(Error::InvalidArgument(format!("rank {rank} exceeds dimension {n}")));
    }
    if spectrum.len() != rank {
        return Err(Error::InvalidArgument(format!(
            "spectrum has {} entries but rank is {rank}",
            spectrum.len()
        )));
    }
    if spectrum.iter().any(|s| *s == 0.0 || !s.is_finite()) {
        return Err(Error::InvalidArgument("prescribed eigenvalues must be finite and nonzero".into()));
    }
    let q = random_orthogonal(n, seed, DOMAIN_BASIS);
    let qr = q.columns(0, rank);
    let scaled = DMatrix::from_fn(n, rank, |i, k| qr[(i, k)] * spectrum[k]);
    let a = SymmetricMatrix::from_upper_of(&(scaled * qr.transpose()));
    let mut values = spectrum.clone();
    values.resize(n, 0.0);
    let d = SpectralData::from_construction_order(values, q);
    Ok((a, d))
}

/// `m x n` matrix `Σ σ_i u_i v_iᵀ` with seeded orthonormal `U` and `V`.
pub fn rectangular_ground(m: usize, n: usize, singular_values: &[f64], seed: u64) -> Result<DMatrix<f64>> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument("dimensions must be at least 1".into()));
    }
    let k = singular_values.len();
    if k > m.min(n) {
        return Err(Error::InvalidArgument(format!("{k} singular values exceed min({m}, {n})")));
    }
    if singular_values.iter().any(|s| *s < 0.0 || !s.is_finite()) {
        return Err(Error::InvalidArgument("singular values must be finite and nonnegative".into()));
    }
    let u = random_orthogonal(m, seed, DOMAIN_BASIS);
    let v = random_orthogonal(n, seed, DOMAIN_BASIS_RIGHT);
    let us = DMatrix::from_fn(m, k, |i, c| u[(i, c)] * singular_values[c]);
    Ok(us * v.columns(0, k).transpose())
}

/// `m x n` matrix of i.i.d. `N(0, 1)` entries.
pub fn gaussian_matrix(m: usize, n: usize, seed: u64) -> DMatrix<f64> {
    DMatrix::from_fn(m, n, |i, j| {
        entry_rng(seed, DOMAIN_GAUSSIAN, (j * m + i) as u64).sample::<f64, _>(StandardNormal)
    })
}

/// Uniform draw from the unit sphere in `R^n`.
pub fn unit_sphere_vector(n: usize, seed: u64) -> DVector<f64> {
    let mut rng = entry_rng(seed, DOMAIN_SPHERE, 0);
    let v = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let norm = v.norm();
    if norm > 0.0 {
        v / norm
    } else {
        DVector::from_fn(n, |i, _| if i == 0 { 1.0 } else { 0.0 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::spectral_decompose;

    #[test]
    fn wigner_is_deterministic_and_symmetric() {
        let spec = NoiseSpec {
            kind: NoiseKind::Wigner(SubGaussian::Gaussian),
            n: 7,
            seed: 42,
        };
        let a = wigner(&spec).unwrap();
        let b = wigner(&spec).unwrap();
        assert_eq!(a, b);
        for i in 0..7 {
            for j in 0..7 {
                assert_eq!(a.get(i, j), a.get(j, i));
            }
        }
        let one = wigner_matrix(1, SubGaussian::Gaussian, 3);
        assert_eq!(one.dim(), 1);
    }

    #[test]
    fn wigner_entries_do_not_depend_on_dimension() {
        let small = wigner_matrix(4, SubGaussian::Rademacher, 9);
        let large = wigner_matrix(9, SubGaussian::Rademacher, 9);
        for j in 0..4 {
            for i in 0..=j {
                assert_eq!(small.get(i, j), large.get(i, j));
                assert_eq!(small.get(i, j).abs(), 1.0);
            }
        }
    }

    #[test]
    fn sparsify_identity_and_support() {
        let a = SymmetricMatrix::from_upper_fn(6, |i, j| (i as f64) - 0.7 * j as f64 + 0.1);
        let s = sparsify(&a, 1.0, 5).unwrap();
        assert_eq!(s.a_tilde, a);
        assert_eq!(s.e.max_abs_entry(), 0.0);

        let s = sparsify(&a, 0.3, 5).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                let v = s.a_tilde.get(i, j);
                assert!(v == 0.0 || v == a.get(i, j) / 0.3);
            }
        }
        assert!(sparsify(&a, 0.0, 1).is_err());
        assert!(sparsify(&a, 1.5, 1).is_err());
    }

    #[test]
    fn single_entry_sparsification_mean() {
        let a = SymmetricMatrix::from_diagonal(&[3.0]);
        let trials = 10_000;
        let mut sum = 0.0;
        for seed in 0..trials {
            let v = sparsify(&a, 0.5, seed).unwrap().a_tilde.get(0, 0);
            assert!(v == 0.0 || v == 6.0);
            sum += v;
        }
        let mean = sum / trials as f64;
        // Standard deviation of one draw is 3.
        assert!((mean - 3.0).abs() <= 3.0 * 3.0 / (trials as f64).sqrt());
    }

    #[test]
    fn advisory_threshold() {
        assert!(rho_advisory(500, 0.5));
        assert!(!rho_advisory(100_000_000, 0.5));
    }

    #[test]
    fn low_rank_examples() {
        let (a, d) = low_rank_ground(&GroundSpec {
            n: 3,
            rank: 1,
            spectrum: vec![5.0],
            seed: 1,
        })
        .unwrap();
        let eig = spectral_decompose(&a).unwrap();
        assert!((eig.eigenvalue(0) - 5.0).abs() < 1e-12);
        assert!(eig.eigenvalue(1).abs() < 1e-12 && eig.eigenvalue(2).abs() < 1e-12);
        assert_eq!(d.eigenvalues(), &[5.0, 0.0, 0.0]);

        let (_, d) = low_rank_ground(&GroundSpec {
            n: 4,
            rank: 2,
            spectrum: vec![3.0, -7.0],
            seed: 2,
        })
        .unwrap();
        assert_eq!(d.eigenvalues(), &[3.0, 0.0, 0.0, -7.0]);
        assert!(low_rank_ground(&GroundSpec {
            n: 2,
            rank: 3,
            spectrum: vec![1.0, 1.0, 1.0],
            seed: 0
        })
        .is_err());
    }

    #[test]
    fn rectangular_ground_has_prescribed_singular_values() {
        let a = rectangular_ground(5, 3, &[4.0, 2.0, 1.0], 8).unwrap();
        let mut sv: Vec<f64> = a.singular_values().iter().copied().collect();
        sv.sort_by(|x, y| y.total_cmp(x));
        for (got, want) in sv.iter().zip([4.0, 2.0, 1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn sphere_vector_is_unit() {
        let v = unit_sphere_vector(10, 4);
        assert!((v.norm() - 1.0).abs() < 1e-15);
        assert_eq!(v, unit_sphere_vector(10, 4));
    }
}
