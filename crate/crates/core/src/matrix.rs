//! Dense matrix newtypes.
//!
//! [`SymmetricMatrix`] is the carrier for the ground matrix, its perturbation and
//! the noise. Every constructor guarantees bit-exact symmetry, so downstream code
//! may read either triangle.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense real symmetric matrix with exact `a[(i, j)] == a[(j, i)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    data: DMatrix<f64>,
    asymmetry: f64,
}

impl SymmetricMatrix {
    /// Relative asymmetry `‖M - Mᵀ‖_F / ‖M‖_F` above which input is rejected.
    pub const ASYMMETRY_TOLERANCE: f64 = 1e-6;

    /// Symmetrizes `m` as `(M + Mᵀ)/2`. Rejects non-square or empty input and
    /// input whose asymmetry exceeds [`Self::ASYMMETRY_TOLERANCE`] relative to `‖M‖_F`.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = m.shape();
        if rows != cols {
            return Err(Error::DimensionMismatch {
                expected: "square matrix".into(),
                found: format!("{rows}x{cols}"),
            });
        }
        if rows == 0 {
            return Err(Error::InvalidArgument("matrix dimension must be at least 1".into()));
        }
        if m.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
        }
        let transpose = m.transpose();
        let asymmetry = (&m - &transpose).norm();
        let limit = Self::ASYMMETRY_TOLERANCE * m.norm();
        if asymmetry > limit {
            return Err(Error::NotSymmetric { asymmetry, limit });
        }
        let data = (&m + &transpose) * 0.5;
        Ok(Self { data, asymmetry })
    }

    /// Builds a matrix from its upper triangle: `f(i, j)` is called for `i <= j` only.
    pub fn from_upper_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        assert!(n >= 1, "matrix dimension must be at least 1");
        let mut data = DMatrix::zeros(n, n);
        for j in 0..n {
            for i in 0..=j {
                let v = f(i, j);
                data[(i, j)] = v;
                data[(j, i)] = v;
            }
        }
        Self { data, asymmetry: 0.0 }
    }

    pub fn from_diagonal(diagonal: &[f64]) -> Self {
        Self::from_upper_fn(diagonal.len(), |i, j| if i == j { diagonal[i] } else { 0.0 })
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_upper_fn(n, |_, _| 0.0)
    }

    /// Wraps a matrix that the caller has built symmetric. Only the upper
    /// triangle is read.
    pub(crate) fn from_upper_of(m: &DMatrix<f64>) -> Self {
        Self::from_upper_fn(m.nrows(), |i, j| m[(i, j)])
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.data
    }

    /// `‖M - Mᵀ‖_F` of the input this matrix was symmetrized from.
    pub fn asymmetry(&self) -> f64 {
        self.asymmetry
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[(i, j)]
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.norm()
    }

    /// Largest absolute entry, `‖A‖_∞` in the entrywise sense.
    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }

    /// Number of nonzero entries.
    pub fn nonzeros(&self) -> usize {
        self.data.iter().filter(|v| **v != 0.0).count()
    }

    pub fn add(&self, other: &SymmetricMatrix) -> Result<SymmetricMatrix> {
        self.check_same_dim(other)?;
        Ok(Self {
            data: &self.data + &other.data,
            asymmetry: 0.0,
        })
    }

    pub fn sub(&self, other: &SymmetricMatrix) -> Result<SymmetricMatrix> {
        self.check_same_dim(other)?;
        Ok(Self {
            data: &self.data - &other.data,
            asymmetry: 0.0,
        })
    }

    pub fn scaled(&self, factor: f64) -> SymmetricMatrix {
        Self {
            data: &self.data * factor,
            asymmetry: 0.0,
        }
    }

    pub(crate) fn check_same_dim(&self, other: &SymmetricMatrix) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: format!("{0}x{0}", self.dim()),
                found: format!("{0}x{0}", other.dim()),
            });
        }
        Ok(())
    }
}

/// Dense complex square matrix; holds resolvent values.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    pub fn new(m: DMatrix<Complex64>) -> Self {
        Self(m)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetrizes_small_asymmetry() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0 + 1e-9, 3.0]);
        let s = SymmetricMatrix::new(m).unwrap();
        assert_eq!(s.get(0, 1), s.get(1, 0));
        assert!(s.asymmetry() > 0.0);
    }

    #[test]
    fn rejects_asymmetric_input() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 3.0]);
        assert!(matches!(SymmetricMatrix::new(m), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn rejects_non_square_and_empty() {
        assert!(SymmetricMatrix::new(DMatrix::zeros(2, 3)).is_err());
        assert!(SymmetricMatrix::new(DMatrix::zeros(0, 0)).is_err());
    }

    #[test]
    fn entry_bound_and_nonzeros() {
        let s = SymmetricMatrix::from_diagonal(&[1.0, -4.0, 0.0]);
        assert_eq!(s.max_abs_entry(), 4.0);
        assert_eq!(s.nonzeros(), 2);
    }
}
