//! Symmetric eigendecomposition, spectral projectors, norms and resolvents.

use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector, DVectorView, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, SymmetricMatrix};

/// Eigenvalue sweep budget per matrix dimension.
const SWEEPS_PER_DIM: usize = 300;

/// Eigenvalues in descending order with orthonormal eigenvectors as columns.
///
/// Each eigenvector has its first largest-magnitude coordinate made positive.
/// Exactly tied eigenvalues are ordered by comparing their eigenvectors
/// lexicographically, so the layout is a deterministic function of the input.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<f64>,
    source_norm: f64,
}

/// Makes the first coordinate of largest magnitude positive in every column.
fn flip_signs(vectors: &mut DMatrix<f64>) {
    for j in 0..vectors.ncols() {
        let mut col = vectors.column_mut(j);
        let (mut best, mut best_abs) = (0, -1.0);
        for (i, v) in col.iter().enumerate() {
            if v.abs() > best_abs {
                best = i;
                best_abs = v.abs();
            }
        }
        if col[best] < 0.0 {
            col.neg_mut();
        }
    }
}

impl SpectralData {
    /// Assembles spectral data from an unordered eigenpair list.
    pub(crate) fn from_unordered(values: Vec<f64>, mut vectors: DMatrix<f64>) -> Self {
        let n = values.len();
        assert_eq!(vectors.ncols(), n);
        flip_signs(&mut vectors);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            values[b].total_cmp(&values[a]).then_with(|| {
                let (ca, cb) = (vectors.column(a), vectors.column(b));
                ca.iter()
                    .zip(cb.iter())
                    .map(|(x, y)| y.total_cmp(x))
                    .find(|o| *o != Ordering::Equal)
                    .unwrap_or(Ordering::Equal)
            })
        });
        let eigenvalues: Vec<f64> = order.iter().map(|&i| values[i]).collect();
        let eigenvectors = DMatrix::from_fn(vectors.nrows(), n, |r, c| vectors[(r, order[c])]);
        Self::from_flipped(eigenvalues, eigenvectors)
    }

    /// Like [`Self::from_unordered`] but keeps the given order among equal
    /// eigenvalues; ties go to the earlier column.
    pub(crate) fn from_construction_order(values: Vec<f64>, vectors: DMatrix<f64>) -> Self {
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
        let eigenvalues: Vec<f64> = order.iter().map(|&i| values[i]).collect();
        let mut eigenvectors = DMatrix::from_fn(vectors.nrows(), values.len(), |r, c| vectors[(r, order[c])]);
        flip_signs(&mut eigenvectors);
        Self::from_flipped(eigenvalues, eigenvectors)
    }

    fn from_flipped(eigenvalues: Vec<f64>, eigenvectors: DMatrix<f64>) -> Self {
        let source_norm = eigenvalues.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
        Self {
            eigenvalues,
            eigenvectors,
            source_norm,
        }
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Eigenvalues, descending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Eigenvalue at 0-based position `i`.
    pub fn eigenvalue(&self, i: usize) -> f64 {
        self.eigenvalues[i]
    }

    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, i: usize) -> DVectorView<'_, f64> {
        self.eigenvectors.column(i)
    }

    /// `σ₁ = max |λ_i| = ‖A‖`.
    pub fn source_norm(&self) -> f64 {
        self.source_norm
    }

    /// Absolute eigenvalues sorted descending, i.e. the singular values.
    pub fn singular_values(&self) -> Vec<f64> {
        let mut s: Vec<f64> = self.eigenvalues.iter().map(|v| v.abs()).collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    /// `U diag(λ) Uᵀ`.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let u = &self.eigenvectors;
        let scaled = DMatrix::from_fn(u.nrows(), u.ncols(), |i, j| u[(i, j)] * self.eigenvalues[j]);
        scaled * u.transpose()
    }

    /// Expresses `m` in the eigenbasis: `Uᵀ M U`.
    pub fn to_eigenbasis(&self, m: &DMatrix<f64>) -> DMatrix<f64> {
        self.eigenvectors.transpose() * m * &self.eigenvectors
    }
}

/// Full symmetric eigendecomposition.
pub fn spectral_decompose(a: &SymmetricMatrix) -> Result<SpectralData> {
    let n = a.dim();
    let budget = SWEEPS_PER_DIM * n.max(4);
    let eig = SymmetricEigen::try_new(a.as_matrix().clone(), f64::EPSILON, budget)
        .ok_or(Error::NoConvergence { iterations: budget })?;
    Ok(SpectralData::from_unordered(
        eig.eigenvalues.iter().copied().collect(),
        eig.eigenvectors,
    ))
}

/// Eigenvalues only, descending. Cheaper than [`spectral_decompose`].
pub fn symmetric_eigenvalues(a: &SymmetricMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = a.as_matrix().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(|x, y| y.total_cmp(x));
    v
}

/// Orthogonal projector `Σ_{i∈S} u_i u_iᵀ` (0-based subset).
#[derive(Debug, Clone, PartialEq)]
pub struct Projector {
    matrix: DMatrix<f64>,
    subset: Vec<usize>,
}

impl Projector {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn rank(&self) -> usize {
        self.subset.len()
    }

    /// Projector from an explicit orthonormal column set.
    pub(crate) fn from_columns(columns: &DMatrix<f64>, subset: Vec<usize>) -> Self {
        let mut matrix = columns * columns.transpose();
        symmetrize_in_place(&mut matrix);
        Self { matrix, subset }
    }
}

fn symmetrize_in_place(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for j in 0..n {
        for i in 0..j {
            let v = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
}

/// Validates a 0-based index set against dimension `n`: nonempty, in range, no duplicates.
pub(crate) fn check_subset(subset: &[usize], n: usize) -> Result<Vec<usize>> {
    if subset.is_empty() {
        return Err(Error::InvalidArgument("index set must be nonempty".into()));
    }
    let mut s = subset.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.len() != subset.len() {
        return Err(Error::InvalidArgument("index set has duplicate entries".into()));
    }
    if let Some(&bad) = s.iter().find(|&&i| i >= n) {
        return Err(Error::InvalidArgument(format!(
            "index {bad} out of range for dimension {n}"
        )));
    }
    Ok(s)
}

pub fn projector(d: &SpectralData, subset: &[usize]) -> Result<Projector> {
    let s = check_subset(subset, d.dim())?;
    let cols = DMatrix::from_fn(d.dim(), s.len(), |r, c| d.eigenvectors[(r, s[c])]);
    Ok(Projector::from_columns(&cols, s))
}

/// Projector onto the leading `p` eigenvectors.
pub fn leading_projector(d: &SpectralData, p: usize) -> Result<Projector> {
    if p == 0 || p > d.dim() {
        return Err(Error::InvalidArgument(format!(
            "leading block size {p} out of range 1..={}",
            d.dim()
        )));
    }
    let subset: Vec<usize> = (0..p).collect();
    projector(d, &subset)
}

/// Indices of the `p` eigenvalues largest in absolute value; ties go to the lower index.
pub fn leading_singular_subset(d: &SpectralData, p: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..d.dim()).collect();
    idx.sort_by(|&a, &b| {
        d.eigenvalues[b]
            .abs()
            .total_cmp(&d.eigenvalues[a].abs())
            .then(a.cmp(&b))
    });
    let mut out: Vec<usize> = idx.into_iter().take(p).collect();
    out.sort_unstable();
    out
}

/// Largest singular value.
pub trait SpectralNorm {
    fn spectral_norm(&self) -> f64;
}

impl SpectralNorm for SymmetricMatrix {
    fn spectral_norm(&self) -> f64 {
        symmetric_abs_max(self.as_matrix())
    }
}

impl SpectralNorm for DMatrix<f64> {
    fn spectral_norm(&self) -> f64 {
        let (r, c) = self.shape();
        if r == 0 || c == 0 {
            return 0.0;
        }
        let gram = if r <= c {
            self * self.transpose()
        } else {
            self.transpose() * self
        };
        symmetric_abs_max(&gram).max(0.0).sqrt()
    }
}

impl SpectralNorm for DMatrix<Complex64> {
    /// `sqrt(λ_max(MᴴM))` through the Hermitian eigenvalue engine.
    fn spectral_norm(&self) -> f64 {
        let (r, c) = self.shape();
        if r == 0 || c == 0 {
            return 0.0;
        }
        let gram = self.adjoint() * self;
        let top = gram
            .symmetric_eigenvalues()
            .iter()
            .fold(0.0_f64, |acc, v| acc.max(*v));
        top.sqrt()
    }
}

impl SpectralNorm for ComplexMatrix {
    fn spectral_norm(&self) -> f64 {
        self.as_matrix().spectral_norm()
    }
}

impl SpectralNorm for Projector {
    fn spectral_norm(&self) -> f64 {
        symmetric_abs_max(&self.matrix)
    }
}

pub fn spectral_norm<M: SpectralNorm + ?Sized>(m: &M) -> f64 {
    m.spectral_norm()
}

/// `max |λ_i|` of a symmetric matrix (only the lower triangle is read).
pub(crate) fn symmetric_abs_max(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    m.symmetric_eigenvalues()
        .iter()
        .fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// `‖P − Q‖`, the sine of the largest principal angle for equal-rank projectors.
pub fn sine_distance(p: &Projector, q: &Projector) -> Result<f64> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: format!("{0}x{0}", p.dim()),
            found: format!("{0}x{0}", q.dim()),
        });
    }
    // Fixed operand order keeps the result exactly symmetric in its arguments.
    let (a, b) = if lex_le(&p.matrix, &q.matrix) {
        (&p.matrix, &q.matrix)
    } else {
        (&q.matrix, &p.matrix)
    };
    Ok(symmetric_abs_max(&(a - b)))
}

fn lex_le(a: &DMatrix<f64>, b: &DMatrix<f64>) -> bool {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.total_cmp(y) {
            Ordering::Less => return true,
            Ordering::Greater => return false,
            Ordering::Equal => {}
        }
    }
    true
}

/// Relative distance from the spectrum below which a resolvent is refused.
pub const RESOLVENT_SINGULARITY: f64 = 1e-12;

/// Distance from `z` to the nearest eigenvalue, with that eigenvalue.
pub fn distance_to_spectrum(eigenvalues: &[f64], z: Complex64) -> (f64, f64) {
    eigenvalues
        .iter()
        .map(|&l| ((z - l).norm(), l))
        .fold((f64::INFINITY, f64::NAN), |acc, x| if x.0 < acc.0 { x } else { acc })
}

/// `(zI − A)⁻¹ = Σ u_i u_iᵀ / (z − λ_i)`.
pub fn resolvent(d: &SpectralData, z: Complex64) -> Result<ComplexMatrix> {
    let (dist, eigenvalue) = distance_to_spectrum(&d.eigenvalues, z);
    if dist <= RESOLVENT_SINGULARITY * d.source_norm {
        return Err(Error::NearSpectrum {
            re: z.re,
            im: z.im,
            eigenvalue,
            distance: dist,
        });
    }
    let weights: Vec<Complex64> = d.eigenvalues.iter().map(|&l| (z - l).inv()).collect();
    Ok(ComplexMatrix::new(eigen_synthesis(&d.eigenvectors, &weights)))
}

/// `U diag(w) Uᵀ` for real `U` and complex `w`.
pub(crate) fn eigen_synthesis(u: &DMatrix<f64>, w: &[Complex64]) -> DMatrix<Complex64> {
    let (re, im) = split_weighted(u, w);
    let ut = u.transpose();
    let real = re * &ut;
    let imag = im * &ut;
    DMatrix::from_fn(u.nrows(), u.nrows(), |i, j| {
        Complex64::new(real[(i, j)], imag[(i, j)])
    })
}

fn split_weighted(u: &DMatrix<f64>, w: &[Complex64]) -> (DMatrix<f64>, DMatrix<f64>) {
    let re = DMatrix::from_fn(u.nrows(), u.ncols(), |i, j| u[(i, j)] * w[j].re);
    let im = DMatrix::from_fn(u.nrows(), u.ncols(), |i, j| u[(i, j)] * w[j].im);
    (re, im)
}

/// `[[0, A], [Aᵀ, 0]]`, of size `m + n`.
pub fn symmetric_dilation(a: &DMatrix<f64>) -> Result<SymmetricMatrix> {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument("dilation needs a nonempty matrix".into()));
    }
    Ok(SymmetricMatrix::from_upper_fn(m + n, |i, j| {
        if i < m && j >= m {
            a[(i, j - m)]
        } else {
            0.0
        }
    }))
}

/// Left and right leading-`p` singular projectors of an `m x n` matrix, read off
/// the positive eigenvectors `(u_i, v_i)/√2` of its symmetric dilation.
pub fn singular_projectors_via_dilation(
    a: &DMatrix<f64>,
    p: usize,
) -> Result<(Projector, Projector)> {
    let (m, n) = a.shape();
    if p == 0 || p > m.min(n) {
        return Err(Error::InvalidArgument(format!(
            "singular block size {p} out of range 1..={}",
            m.min(n)
        )));
    }
    let d = spectral_decompose(&symmetric_dilation(a)?)?;
    if d.eigenvalue(p - 1) <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "singular value {p} is zero; leading singular space undefined"
        )));
    }
    let mut left = DMatrix::zeros(m, p);
    let mut right = DMatrix::zeros(n, p);
    for k in 0..p {
        let w = d.eigenvector(k);
        let top = DVector::from_fn(m, |i, _| w[i]);
        let bottom = DVector::from_fn(n, |i, _| w[m + i]);
        left.set_column(k, &(top.normalize()));
        right.set_column(k, &(bottom.normalize()));
    }
    let subset: Vec<usize> = (0..p).collect();
    Ok((
        Projector::from_columns(&left, subset.clone()),
        Projector::from_columns(&right, subset),
    ))
}

/// Thin singular triplets sorted descending: `(σ, U, V)` with `A = U diag(σ) Vᵀ`.
pub(crate) fn singular_triplets(a: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>, DMatrix<f64>)> {
    let budget = SWEEPS_PER_DIM * a.nrows().max(a.ncols()).max(4);
    let svd = nalgebra::SVD::try_new(a.clone(), true, true, f64::EPSILON, budget)
        .ok_or(Error::NoConvergence { iterations: budget })?;
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V");
    let sigma: Vec<f64> = svd.singular_values.iter().copied().collect();
    let mut order: Vec<usize> = (0..sigma.len()).collect();
    order.sort_by(|&x, &y| sigma[y].total_cmp(&sigma[x]).then(x.cmp(&y)));
    let sorted: Vec<f64> = order.iter().map(|&i| sigma[i]).collect();
    let u_sorted = DMatrix::from_fn(u.nrows(), order.len(), |r, c| u[(r, order[c])]);
    let v_sorted = DMatrix::from_fn(v_t.ncols(), order.len(), |r, c| v_t[(order[c], r)]);
    Ok((sorted, u_sorted, v_sorted))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn sym(rows: usize, data: &[f64]) -> SymmetricMatrix {
        SymmetricMatrix::new(DMatrix::from_row_slice(rows, rows, data)).unwrap()
    }

    fn seeded_symmetric(n: usize, seed: u64) -> SymmetricMatrix {
        // small LCG keeps these unit tests independent of the noise module
        let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        SymmetricMatrix::from_upper_fn(n, |_, _| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        })
    }

    #[test]
    fn diagonal_decomposition() {
        let d = spectral_decompose(&SymmetricMatrix::from_diagonal(&[1.0, 3.0])).unwrap();
        assert_eq!(d.eigenvalues(), &[3.0, 1.0]);
        assert_abs_diff_eq!(d.eigenvector(0)[0], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.eigenvector(0)[1], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.eigenvector(1)[0], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn swap_matrix_decomposition() {
        let d = spectral_decompose(&sym(2, &[0.0, 1.0, 1.0, 0.0])).unwrap();
        assert_abs_diff_eq!(d.eigenvalue(0), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(d.eigenvalue(1), -1.0, epsilon = 1e-14);
        let u0 = d.eigenvector(0);
        assert_abs_diff_eq!(u0[0], FRAC_1_SQRT_2, epsilon = 1e-14);
        assert_abs_diff_eq!(u0[1], FRAC_1_SQRT_2, epsilon = 1e-14);
        let u1 = d.eigenvector(1);
        assert_abs_diff_eq!(u1[0].abs(), FRAC_1_SQRT_2, epsilon = 1e-14);
        assert_abs_diff_eq!(u1[0], -u1[1], epsilon = 1e-14);
    }

    #[test]
    fn seeded_reconstruction_and_orthonormality() {
        let a = seeded_symmetric(5, 7);
        let d = spectral_decompose(&a).unwrap();
        let resid = (a.as_matrix() - d.reconstruct()).norm();
        assert!(resid <= 1e-8 * a.frobenius_norm().max(1.0), "residual {resid}");
        let u = d.eigenvectors();
        let ortho = (u.transpose() * u - DMatrix::identity(5, 5)).norm();
        assert!(ortho <= 1e-10 * 5.0);
        assert!(d.eigenvalues().windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn decomposition_is_deterministic_with_ties() {
        let a = SymmetricMatrix::from_diagonal(&[2.0, 2.0, 1.0, 2.0]);
        let d1 = spectral_decompose(&a).unwrap();
        let d2 = spectral_decompose(&a.clone()).unwrap();
        assert_eq!(d1, d2);
        let p = leading_projector(&d1, 3).unwrap();
        let expect = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1.0, 0.0, 1.0]));
        assert!((p.matrix() - expect).norm() < 1e-12);
    }

    #[test]
    fn projector_examples() {
        let d = spectral_decompose(&SymmetricMatrix::from_diagonal(&[2.0, 1.0])).unwrap();
        let p = projector(&d, &[0]).unwrap();
        assert!((p.matrix() - DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0])).norm() < 1e-15);
        let full = projector(&d, &[0, 1]).unwrap();
        assert!((full.matrix() - DMatrix::<f64>::identity(2, 2)).norm() < 1e-15);

        let d4 = spectral_decompose(&seeded_symmetric(4, 3)).unwrap();
        let p = projector(&d4, &[0, 1]).unwrap();
        let m = p.matrix();
        assert!((m * m - m).norm() <= 1e-9 * 4.0);
        assert_abs_diff_eq!(m.trace(), 2.0, epsilon = 1e-8);
        assert!((m - m.transpose()).amax() <= 1e-12);
    }

    #[test]
    fn projector_rejects_bad_subsets() {
        let d = spectral_decompose(&SymmetricMatrix::from_diagonal(&[2.0, 1.0])).unwrap();
        assert!(projector(&d, &[]).is_err());
        assert!(projector(&d, &[2]).is_err());
        assert!(projector(&d, &[0, 0]).is_err());
    }

    #[test]
    fn spectral_norm_examples() {
        assert_abs_diff_eq!(SymmetricMatrix::from_diagonal(&[3.0, -5.0]).spectral_norm(), 5.0, epsilon = 1e-14);
        assert_eq!(DMatrix::<f64>::zeros(3, 3).spectral_norm(), 0.0);
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 2.0, 0.0, 0.0]);
        assert_abs_diff_eq!(m.spectral_norm(), 2.0, epsilon = 1e-14);
        let c = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.0, 3.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(-1.0, 1.0),
            ],
        );
        assert_abs_diff_eq!(c.spectral_norm(), 3.0, epsilon = 1e-14);
    }

    #[test]
    fn sine_distance_examples() {
        let d = spectral_decompose(&SymmetricMatrix::from_diagonal(&[2.0, 1.0])).unwrap();
        let p = projector(&d, &[0]).unwrap();
        let q = projector(&d, &[1]).unwrap();
        assert_eq!(sine_distance(&p, &p).unwrap(), 0.0);
        assert_abs_diff_eq!(sine_distance(&p, &q).unwrap(), 1.0, epsilon = 1e-15);

        let theta = PI / 6.0;
        let (c, s) = (theta.cos(), theta.sin());
        let rot = Projector::from_columns(&DMatrix::from_column_slice(2, 1, &[c, s]), vec![0]);
        assert_abs_diff_eq!(sine_distance(&p, &rot).unwrap(), 0.5, epsilon = 1e-14);
        assert_eq!(sine_distance(&p, &rot).unwrap(), sine_distance(&rot, &p).unwrap());
    }

    #[test]
    fn sine_distance_dimension_mismatch() {
        let d2 = spectral_decompose(&SymmetricMatrix::from_diagonal(&[2.0, 1.0])).unwrap();
        let d3 = spectral_decompose(&SymmetricMatrix::from_diagonal(&[3.0, 2.0, 1.0])).unwrap();
        let p = projector(&d2, &[0]).unwrap();
        let q = projector(&d3, &[0]).unwrap();
        assert!(sine_distance(&p, &q).is_err());
    }

    #[test]
    fn resolvent_examples() {
        let d = spectral_decompose(&SymmetricMatrix::from_diagonal(&[1.0])).unwrap();
        let r = resolvent(&d, Complex64::new(2.0, 0.0)).unwrap();
        assert_abs_diff_eq!(r.get(0, 0).re, 1.0, epsilon = 1e-15);

        let d = spectral_decompose(&SymmetricMatrix::from_diagonal(&[1.0, -1.0])).unwrap();
        let i = Complex64::i();
        let r = resolvent(&d, i).unwrap();
        assert!((r.get(0, 0) - (i - 1.0).inv()).norm() < 1e-15);
        assert!((r.get(1, 1) - (i + 1.0).inv()).norm() < 1e-15);
        assert!(r.get(0, 1).norm() < 1e-15);
    }

    #[test]
    fn resolvent_residual_and_singularity() {
        let a = seeded_symmetric(6, 11);
        let d = spectral_decompose(&a).unwrap();
        let z = Complex64::new(0.3, 0.7);
        let r = resolvent(&d, z).unwrap();
        let shifted = DMatrix::from_fn(6, 6, |i, j| {
            let diag = if i == j { z } else { Complex64::new(0.0, 0.0) };
            diag - a.get(i, j)
        });
        let resid = (shifted * r.as_matrix() - DMatrix::<Complex64>::identity(6, 6)).norm();
        assert!(resid <= 1e-8, "residual {resid}");
        let err = resolvent(&d, Complex64::new(d.eigenvalue(2), 0.0)).unwrap_err();
        assert!(matches!(err, Error::NearSpectrum { .. }));
    }

    #[test]
    fn dilation_examples() {
        let a = DMatrix::from_row_slice(1, 1, &[1.0]);
        let dil = symmetric_dilation(&a).unwrap();
        assert_eq!(dil.as_matrix(), &DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]));
        let z = symmetric_dilation(&DMatrix::zeros(2, 3)).unwrap();
        assert_eq!(z.dim(), 5);
        assert_eq!(z.max_abs_entry(), 0.0);
    }

    #[test]
    fn dilation_spectrum_matches_singular_values() {
        let a = DMatrix::from_row_slice(3, 2, &[0.3, -1.2, 2.0, 0.5, -0.7, 0.9]);
        let (sigma, _, _) = singular_triplets(&a).unwrap();
        let ev = symmetric_eigenvalues(&symmetric_dilation(&a).unwrap());
        let expect = [sigma[0], sigma[1], 0.0, -sigma[1], -sigma[0]];
        for (e, x) in ev.iter().zip(expect.iter()) {
            assert_abs_diff_eq!(*e, *x, epsilon = 1e-8);
        }
    }

    #[test]
    fn dilation_projectors_match_svd() {
        let a = DMatrix::from_row_slice(4, 3, &[3.0, 0.1, 0.2, -0.4, 2.0, 0.3, 0.5, 0.2, 1.0, 0.1, -0.3, 0.4]);
        let (_, u, v) = singular_triplets(&a).unwrap();
        let (left, right) = singular_projectors_via_dilation(&a, 2).unwrap();
        let u2 = u.columns(0, 2).into_owned();
        let v2 = v.columns(0, 2).into_owned();
        assert!((left.matrix() - &u2 * u2.transpose()).norm() < 1e-10);
        assert!((right.matrix() - &v2 * v2.transpose()).norm() < 1e-10);
    }
}
