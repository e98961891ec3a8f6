//! Gap statistics and the analytic eigenspace perturbation bounds.
//!
//! Index conventions: index sets are 0-based, while `p` always counts a
//! leading block, so `p = 1` is the top eigenvector. A bound whose
//! preconditions fail returns [`Error::Precondition`] carrying the name of the
//! violated inequality and its (negative) slack.

use std::f64::consts::{PI, SQRT_2};

use nalgebra::DMatrix;

use crate::error::{require_le, Error, PreconditionFailure, Result};
use crate::matrix::SymmetricMatrix;
use crate::spectral::{self, check_subset, SpectralData, SpectralNorm};

/// Gap statistics of a spectrum relative to a target set.
#[derive(Debug, Clone, PartialEq)]
pub struct GapProfile {
    /// Size of the leading block.
    pub p: usize,
    /// `λ_p − λ_{p+1}`.
    pub delta_p: f64,
    /// `min_{i∈S, j∉S} |λ_i − λ_j|`.
    pub delta_s: f64,
    pub halving_index: usize,
    pub sigma_1: f64,
    pub lambda_p: f64,
}

/// `δ_S` for a 0-based index set, by exhaustive pair scan.
pub fn subset_gap(eigenvalues: &[f64], subset: &[usize]) -> f64 {
    let mut inside = vec![false; eigenvalues.len()];
    for &i in subset {
        inside[i] = true;
    }
    let mut gap = f64::INFINITY;
    for (_, li) in eigenvalues.iter().enumerate().filter(|(i, _)| inside[*i]) {
        for (_, lj) in eigenvalues.iter().enumerate().filter(|(j, _)| !inside[*j]) {
            gap = gap.min((li - lj).abs());
        }
    }
    gap
}

/// Gap profile for `subset`; `p` is taken as `|S|`, so for `S = {0..p}` the
/// leading-block gap and `δ_S` coincide.
pub fn gap_profile(d: &SpectralData, subset: &[usize]) -> Result<GapProfile> {
    let n = d.dim();
    let s = check_subset(subset, n)?;
    if s.len() == n {
        return Err(Error::InvalidArgument("index set must be a proper subset".into()));
    }
    let p = s.len();
    let eig = d.eigenvalues();
    Ok(GapProfile {
        p,
        delta_p: eig[p - 1] - eig[p],
        delta_s: subset_gap(eig, &s),
        halving_index: halving_index_of(eig, p),
        sigma_1: d.source_norm(),
        lambda_p: eig[p - 1],
    })
}

/// Smallest `r ≥ p` with `|λ_p|/2 ≤ |λ_p − λ_{r+1}|`, taking `λ_{n+1} = 0`.
pub fn halving_index(d: &SpectralData, p: usize) -> usize {
    halving_index_of(d.eigenvalues(), p)
}

/// [`halving_index`] on a bare descending spectrum.
pub fn halving_index_of(eigenvalues: &[f64], p: usize) -> usize {
    let n = eigenvalues.len();
    assert!(p >= 1 && p <= n, "p = {p} out of range 1..={n}");
    let lp = eigenvalues[p - 1];
    (p..n)
        .find(|&r| lp.abs() / 2.0 <= (lp - eigenvalues[r]).abs())
        .unwrap_or(n)
}

/// `max_{i,j<r} |u_iᵀ E u_j|`.
pub fn cross_term_x(d: &SpectralData, e: &SymmetricMatrix, r: usize) -> Result<f64> {
    if e.dim() != d.dim() {
        return Err(Error::DimensionMismatch {
            expected: format!("{0}x{0}", d.dim()),
            found: format!("{0}x{0}", e.dim()),
        });
    }
    if r == 0 || r > d.dim() {
        return Err(Error::InvalidArgument(format!("r = {r} out of range 1..={}", d.dim())));
    }
    let u = d.eigenvectors().columns(0, r);
    let projected = u.transpose() * e.as_matrix() * u;
    Ok(projected.amax())
}

/// `max |u_iᵀ E u_j|` over the given 0-based index range, applied to both sides.
fn block_cross_term(d: &SpectralData, e: &SymmetricMatrix, start: usize, end: usize) -> f64 {
    let u = d.eigenvectors().columns(start, end - start);
    (u.transpose() * e.as_matrix() * u).amax()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DavisKahanVariant {
    /// `π‖E‖/(2δ)` with `δ = dist(Λ_S, Λ̃_{S^c})`.
    General,
    /// `π‖E‖/δ_S`, requiring `δ_S ≥ 2‖E‖`.
    Corollary,
}

pub fn davis_kahan_bound(noise_norm: f64, delta: f64, variant: DavisKahanVariant) -> Result<f64> {
    if delta <= 0.0 {
        return Err(PreconditionFailure::new("delta > 0", delta).into());
    }
    match variant {
        DavisKahanVariant::General => Ok(PI * noise_norm / (2.0 * delta)),
        DavisKahanVariant::Corollary => {
            require_le("2||E|| <= delta_S (Weyl slack)", 2.0 * noise_norm, delta)?;
            Ok(PI * noise_norm / delta)
        }
    }
}

/// `24 (‖E‖/|λ_p| · log(6σ₁/δ_p) + r² x / δ_p)`, evaluated without precondition checks.
pub fn theorem_bound_value(
    noise_norm: f64,
    lambda_p: f64,
    sigma_1: f64,
    delta_p: f64,
    r: usize,
    x: f64,
) -> f64 {
    let r2 = (r * r) as f64;
    24.0 * (noise_norm / lambda_p.abs() * (6.0 * sigma_1 / delta_p).ln() + r2 * x / delta_p)
}

/// Checks the moderate-gap window `4‖E‖ ≤ δ_p ≤ |λ_p|/4`.
pub fn check_moderate_gap(
    noise_norm: f64,
    delta_p: f64,
    lambda_p: f64,
) -> std::result::Result<(), PreconditionFailure> {
    if delta_p <= 0.0 {
        return Err(PreconditionFailure::new("delta_p > 0", delta_p));
    }
    require_le("4||E|| <= delta_p", 4.0 * noise_norm, delta_p)?;
    require_le("delta_p <= |lambda_p|/4", delta_p, lambda_p.abs() / 4.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewBound {
    pub value: f64,
    pub profile: GapProfile,
    pub x: f64,
    pub noise_norm: f64,
}

/// Moderate-gap bound on `‖Π̃_p − Π_p‖` for the leading `p` eigenvectors.
pub fn new_bound(d: &SpectralData, e: &SymmetricMatrix, p: usize) -> Result<NewBound> {
    new_bound_with_norm(d, e, e.spectral_norm(), p)
}

/// [`new_bound`] with a precomputed `‖E‖`.
pub fn new_bound_with_norm(
    d: &SpectralData,
    e: &SymmetricMatrix,
    noise_norm: f64,
    p: usize,
) -> Result<NewBound> {
    check_leading_block(d, p)?;
    let subset: Vec<usize> = (0..p).collect();
    let profile = gap_profile(d, &subset)?;
    check_moderate_gap(noise_norm, profile.delta_p, profile.lambda_p)?;
    let x = cross_term_x(d, e, profile.halving_index)?;
    let value = theorem_bound_value(
        noise_norm,
        profile.lambda_p,
        profile.sigma_1,
        profile.delta_p,
        profile.halving_index,
        x,
    );
    Ok(NewBound {
        value,
        profile,
        x,
        noise_norm,
    })
}

fn check_leading_block(d: &SpectralData, p: usize) -> Result<()> {
    if p == 0 || p >= d.dim() {
        return Err(Error::InvalidArgument(format!(
            "leading block size {p} must lie in 1..{}",
            d.dim()
        )));
    }
    Ok(())
}

/// Projector bound `4‖E‖/δ_p` from the crude `F₁ < 2‖E‖/δ_p` estimate.
pub fn trivial_f1_bound(noise_norm: f64, delta_p: f64) -> Result<f64> {
    if delta_p <= 0.0 {
        return Err(PreconditionFailure::new("delta_p > 0", delta_p).into());
    }
    require_le("4||E|| <= delta_p", 4.0 * noise_norm, delta_p)?;
    Ok(4.0 * noise_norm / delta_p)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingularSpaceBound {
    pub value: f64,
    /// Two-sided halving index.
    pub r: usize,
    /// True when no `r ≤ n` met both halving conditions and `r = n` was used.
    pub r_padded: bool,
    pub x_bar: f64,
    pub delta_k: f64,
    pub delta_tail: f64,
    pub sigma_p: f64,
    pub noise_norm: f64,
    /// The index set `{0..k} ∪ {n−(p−k)..n}`.
    pub subset: Vec<usize>,
}

/// The split set `{1..k} ∪ {n−(p−k)+1..n}` (0-based).
pub fn singular_split_subset(n: usize, p: usize, k: usize) -> Vec<usize> {
    (0..k).chain(n - (p - k)..n).collect()
}

/// Bound on the leading-`p` singular-space projector of a symmetric matrix whose
/// top singular values are `k` positive and `p − k` negative eigenvalues.
pub fn singular_space_bound(
    d: &SpectralData,
    e: &SymmetricMatrix,
    p: usize,
    k: usize,
) -> Result<SingularSpaceBound> {
    singular_space_bound_with_norm(d, e, e.spectral_norm(), p, k)
}

pub fn singular_space_bound_with_norm(
    d: &SpectralData,
    e: &SymmetricMatrix,
    noise_norm: f64,
    p: usize,
    k: usize,
) -> Result<SingularSpaceBound> {
    let n = d.dim();
    if k == 0 || k >= p || p >= n {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= k < p < n, got k = {k}, p = {p}, n = {n}"
        )));
    }
    let eig = d.eigenvalues();
    let subset = singular_split_subset(n, p, k);

    let min_inside = subset.iter().map(|&i| eig[i].abs()).fold(f64::INFINITY, f64::min);
    let max_outside = (k..n - (p - k)).map(|i| eig[i].abs()).fold(0.0, f64::max);
    require_le("S spans the p largest singular values", max_outside, min_inside)?;

    // 1-based: δ_k = λ_k − λ_{k+1}, δ_q = λ_q − λ_{q+1} with q = n − (p − k).
    let q = n - (p - k);
    let delta_k = eig[k - 1] - eig[k];
    let delta_tail = eig[q - 1] - eig[q];
    let lambda_k = eig[k - 1];
    let lambda_tail = eig[q];
    let sigma = d.singular_values();
    let sigma_p = sigma[p - 1];
    let sigma_next = sigma.get(p).copied().unwrap_or(0.0);

    require_le("4||E|| <= delta_k", 4.0 * noise_norm, delta_k)?;
    require_le("delta_k <= lambda_k/4", delta_k, lambda_k / 4.0)?;
    require_le("4||E|| <= delta_{n-(p-k)}", 4.0 * noise_norm, delta_tail)?;
    require_le(
        "delta_{n-(p-k)} <= |lambda_{n-(p-k)+1}|/4",
        delta_tail,
        lambda_tail.abs() / 4.0,
    )?;
    require_le("2||E|| <= sigma_p - sigma_{p+1}", 2.0 * noise_norm, sigma_p - sigma_next)?;
    if delta_k <= 0.0 || delta_tail <= 0.0 || lambda_k <= 0.0 || lambda_tail >= 0.0 {
        return Err(PreconditionFailure::new("signed split gaps positive", delta_k.min(delta_tail)).into());
    }

    // λ_j for 1-based j, zero outside 1..=n.
    let lam = |j: usize| if j >= 1 && j <= n { eig[j - 1] } else { 0.0 };
    let halving = (1..=n).find(|&r| {
        lambda_k / 2.0 <= lambda_k - lam(r + 1)
            && lambda_tail.abs() / 2.0 <= lam(n + 1 - r) - lambda_tail
    });
    let (r, r_padded) = match halving {
        Some(r) => (r, false),
        None => (n, true),
    };

    let head = block_cross_term(d, e, 0, r);
    // 1-based range n−r ≤ i' ≤ n, clamped to valid indices.
    let tail_start = n.saturating_sub(r + 1);
    let tail = block_cross_term(d, e, tail_start, n);
    let x_bar = head.max(tail);

    let r2 = (r * r) as f64;
    let value = 48.0
        * (noise_norm / sigma_p * (6.0 * d.source_norm() / (delta_k * delta_tail).sqrt()).ln()
            + r2 * x_bar / delta_k.min(delta_tail));
    Ok(SingularSpaceBound {
        value,
        r,
        r_padded,
        x_bar,
        delta_k,
        delta_tail,
        sigma_p,
        noise_norm,
        subset,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RectangularBound {
    pub value: f64,
    pub r: usize,
    pub x_bar: f64,
    pub delta_p: f64,
    pub sigma_p: f64,
    pub sigma_1: f64,
    pub noise_norm: f64,
}

/// Bound on the leading-`p` left and right singular projectors of an `m x n` matrix.
pub fn rectangular_bound(a: &DMatrix<f64>, e: &DMatrix<f64>, p: usize) -> Result<RectangularBound> {
    if a.shape() != e.shape() {
        return Err(Error::DimensionMismatch {
            expected: format!("{:?}", a.shape()),
            found: format!("{:?}", e.shape()),
        });
    }
    let (sigma, u, v) = spectral::singular_triplets(a)?;
    if p == 0 || p > sigma.len() {
        return Err(Error::InvalidArgument(format!(
            "p = {p} out of range 1..={}",
            sigma.len()
        )));
    }
    let sv = |j: usize| if j >= 1 && j <= sigma.len() { sigma[j - 1] } else { 0.0 };
    let noise_norm = e.spectral_norm();
    let sigma_p = sv(p);
    let delta_p = sigma_p - sv(p + 1);
    if delta_p <= 0.0 {
        return Err(PreconditionFailure::new("delta_p > 0", delta_p).into());
    }
    require_le("4||E|| <= delta_p", 4.0 * noise_norm, delta_p)?;
    require_le("delta_p <= sigma_p/4", delta_p, sigma_p / 4.0)?;

    let q = sigma.len();
    let r = (p..q)
        .find(|&r| sigma_p / 2.0 <= (sigma_p - sv(r + 1)).abs())
        .unwrap_or(q);
    let ur = u.columns(0, r);
    let vr = v.columns(0, r);
    let x_bar = (ur.transpose() * e * vr).amax();
    let r2 = (r * r) as f64;
    let value = 24.0
        * SQRT_2
        * (noise_norm / sigma_p * (6.0 * sigma[0] / delta_p).ln() + r2 * x_bar / delta_p);
    Ok(RectangularBound {
        value,
        r,
        x_bar,
        delta_p,
        sigma_p,
        sigma_1: sigma[0],
        noise_norm,
    })
}

/// `max_i |λ_i − λ̃_i|` over two descending spectra.
pub fn weyl_gap(eigs_a: &[f64], eigs_at: &[f64]) -> Result<f64> {
    if eigs_a.len() != eigs_at.len() {
        return Err(Error::DimensionMismatch {
            expected: eigs_a.len().to_string(),
            found: eigs_at.len().to_string(),
        });
    }
    Ok(eigs_a
        .iter()
        .zip(eigs_at)
        .fold(0.0_f64, |acc, (a, b)| acc.max((a - b).abs())))
}

/// `Σσ_i / σ₁` (linear form).
pub fn stable_rank(singular_values: &[f64]) -> Result<f64> {
    let first = *singular_values
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty spectrum".into()))?;
    if singular_values.iter().any(|s| *s < 0.0) {
        return Err(Error::InvalidArgument("singular values must be nonnegative".into()));
    }
    if singular_values.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidArgument("singular values must be sorted descending".into()));
    }
    if first <= 0.0 {
        return Err(Error::InvalidArgument("all-zero spectrum has no stable rank".into()));
    }
    Ok(singular_values.iter().sum::<f64>() / first)
}

/// Outcome of one bound evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundStatus {
    Value(f64),
    Failed(PreconditionFailure),
    NotApplicable,
}

impl BoundStatus {
    pub fn value(&self) -> Option<f64> {
        match self {
            BoundStatus::Value(v) => Some(*v),
            _ => None,
        }
    }

    /// Converts a bound result; errors other than precondition failures propagate.
    pub fn from_result<T>(r: Result<T>, f: impl FnOnce(T) -> f64) -> Result<Self> {
        match r {
            Ok(v) => Ok(BoundStatus::Value(f(v))),
            Err(Error::Precondition(p)) => Ok(BoundStatus::Failed(p)),
            Err(e) => Err(e),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PreconditionCheck {
    pub name: String,
    pub satisfied: bool,
    pub slack: f64,
}

impl PreconditionCheck {
    fn le(name: &str, lhs: f64, rhs: f64) -> Self {
        Self {
            name: name.to_string(),
            satisfied: lhs <= rhs,
            slack: rhs - lhs,
        }
    }
}

/// Measured perturbation together with every applicable bound.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub measured: f64,
    pub dk_classical: BoundStatus,
    pub dk_corollary: BoundStatus,
    pub new_bound: BoundStatus,
    pub trivial_f1_bound: BoundStatus,
    pub cross_term_x: f64,
    pub noise_norm: f64,
    pub profile: GapProfile,
    /// `dist(Λ_S, Λ̃_{S^c})`.
    pub perturbed_gap: f64,
    pub weyl_gap: f64,
    pub preconditions: Vec<PreconditionCheck>,
}

impl BoundReport {
    /// Bounds that hold a value but sit below the measured perturbation (beyond `slack`).
    pub fn violations(&self, slack: f64) -> Vec<&'static str> {
        let named = [
            ("dk_classical", &self.dk_classical),
            ("dk_corollary", &self.dk_corollary),
            ("new_bound", &self.new_bound),
            ("trivial_f1_bound", &self.trivial_f1_bound),
        ];
        named
            .into_iter()
            .filter(|(_, b)| b.value().is_some_and(|v| self.measured > v + slack))
            .map(|(n, _)| n)
            .collect()
    }
}

/// Evaluates every bound for the eigenspace indexed by `subset` under `Ã = A + E`.
pub fn bound_report(
    d: &SpectralData,
    d_tilde: &SpectralData,
    e: &SymmetricMatrix,
    subset: &[usize],
) -> Result<BoundReport> {
    let noise_norm = e.spectral_norm();
    let s = check_subset(subset, d.dim())?;
    let profile = gap_profile(d, &s)?;
    let measured = spectral::sine_distance(
        &spectral::projector(d_tilde, &s)?,
        &spectral::projector(d, &s)?,
    )?;

    let mut inside = vec![false; d.dim()];
    for &i in &s {
        inside[i] = true;
    }
    let mut perturbed_gap = f64::INFINITY;
    for &i in &s {
        for (j, lt) in d_tilde.eigenvalues().iter().enumerate() {
            if !inside[j] {
                perturbed_gap = perturbed_gap.min((d.eigenvalue(i) - lt).abs());
            }
        }
    }

    let dk_classical = BoundStatus::from_result(
        davis_kahan_bound(noise_norm, perturbed_gap, DavisKahanVariant::General),
        |v| v,
    )?;
    let dk_corollary = BoundStatus::from_result(
        davis_kahan_bound(noise_norm, profile.delta_s, DavisKahanVariant::Corollary),
        |v| v,
    )?;

    let leading = s.iter().enumerate().all(|(k, &i)| k == i);
    let mut preconditions = vec![
        PreconditionCheck::le("dist(Lambda_S, tilde Lambda_S^c) > 0", 0.0, perturbed_gap),
        PreconditionCheck::le("2||E|| <= delta_S", 2.0 * noise_norm, profile.delta_s),
    ];
    let (new_b, trivial, x) = if leading {
        preconditions.push(PreconditionCheck::le("4||E|| <= delta_p", 4.0 * noise_norm, profile.delta_p));
        preconditions.push(PreconditionCheck::le(
            "delta_p <= |lambda_p|/4",
            profile.delta_p,
            profile.lambda_p.abs() / 4.0,
        ));
        let x = cross_term_x(d, e, profile.halving_index)?;
        let nb = BoundStatus::from_result(new_bound_with_norm(d, e, noise_norm, profile.p), |b| b.value)?;
        let tb = BoundStatus::from_result(trivial_f1_bound(noise_norm, profile.delta_p), |v| v)?;
        (nb, tb, x)
    } else {
        let x = cross_term_x(d, e, profile.halving_index)?;
        (BoundStatus::NotApplicable, BoundStatus::NotApplicable, x)
    };

    Ok(BoundReport {
        measured,
        dk_classical,
        dk_corollary,
        new_bound: new_b,
        trivial_f1_bound: trivial,
        cross_term_x: x,
        noise_norm,
        profile,
        perturbed_gap,
        weyl_gap: weyl_gap(d.eigenvalues(), d_tilde.eigenvalues())?,
        preconditions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::spectral_decompose;
    use approx::assert_abs_diff_eq;

    fn diag_data(values: &[f64]) -> SpectralData {
        spectral_decompose(&SymmetricMatrix::from_diagonal(values)).unwrap()
    }

    #[test]
    fn gap_profile_examples() {
        let d = diag_data(&[5.0, 3.0, 1.0]);
        assert_eq!(gap_profile(&d, &[0]).unwrap().delta_s, 2.0);
        assert_eq!(gap_profile(&d, &[0, 2]).unwrap().delta_s, 2.0);
        let tied = diag_data(&[4.0, 2.0, 2.0]);
        assert_eq!(gap_profile(&tied, &[0, 1]).unwrap().delta_p, 0.0);
        assert!(gap_profile(&d, &[]).is_err());
        assert!(gap_profile(&d, &[0, 1, 2]).is_err());
    }

    #[test]
    fn delta_s_matches_brute_force_pairs() {
        let eig: [f64; 6] = [9.0, 7.5, 4.0, 3.9, -1.0, -6.0];
        let subset = [1, 3, 5];
        let mut brute = f64::INFINITY;
        for i in 0..6 {
            for j in 0..6 {
                if subset.contains(&i) && !subset.contains(&j) {
                    brute = brute.min((eig[i] - eig[j]).abs());
                }
            }
        }
        assert_eq!(subset_gap(&eig, &subset), brute);
    }

    #[test]
    fn halving_index_examples() {
        assert_eq!(halving_index_of(&[100.0, 90.0, 40.0, 10.0], 1), 2);
        assert_eq!(halving_index_of(&[10.0, 1.0], 1), 1);
        assert_eq!(halving_index_of(&[4.0, 4.0, 4.0], 1), 3);
    }

    #[test]
    fn cross_term_examples() {
        let d = diag_data(&[3.0, 2.0, 1.0]);
        assert_eq!(cross_term_x(&d, &SymmetricMatrix::zeros(3), 3).unwrap(), 0.0);
        let e = SymmetricMatrix::from_upper_fn(3, |i, j| (i as f64 + 1.0) * 0.1 - (j as f64) * 0.37);
        assert_abs_diff_eq!(cross_term_x(&d, &e, 3).unwrap(), e.max_abs_entry(), epsilon = 1e-15);
        assert!(cross_term_x(&d, &SymmetricMatrix::zeros(2), 2).is_err());
    }

    #[test]
    fn davis_kahan_examples() {
        use DavisKahanVariant::*;
        assert_abs_diff_eq!(davis_kahan_bound(1.0, 2.0, General).unwrap(), std::f64::consts::FRAC_PI_4, epsilon = 1e-15);
        assert_abs_diff_eq!(davis_kahan_bound(1.0, 2.0, Corollary).unwrap(), std::f64::consts::FRAC_PI_2, epsilon = 1e-15);
        assert_eq!(davis_kahan_bound(0.0, 2.0, General).unwrap(), 0.0);
        assert_eq!(davis_kahan_bound(0.0, 2.0, Corollary).unwrap(), 0.0);
        assert!(matches!(davis_kahan_bound(1.0, 0.0, General), Err(Error::Precondition(_))));
        match davis_kahan_bound(1.0, 1.5, Corollary) {
            Err(Error::Precondition(p)) => {
                assert!(p.name.contains("Weyl"));
                assert_abs_diff_eq!(p.slack, -0.5);
            }
            other => panic!("expected precondition failure, got {other:?}"),
        }
    }

    #[test]
    fn theorem_formula_hand_evaluation() {
        // σ₁ = 100, δ₁ = 10, r = 2, ‖E‖ = 2, x = 0.1
        let v = theorem_bound_value(2.0, 100.0, 100.0, 10.0, 2, 0.1);
        let hand = 24.0 * (2.0 / 100.0 * 60.0_f64.ln() + 4.0 * 0.1 / 10.0);
        assert_abs_diff_eq!(v, hand, epsilon = 1e-12);
        assert_abs_diff_eq!(v, 2.925, epsilon = 1e-3);
    }

    #[test]
    fn new_bound_zero_noise_and_rejection() {
        let d = diag_data(&[100.0, 90.0, 40.0, 10.0]);
        let b = new_bound(&d, &SymmetricMatrix::zeros(4), 1).unwrap();
        assert_eq!(b.value, 0.0);
        assert_eq!(b.profile.halving_index, 2);

        // ‖E‖ = 10/3 so δ₁ = 3‖E‖
        let e = SymmetricMatrix::from_diagonal(&[0.0, 0.0, 0.0, 10.0 / 3.0]);
        match new_bound(&d, &e, 1) {
            Err(Error::Precondition(p)) => {
                assert_eq!(p.name, "4||E|| <= delta_p");
                assert_abs_diff_eq!(p.slack, -10.0 / 3.0, epsilon = 1e-12);
            }
            other => panic!("expected precondition failure, got {other:?}"),
        }
    }

    #[test]
    fn trivial_f1_examples() {
        assert_eq!(trivial_f1_bound(1.0, 4.0).unwrap(), 1.0);
        assert_eq!(trivial_f1_bound(0.0, 4.0).unwrap(), 0.0);
        assert_eq!(trivial_f1_bound(1.0, 8.0).unwrap(), 0.5);
        assert!(trivial_f1_bound(1.0, 3.0).is_err());
    }

    #[test]
    fn singular_space_bound_hand_evaluation() {
        let eig = [10.0, 8.0, 0.5, -0.5, -8.0, -10.0];
        let d = diag_data(&eig);
        let e = SymmetricMatrix::from_upper_fn(6, |i, j| 0.01 * ((i + 2 * j) as f64).sin());
        let b = singular_space_bound(&d, &e, 2, 1).unwrap();
        assert_eq!(b.subset, vec![0, 5]);
        assert_eq!(b.r, 3);
        assert!(!b.r_padded);

        // Oracle: straight transcription with coordinate eigenvectors.
        let norm = e.spectral_norm();
        let (dk, dq) = (2.0_f64, 2.0_f64);
        let r = 3usize;
        let mut xbar = 0.0_f64;
        for i in 0..r {
            for j in 0..r {
                xbar = xbar.max(e.get(i, j).abs());
            }
        }
        for i in 2..6 {
            for j in 2..6 {
                xbar = xbar.max(e.get(i, j).abs());
            }
        }
        let hand = 48.0 * (norm / 10.0 * (60.0 / (dk * dq).sqrt()).ln() + 9.0 * xbar / 2.0);
        assert_abs_diff_eq!(b.value, hand, epsilon = 1e-10);

        let zero = singular_space_bound(&d, &SymmetricMatrix::zeros(6), 2, 1).unwrap();
        assert_eq!(zero.value, 0.0);
    }

    #[test]
    fn singular_space_bound_rejects_small_singular_gap() {
        // σ₂ − σ₃ = 10 − 9.9 < 2‖E‖
        let d = diag_data(&[10.0, 9.9, 0.5, -9.9, -10.0]);
        let e = SymmetricMatrix::from_diagonal(&[0.0, 0.0, 0.2, 0.0, 0.0]);
        assert!(matches!(singular_space_bound(&d, &e, 2, 1), Err(Error::Precondition(_))));
    }

    #[test]
    fn rectangular_examples() {
        let a = DMatrix::from_row_slice(1, 1, &[10.0]);
        let e = DMatrix::from_row_slice(1, 1, &[0.5]);
        match rectangular_bound(&a, &e, 1) {
            Err(Error::Precondition(p)) => assert_eq!(p.name, "delta_p <= sigma_p/4"),
            other => panic!("expected precondition failure, got {other:?}"),
        }
        let a = DMatrix::from_row_slice(3, 2, &[10.0, 0.0, 0.0, 9.0, 0.0, 0.0]);
        // σ = (10, 9): δ₁ = 1 ≤ 2.5, r = 2 via σ₃ := 0
        let b = rectangular_bound(&a, &DMatrix::zeros(3, 2), 1).unwrap();
        assert_eq!(b.value, 0.0);
        assert_eq!(b.r, 2);
    }

    #[test]
    fn weyl_and_stable_rank() {
        assert_eq!(weyl_gap(&[1.0, 0.0], &[1.0, 0.0]).unwrap(), 0.0);
        assert_abs_diff_eq!(weyl_gap(&[1.0, 0.0], &[1.3, 0.1]).unwrap(), 0.3, epsilon = 1e-15);
        assert!(weyl_gap(&[1.0], &[1.0, 2.0]).is_err());
        assert_eq!(stable_rank(&[5.0, 0.0, 0.0]).unwrap(), 1.0);
        assert_eq!(stable_rank(&[4.0, 4.0, 4.0, 4.0]).unwrap(), 4.0);
        assert_eq!(stable_rank(&[10.0, 5.0, 5.0]).unwrap(), 2.0);
        assert!(stable_rank(&[0.0, 0.0]).is_err());
        assert!(stable_rank(&[1.0, 2.0]).is_err());
    }
}
