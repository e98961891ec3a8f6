//! Rectangular contours around a block of the spectrum and the resolvent
//! integrals evaluated along them.
//!
//! Segments are numbered left, top, right, bottom and traversed
//! counterclockwise, so the left side runs downward and the Cauchy integral of
//! `1/(z − a)` is `+1` for enclosed `a`.

pub mod quadrature;

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, PreconditionFailure, Result};
use crate::matrix::SymmetricMatrix;
use crate::spectral::{self, check_subset, SpectralData};

pub use quadrature::{QuadratureConfig, QuadratureResult, Segment};

/// Rectangle `[x0, x1] × [−T, T]` with its quadrature settings.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourSpec {
    pub x0: f64,
    pub x1: f64,
    pub t: f64,
    pub nodes_per_segment: usize,
    pub rel_tol: f64,
    pub max_refinements: usize,
    /// Indices of the eigenvalues the contour was built to enclose.
    pub enclosed: Vec<usize>,
    /// Smallest distance from any eigenvalue to the boundary at construction.
    pub margin: f64,
}

impl ContourSpec {
    pub const DEFAULT_NODES: usize = 256;
    pub const MIN_NODES: usize = 8;

    /// Bare rectangle, enclosing nothing in particular.
    pub fn new(x0: f64, x1: f64, t: f64, nodes_per_segment: usize) -> Result<Self> {
        if !(x0 < x1) {
            return Err(Error::InvalidArgument(format!("need x0 < x1, got {x0} and {x1}")));
        }
        if !(t > 0.0) {
            return Err(Error::InvalidArgument(format!("need T > 0, got {t}")));
        }
        if nodes_per_segment < Self::MIN_NODES {
            return Err(Error::InvalidArgument(format!(
                "nodes_per_segment must be at least {}, got {nodes_per_segment}",
                Self::MIN_NODES
            )));
        }
        Ok(Self {
            x0,
            x1,
            t,
            nodes_per_segment,
            rel_tol: 1e-8,
            max_refinements: 8,
            enclosed: Vec::new(),
            margin: f64::NAN,
        })
    }

    pub fn with_nodes(mut self, nodes_per_segment: usize) -> Result<Self> {
        if nodes_per_segment < Self::MIN_NODES {
            return Err(Error::InvalidArgument(format!(
                "nodes_per_segment must be at least {}, got {nodes_per_segment}",
                Self::MIN_NODES
            )));
        }
        self.nodes_per_segment = nodes_per_segment;
        Ok(self)
    }

    /// Left (downward), top, right (upward), bottom.
    pub fn segments(&self) -> [Segment; 4] {
        let c = Complex64::new;
        let (x0, x1, t) = (self.x0, self.x1, self.t);
        [
            Segment::new(c(x0, t), c(x0, -t)),
            Segment::new(c(x1, t), c(x0, t)),
            Segment::new(c(x1, -t), c(x1, t)),
            Segment::new(c(x0, -t), c(x1, -t)),
        ]
    }

    pub fn quadrature(&self, abs_floor: f64) -> QuadratureConfig {
        QuadratureConfig {
            nodes_per_segment: self.nodes_per_segment,
            rel_tol: self.rel_tol,
            max_refinements: self.max_refinements,
            abs_floor,
        }
    }

    pub fn contains(&self, lambda: f64) -> bool {
        self.x0 < lambda && lambda < self.x1
    }

    /// Distance from a real point to the rectangle boundary.
    pub fn boundary_distance(&self, lambda: f64) -> f64 {
        if self.contains(lambda) {
            (lambda - self.x0).min(self.x1 - lambda).min(self.t)
        } else if lambda <= self.x0 {
            self.x0 - lambda
        } else {
            lambda - self.x1
        }
    }

    /// Enclosed indices and the smallest boundary distance over `eigenvalues`.
    pub fn enclosure(&self, eigenvalues: &[f64]) -> (Vec<usize>, f64) {
        let inside = (0..eigenvalues.len()).filter(|&i| self.contains(eigenvalues[i])).collect();
        let margin = eigenvalues
            .iter()
            .map(|&l| self.boundary_distance(l))
            .fold(f64::INFINITY, f64::min);
        (inside, margin)
    }

    /// Checks that exactly `self.enclosed` lies inside, off the boundary.
    /// Returns the margin.
    pub fn check_enclosure(&self, eigenvalues: &[f64]) -> std::result::Result<f64, PreconditionFailure> {
        let mut worst = f64::INFINITY;
        for (i, &l) in eigenvalues.iter().enumerate() {
            let want = self.enclosed.contains(&i);
            let d = self.boundary_distance(l);
            let signed = if want == self.contains(l) { d } else { -d };
            worst = worst.min(signed);
        }
        if worst > 0.0 {
            Ok(worst)
        } else {
            Err(PreconditionFailure::new("eigenvalue i enclosed iff i in S", worst))
        }
    }

    /// The enclosure test implied by Weyl's inequality alone: every eigenvalue
    /// of `A` sits farther than `‖E‖` from the boundary.
    pub fn weyl_enclosure(&self, eigenvalues: &[f64], noise_norm: f64) -> bool {
        self.check_enclosure(eigenvalues).is_ok_and(|m| m > noise_norm)
    }

    /// `count` evenly spaced interior points per segment, for pointwise checks.
    pub fn sample_points(&self, count: usize) -> Vec<Complex64> {
        self.segments()
            .iter()
            .flat_map(|s| {
                let len = s.length();
                (0..count).map(move |k| s.point(len * (k as f64 + 0.5) / count as f64))
            })
            .collect()
    }
}

fn enclosure_error(c: &ContourSpec, eig: &[f64]) -> Result<f64> {
    c.check_enclosure(eig)
        .map_err(|p| Error::Enclosure(format!("{} (slack {:e})", p.name, p.slack)))
}

/// Rectangle with `x0 = λ_p − δ_p/2` and `x1 = T = 2σ₁` around the top `p` eigenvalues.
pub fn build_theorem_contour(d: &SpectralData, p: usize) -> Result<ContourSpec> {
    let n = d.dim();
    if p == 0 || p >= n {
        return Err(Error::InvalidArgument(format!("p = {p} must lie in 1..{n}")));
    }
    let eig = d.eigenvalues();
    let delta_p = eig[p - 1] - eig[p];
    if delta_p <= 0.0 {
        return Err(Error::DegenerateGap { index: p });
    }
    let sigma_1 = d.source_norm();
    let mut c = ContourSpec::new(eig[p - 1] - delta_p / 2.0, 2.0 * sigma_1, 2.0 * sigma_1, ContourSpec::DEFAULT_NODES)?;
    c.enclosed = (0..p).collect();
    c.margin = enclosure_error(&c, eig)?;
    Ok(c)
}

/// Rectangle whose vertical sides bisect the gaps around a contiguous block `S`
/// of the spectrum. Requires `dist(Λ_S, Λ_{S^c}) ≥ 4‖E‖`.
pub fn build_bisecting_contour(d: &SpectralData, subset: &[usize], noise_norm: f64) -> Result<ContourSpec> {
    let n = d.dim();
    let s = check_subset(subset, n)?;
    if s.len() == n {
        return Err(Error::InvalidArgument("index set must be a proper subset".into()));
    }
    if s.windows(2).any(|w| w[1] != w[0] + 1) {
        return Err(Error::InvalidArgument("index set must be contiguous in the spectrum".into()));
    }
    let eig = d.eigenvalues();
    let (first, last) = (s[0], s[s.len() - 1]);
    let gap = crate::bounds::subset_gap(eig, &s);
    if gap <= 0.0 {
        return Err(Error::DegenerateGap { index: if last + 1 < n { last + 1 } else { first } });
    }
    crate::error::require_le("4||E|| <= dist(Lambda_S, Lambda_S^c)", 4.0 * noise_norm, gap)?;

    let sigma_1 = d.source_norm();
    let x0 = if last + 1 < n { 0.5 * (eig[last] + eig[last + 1]) } else { -2.0 * sigma_1 };
    let x1 = if first > 0 { 0.5 * (eig[first - 1] + eig[first]) } else { 2.0 * sigma_1 };
    let mut c = ContourSpec::new(x0, x1, 2.0 * sigma_1, ContourSpec::DEFAULT_NODES)?;
    c.enclosed = s;
    c.margin = enclosure_error(&c, eig)?;
    Ok(c)
}

/// Numerical `(1/2πi)∮ (zI − A)⁻¹ dz` compared against the exact projector.
#[derive(Debug, Clone, PartialEq)]
pub struct CauchyProjector {
    /// Real part of the integral.
    pub matrix: DMatrix<f64>,
    /// Largest imaginary entry of the integral.
    pub imaginary_residual: f64,
    /// Frobenius distance to the projector onto the enclosed eigenvectors.
    pub deviation: f64,
    pub quadrature: QuadratureResult<()>,
}

fn poles(eigenvalues: &[f64]) -> Vec<Complex64> {
    eigenvalues.iter().map(|&l| Complex64::new(l, 0.0)).collect()
}

/// Per-eigenvalue contour weights `(1/2πi)∮ dz/(z − λ_i)`.
fn cauchy_weights(eigenvalues: &[f64], c: &ContourSpec) -> Result<QuadratureResult<Vec<Complex64>>> {
    let n = eigenvalues.len();
    let cfg = c.quadrature(1.0);
    let r = quadrature::integrate_path(&c.segments(), &poles(eigenvalues), &cfg, 2 * n, |z, dir| {
        let mut out = Vec::with_capacity(2 * n);
        for &l in eigenvalues {
            let w = dir / (z - l);
            out.push(w.re);
            out.push(w.im);
        }
        out
    })?;
    let scale = 1.0 / Complex64::new(0.0, 2.0 * PI);
    Ok(r.total.map(|v| v.chunks(2).map(|p| Complex64::new(p[0], p[1]) * scale).collect()))
}

/// Scalar Cauchy integral `(1/2πi)∮ dz/(z − a)`.
pub fn cauchy_indicator(a: f64, c: &ContourSpec) -> Result<QuadratureResult<Complex64>> {
    Ok(cauchy_weights(&[a], c)?.map(|v| v[0]))
}

/// Matrix Cauchy integral, carried out entrywise in the eigenbasis of `A`.
pub fn cauchy_projector(d: &SpectralData, c: &ContourSpec) -> Result<CauchyProjector> {
    let (inside, margin) = c.enclosure(d.eigenvalues());
    if margin <= 0.0 {
        return Err(Error::Enclosure("an eigenvalue lies on the contour".into()));
    }
    let weights = cauchy_weights(d.eigenvalues(), c)?;
    let integral = spectral::eigen_synthesis(d.eigenvectors(), &weights.value);
    let matrix = integral.map(|z| z.re);
    let imaginary_residual = integral.iter().fold(0.0_f64, |m, z| m.max(z.im.abs()));
    let exact = if inside.is_empty() {
        DMatrix::zeros(d.dim(), d.dim())
    } else {
        spectral::projector(d, &inside)?.matrix().clone()
    };
    let deviation = (&matrix - exact).norm();
    Ok(CauchyProjector {
        matrix,
        imaginary_residual,
        deviation,
        quadrature: weights.map(|_| ()),
    })
}

fn check_dims(d: &SpectralData, e: &SymmetricMatrix) -> Result<()> {
    if d.dim() != e.dim() {
        return Err(Error::DimensionMismatch {
            expected: format!("{0}x{0}", d.dim()),
            found: format!("{0}x{0}", e.dim()),
        });
    }
    Ok(())
}

/// `‖(zI − A)⁻¹ E (zI − A)⁻¹‖` evaluated as `‖ |D| Ẽ |D| ‖` with `Ẽ = UᵀEU`.
struct SandwichNorm {
    eigenvalues: Vec<f64>,
    projected: DMatrix<f64>,
}

impl SandwichNorm {
    fn new(d: &SpectralData, e: &SymmetricMatrix) -> Self {
        Self {
            eigenvalues: d.eigenvalues().to_vec(),
            projected: d.to_eigenbasis(e.as_matrix()),
        }
    }

    fn at(&self, z: Complex64) -> f64 {
        let scale: Vec<f64> = self.eigenvalues.iter().map(|&l| 1.0 / (z - l).norm()).collect();
        let n = scale.len();
        let m = DMatrix::from_fn(n, n, |i, j| scale[i] * self.projected[(i, j)] * scale[j]);
        spectral::symmetric_abs_max(&m)
    }
}

/// `F₁ = (1/2π)∮ ‖(zI − A)⁻¹ E (zI − A)⁻¹‖ |dz|`.
pub fn f1_numeric(d: &SpectralData, e: &SymmetricMatrix, c: &ContourSpec) -> Result<QuadratureResult<f64>> {
    check_dims(d, e)?;
    enclosure_error(c, d.eigenvalues())?;
    let w = SandwichNorm::new(d, e);
    let r = quadrature::integrate_scalar(&c.segments(), &poles(d.eigenvalues()), &c.quadrature(0.0), |z, _| {
        w.at(z)
    })?;
    Ok(QuadratureResult {
        value: r.value / (2.0 * PI),
        estimated_error: r.estimated_error / (2.0 * PI),
        ..r
    })
}

/// `F = (1/2π)∮ ‖(zI − Ã)⁻¹ − (zI − A)⁻¹‖ |dz|`.
pub fn f_numeric(d: &SpectralData, d_tilde: &SpectralData, c: &ContourSpec) -> Result<QuadratureResult<f64>> {
    if d.dim() != d_tilde.dim() {
        return Err(Error::DimensionMismatch {
            expected: d.dim().to_string(),
            found: d_tilde.dim().to_string(),
        });
    }
    enclosure_error(c, d.eigenvalues())?;
    let slack = c.check_enclosure(d_tilde.eigenvalues()).map_err(|p| {
        PreconditionFailure::new("perturbed eigenvalue i enclosed iff i in S", p.slack)
    })?;
    debug_assert!(slack > 0.0);

    let n = d.dim();
    // W = UᵀŨ: Ã's resolvent in A's eigenbasis is W D̃ Wᵀ.
    let w = d.eigenvectors().transpose() * d_tilde.eigenvectors();
    let wc = w.map(|x| Complex64::new(x, 0.0));
    let lam = d.eigenvalues().to_vec();
    let lam_t = d_tilde.eigenvalues().to_vec();
    let mut all_poles = poles(&lam);
    all_poles.extend(poles(&lam_t));

    let r = quadrature::integrate_scalar(&c.segments(), &all_poles, &c.quadrature(0.0), |z, _| {
        let mut scaled = wc.clone();
        for j in 0..n {
            let s = 1.0 / (z - lam_t[j]);
            scaled.column_mut(j).iter_mut().for_each(|v| *v *= s);
        }
        let mut m = &scaled * wc.transpose();
        for i in 0..n {
            m[(i, i)] -= 1.0 / (z - lam[i]);
        }
        (m.adjoint() * &m).symmetric_eigenvalues().max().max(0.0).sqrt()
    })?;
    Ok(QuadratureResult {
        value: r.value / (2.0 * PI),
        estimated_error: r.estimated_error / (2.0 * PI),
        ..r
    })
}

/// `M_k = ∫_{Γ_k} ‖(zI − A)⁻¹ E (zI − A)⁻¹‖ |dz|` for the four sides, each adapted on its own.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentIntegrals {
    /// Left, top, right, bottom.
    pub m: [QuadratureResult<f64>; 4],
}

impl SegmentIntegrals {
    pub fn sum(&self) -> f64 {
        self.m.iter().map(|r| r.value).sum()
    }

    pub fn estimated_error(&self) -> f64 {
        self.m.iter().map(|r| r.estimated_error).sum()
    }
}

pub fn segment_integrals(d: &SpectralData, e: &SymmetricMatrix, c: &ContourSpec) -> Result<SegmentIntegrals> {
    check_dims(d, e)?;
    enclosure_error(c, d.eigenvalues())?;
    let w = SandwichNorm::new(d, e);
    let cfg = c.quadrature(0.0);
    let pole_list = poles(d.eigenvalues());
    let segs = c.segments();
    let mut out = Vec::with_capacity(4);
    for seg in &segs {
        out.push(quadrature::integrate_scalar(std::slice::from_ref(seg), &pole_list, &cfg, |z, _| w.at(z))?);
    }
    let m: [QuadratureResult<f64>; 4] = out.try_into().expect("four segments");
    Ok(SegmentIntegrals { m })
}

/// Analytic upper bounds on the four segment integrals of the theorem contour.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentLemmaBounds {
    /// `70(‖E‖/|λ_p| · log(6σ₁/δ_p) + r²x/δ_p)`.
    pub m1: f64,
    /// `8‖E‖/δ_p`.
    pub m1_crude: f64,
    /// `‖E‖ |x1 − x0| / T²`, shared by top and bottom.
    pub m2_m4: f64,
    /// `4‖E‖ / |x1 − λ₁|`.
    pub m3: f64,
}

pub fn segment_lemma_bounds(
    d: &SpectralData,
    c: &ContourSpec,
    p: usize,
    noise_norm: f64,
    x: f64,
) -> Result<SegmentLemmaBounds> {
    let n = d.dim();
    if p == 0 || p >= n {
        return Err(Error::InvalidArgument(format!("p = {p} must lie in 1..{n}")));
    }
    let eig = d.eigenvalues();
    let delta_p = eig[p - 1] - eig[p];
    if delta_p <= 0.0 {
        return Err(Error::DegenerateGap { index: p });
    }
    let lambda_p = eig[p - 1].abs();
    let r = crate::bounds::halving_index_of(eig, p) as f64;
    Ok(SegmentLemmaBounds {
        m1: 70.0 * (noise_norm / lambda_p * (6.0 * d.source_norm() / delta_p).ln() + r * r * x / delta_p),
        m1_crude: 8.0 * noise_norm / delta_p,
        m2_m4: noise_norm * (c.x1 - c.x0).abs() / (c.t * c.t),
        m3: 4.0 * noise_norm / (c.x1 - eig[0]).abs(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArctanIntegral {
    /// `(2/a) · arctan(T/a)`.
    pub closed_form: f64,
    /// `4/a`.
    pub bound: f64,
}

fn check_arctan_args(a: f64, t: f64) -> Result<()> {
    if !(a > 0.0) || !(a <= t) || !t.is_finite() {
        return Err(Error::InvalidArgument(format!("need 0 < a <= T, got a = {a}, T = {t}")));
    }
    Ok(())
}

/// Closed form and bound for `∫_{−T}^{T} dt / (t² + a²)`.
pub fn arctan_integral(a: f64, t: f64) -> Result<ArctanIntegral> {
    check_arctan_args(a, t)?;
    Ok(ArctanIntegral {
        closed_form: 2.0 / a * (t / a).atan(),
        bound: 4.0 / a,
    })
}

/// The same integral by quadrature, for comparison with the closed form.
pub fn arctan_integral_numeric(a: f64, t: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult<f64>> {
    check_arctan_args(a, t)?;
    let seg = Segment::new(Complex64::new(-t, 0.0), Complex64::new(t, 0.0));
    quadrature::integrate_scalar(&[seg], &[Complex64::new(0.0, a)], cfg, |z, _| 1.0 / (z.re * z.re + a * a))
}
