//! Adaptive composite Gauss-Legendre quadrature along straight segments in the
//! complex plane.
//!
//! Each segment starts from an even partition into panels. Panels are split
//! until each is no longer than its distance to the nearest pole, then panels
//! whose two-level error estimate is too large are bisected repeatedly. Node
//! evaluation and summation order are fixed, so results are bit-reproducible.

use gauss_quad::GaussLegendre;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Maximum Gauss-Legendre order per panel.
pub const PANEL_ORDER: usize = 16;

/// Straight oriented path `start → end`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub start: Complex64,
    pub end: Complex64,
}

impl Segment {
    pub fn new(start: Complex64, end: Complex64) -> Self {
        Self { start, end }
    }

    pub fn length(&self) -> f64 {
        (self.end - self.start).norm()
    }

    /// Unit direction `dz/ds`.
    pub fn direction(&self) -> Complex64 {
        (self.end - self.start) / self.length()
    }

    pub fn point(&self, s: f64) -> Complex64 {
        self.start + self.direction() * s
    }

    /// Euclidean distance from the sub-path `s ∈ [a, b]` to `w`.
    fn distance_between(&self, a: f64, b: f64, w: Complex64) -> f64 {
        let dir = self.direction();
        let along = ((w - self.start) * dir.conj()).re.clamp(a, b);
        (self.start + dir * along - w).norm()
    }
}

/// Refinement settings shared by every contour integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Initial node budget per segment; split into panels of [`PANEL_ORDER`] nodes.
    pub nodes_per_segment: usize,
    /// Target relative error.
    pub rel_tol: f64,
    /// Maximum number of bisection passes.
    pub max_refinements: usize,
    /// Lower bound on the magnitude used to turn `rel_tol` into an absolute tolerance.
    pub abs_floor: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            nodes_per_segment: 256,
            rel_tol: 1e-8,
            max_refinements: 8,
            abs_floor: 0.0,
        }
    }
}

/// Value of a contour integral with its accounting.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureResult<V = f64> {
    pub value: V,
    /// Number of integrand evaluations.
    pub node_count: usize,
    /// Bisection passes performed.
    pub refinement_steps: usize,
    pub estimated_error: f64,
}

impl<V> QuadratureResult<V> {
    pub fn map<W>(self, f: impl FnOnce(V) -> W) -> QuadratureResult<W> {
        QuadratureResult {
            value: f(self.value),
            node_count: self.node_count,
            refinement_steps: self.refinement_steps,
            estimated_error: self.estimated_error,
        }
    }
}

/// Integrals over several segments adapted jointly, with per-segment parts.
#[derive(Debug, Clone, PartialEq)]
pub struct PathIntegral {
    pub total: QuadratureResult<Vec<f64>>,
    pub per_segment: Vec<Vec<f64>>,
    pub per_segment_error: Vec<f64>,
}

struct Panel {
    segment: usize,
    a: f64,
    b: f64,
    left: Vec<f64>,
    right: Vec<f64>,
    error: f64,
}

struct Rule {
    nodes: Vec<(f64, f64)>,
}

impl Rule {
    fn new(order: usize) -> Self {
        let nodes = GaussLegendre::new(order.max(2))
            .expect("Gauss-Legendre order is at least 2")
            .into_node_weight_pairs();
        Self { nodes }
    }

    fn apply<F>(&self, seg: &Segment, a: f64, b: f64, dim: usize, f: &F, evals: &mut usize) -> Vec<f64>
    where
        F: Fn(Complex64, Complex64) -> Vec<f64>,
    {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let dir = seg.direction();
        let mut acc = vec![0.0; dim];
        for &(x, w) in &self.nodes {
            let v = f(seg.point(mid + half * x), dir);
            debug_assert_eq!(v.len(), dim);
            for (s, vi) in acc.iter_mut().zip(&v) {
                *s += w * half * vi;
            }
        }
        *evals += self.nodes.len();
        acc
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Integrates `f(z, dz/ds)` with respect to arc length `ds` over every segment.
///
/// `f` returns `dim` real components. Complex integrands `g(z) dz` are passed as
/// the real and imaginary parts of `g(z) · dir`.
pub fn integrate_path<F>(
    segments: &[Segment],
    poles: &[Complex64],
    cfg: &QuadratureConfig,
    dim: usize,
    f: F,
) -> Result<PathIntegral>
where
    F: Fn(Complex64, Complex64) -> Vec<f64>,
{
    if cfg.nodes_per_segment == 0 {
        return Err(Error::InvalidArgument("nodes_per_segment must be positive".into()));
    }
    let order = cfg.nodes_per_segment.min(PANEL_ORDER);
    let base_panels = (cfg.nodes_per_segment / order).max(1);
    let rule = Rule::new(order);
    let mut evals = 0usize;

    let mut intervals = Vec::new();
    let total_length: f64 = segments.iter().map(Segment::length).sum();
    for (k, seg) in segments.iter().enumerate() {
        let len = seg.length();
        let mut stack: Vec<(f64, f64)> = (0..base_panels)
            .rev()
            .map(|i| {
                let a = len * i as f64 / base_panels as f64;
                let b = len * (i + 1) as f64 / base_panels as f64;
                (a, b)
            })
            .collect();
        while let Some((a, b)) = stack.pop() {
            let dist = poles
                .iter()
                .map(|&w| seg.distance_between(a, b, w))
                .fold(f64::INFINITY, f64::min);
            if dist <= 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "integration path on segment {k} passes through a pole"
                )));
            }
            if b - a > dist && (b - a) > 1e-14 * len {
                let m = 0.5 * (a + b);
                stack.push((m, b));
                stack.push((a, m));
            } else {
                intervals.push((k, a, b));
            }
        }
    }

    let make_panel = |segment: usize, a: f64, b: f64, whole: Option<Vec<f64>>, evals: &mut usize| {
        let seg = &segments[segment];
        let whole = whole.unwrap_or_else(|| rule.apply(seg, a, b, dim, &f, evals));
        let m = 0.5 * (a + b);
        let left = rule.apply(seg, a, m, dim, &f, evals);
        let right = rule.apply(seg, m, b, dim, &f, evals);
        let fine = add(&left, &right);
        let error = fine.iter().zip(&whole).fold(0.0_f64, |e, (x, y)| e.max((x - y).abs()));
        Panel {
            segment,
            a,
            b,
            left,
            right,
            error,
        }
    };

    let mut panels: Vec<Panel> = intervals
        .into_iter()
        .map(|(k, a, b)| make_panel(k, a, b, None, &mut evals))
        .collect();

    let mut passes = 0usize;
    loop {
        let mut total = vec![0.0; dim];
        let mut error = 0.0;
        for p in &panels {
            for (t, (l, r)) in total.iter_mut().zip(p.left.iter().zip(&p.right)) {
                *t += l + r;
            }
            error += p.error;
        }
        let tol = cfg.rel_tol * max_abs(&total).max(cfg.abs_floor);
        if error <= tol {
            let mut per_segment = vec![vec![0.0; dim]; segments.len()];
            let mut per_segment_error = vec![0.0; segments.len()];
            for p in &panels {
                for (t, (l, r)) in per_segment[p.segment].iter_mut().zip(p.left.iter().zip(&p.right)) {
                    *t += l + r;
                }
                per_segment_error[p.segment] += p.error;
            }
            return Ok(PathIntegral {
                total: QuadratureResult {
                    value: total,
                    node_count: evals,
                    refinement_steps: passes,
                    estimated_error: error,
                },
                per_segment,
                per_segment_error,
            });
        }
        if passes == cfg.max_refinements {
            return Err(Error::QuadratureNoConvergence {
                refinements: passes,
                estimate: error,
            });
        }
        passes += 1;

        let mut next = Vec::with_capacity(panels.len() * 2);
        for p in panels {
            let share = tol * (p.b - p.a) / total_length;
            if p.error > share {
                let m = 0.5 * (p.a + p.b);
                next.push(make_panel(p.segment, p.a, m, Some(p.left), &mut evals));
                next.push(make_panel(p.segment, m, p.b, Some(p.right), &mut evals));
            } else {
                next.push(p);
            }
        }
        panels = next;
    }
}

/// Scalar convenience wrapper around [`integrate_path`].
pub fn integrate_scalar<F>(
    segments: &[Segment],
    poles: &[Complex64],
    cfg: &QuadratureConfig,
    f: F,
) -> Result<QuadratureResult<f64>>
where
    F: Fn(Complex64, Complex64) -> f64,
{
    let r = integrate_path(segments, poles, cfg, 1, |z, d| vec![f(z, d)])?;
    Ok(r.total.map(|v| v[0]))
}
