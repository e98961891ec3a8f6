//! Singular-subspace perturbation for rectangular and signed-spectrum instances.

use eigenbound::bounds::{rectangular_bound, singular_space_bound, singular_split_subset, BoundStatus};
use eigenbound::io::read_matrix_market;
use eigenbound::noise::{gaussian_matrix, rectangular_ground};
use eigenbound::spectral::{
    leading_singular_subset, projector, sine_distance, singular_projectors_via_dilation, spectral_decompose,
    symmetric_dilation, symmetric_eigenvalues,
};
use eigenbound::{Error, SpectralNorm};
use nalgebra::DMatrix;
use serde_json::{Map, Value};

use super::{error_row, rate, run_trials, status_text, Ground, Noise, DOMINANCE_SLACK};
use crate::config::{GroundConfig, InstanceConfig, NoiseConfig, SingularRectConfig};
use crate::error::{CliError, Result};
use crate::output::{Cell, Report};

/// Largest accepted deviation of the dilation spectrum from `±σ_i` and zeros.
pub const PAIRING_TOL: f64 = 1e-8;

pub const COLUMNS: &[&str] = &[
    "seed",
    "kind",
    "rows",
    "cols",
    "p",
    "k",
    "noise_norm",
    "sigma_1",
    "sigma_p",
    "delta",
    "r",
    "x_bar",
    "measured_left",
    "measured_right",
    "measured",
    "bound",
    "bound_status",
    "pairing_error",
    "pairing_ok",
    "dominance",
    "status",
];

enum Instance {
    Rect {
        shape: (usize, usize),
        singular_values: Vec<f64>,
    },
    FixedRect(DMatrix<f64>),
    Signed {
        ground: Ground,
        noise: Noise,
        k: usize,
    },
}

enum RectNoise {
    Gaussian(f64),
    Fixed(DMatrix<f64>),
    Zero,
}

struct Outcome {
    cells: Vec<Cell>,
    covered: bool,
    dominance: Option<bool>,
    pairing_ok: Option<bool>,
}

/// Largest deviation of the dilation eigenvalues from `(σ, 0, …, 0, −σ)`, with σ
/// from an independent SVD.
pub fn pairing_error(a: &DMatrix<f64>) -> eigenbound::Result<f64> {
    let (m, n) = a.shape();
    let eig = symmetric_eigenvalues(&symmetric_dilation(a)?);
    let mut sv: Vec<f64> = a.singular_values().iter().copied().collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    let q = sv.len();
    let mut worst: f64 = 0.0;
    for (i, s) in sv.iter().enumerate() {
        worst = worst.max((eig[i] - s).abs()).max((eig[m + n - 1 - i] + s).abs());
    }
    for e in &eig[q..m + n - q] {
        worst = worst.max(e.abs());
    }
    Ok(worst)
}

fn sorted_singular_values(a: &DMatrix<f64>) -> Vec<f64> {
    let mut sv: Vec<f64> = a.singular_values().iter().copied().collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

fn rect_trial(seed: u64, p: usize, a: &DMatrix<f64>, e: &DMatrix<f64>, kind: &str) -> eigenbound::Result<Outcome> {
    let (m, n) = a.shape();
    let pairing = pairing_error(a)?;
    let (pl, pr) = singular_projectors_via_dilation(a, p)?;
    let (ptl, ptr) = singular_projectors_via_dilation(&(a + e), p)?;
    let left = sine_distance(&ptl, &pl)?;
    let right = sine_distance(&ptr, &pr)?;
    let measured = left.max(right);
    let sv = sorted_singular_values(a);
    let sigma_p = sv[p - 1];
    let delta = sigma_p - sv.get(p).copied().unwrap_or(0.0);
    let (status, r, x_bar) = match rectangular_bound(a, e, p) {
        Ok(b) => (BoundStatus::Value(b.value), Some(b.r), Some(b.x_bar)),
        Err(Error::Precondition(f)) => (BoundStatus::Failed(f), None, None),
        Err(err) => return Err(err),
    };
    let dominance = status.value().map(|b| measured <= b + DOMINANCE_SLACK);
    let pairing_ok = pairing <= PAIRING_TOL;
    let cells = vec![
        seed.into(),
        kind.into(),
        m.into(),
        n.into(),
        p.into(),
        Cell::Empty,
        e.spectral_norm().into(),
        sv[0].into(),
        sigma_p.into(),
        delta.into(),
        r.map_or(Cell::Empty, Cell::from),
        x_bar.into(),
        left.into(),
        right.into(),
        measured.into(),
        status.value().into(),
        status_text(&status).into(),
        pairing.into(),
        pairing_ok.into(),
        dominance.into(),
        "ok".into(),
    ];
    Ok(Outcome {
        cells,
        covered: status.value().is_some(),
        dominance,
        pairing_ok: Some(pairing_ok),
    })
}

fn signed_trial(seed: u64, p: usize, ground: &Ground, noise: &Noise, k: usize) -> eigenbound::Result<Outcome> {
    let (a, d) = ground.instance(seed)?;
    let e = noise.sample(&a, seed)?;
    let n = a.dim();
    let dt = spectral_decompose(&a.add(&e)?)?;
    let split = singular_split_subset(n, p, k);
    let measured = sine_distance(&projector(&dt, &leading_singular_subset(&dt, p))?, &projector(&d, &split)?)?;
    let mut sv: Vec<f64> = d.eigenvalues().iter().map(|l| l.abs()).collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    let (status, r, x_bar, delta) = match singular_space_bound(&d, &e, p, k) {
        Ok(b) => (BoundStatus::Value(b.value), Some(b.r), Some(b.x_bar), Some(b.delta_k.min(b.delta_tail))),
        Err(Error::Precondition(f)) => (BoundStatus::Failed(f), None, None, None),
        Err(err) => return Err(err),
    };
    let dominance = status.value().map(|b| measured <= b + DOMINANCE_SLACK);
    let cells = vec![
        seed.into(),
        "signed".into(),
        n.into(),
        n.into(),
        p.into(),
        k.into(),
        e.spectral_norm().into(),
        sv[0].into(),
        sv[p - 1].into(),
        delta.into(),
        r.map_or(Cell::Empty, Cell::from),
        x_bar.into(),
        Cell::Empty,
        Cell::Empty,
        measured.into(),
        status.value().into(),
        status_text(&status).into(),
        Cell::Empty,
        Cell::Empty,
        dominance.into(),
        "ok".into(),
    ];
    Ok(Outcome {
        cells,
        covered: status.value().is_some(),
        dominance,
        pairing_ok: None,
    })
}

fn load_rect_noise(cfg: &NoiseConfig, shape: Option<(usize, usize)>) -> Result<RectNoise> {
    Ok(match cfg {
        NoiseConfig::Gaussian { scale } => RectNoise::Gaussian(*scale),
        NoiseConfig::Zero => RectNoise::Zero,
        NoiseConfig::CustomFile { path } => {
            let e = read_matrix_market(path)?;
            if let Some(s) = shape {
                if e.shape() != s {
                    return Err(CliError::Config(format!(
                        "noise file {} is {}x{}, instance is {}x{}",
                        path.display(),
                        e.nrows(),
                        e.ncols(),
                        s.0,
                        s.1
                    )));
                }
            }
            RectNoise::Fixed(e)
        }
        _ => return Err(CliError::Config("rectangular instances take gaussian, custom-file or zero noise".into())),
    })
}

pub fn run(cfg: &SingularRectConfig) -> Result<Report> {
    let instance = match &cfg.instance {
        InstanceConfig::Rectangular { rows, cols, singular_values } => Instance::Rect {
            shape: (*rows, *cols),
            singular_values: singular_values.clone(),
        },
        InstanceConfig::File { path } => Instance::FixedRect(read_matrix_market(path)?),
        InstanceConfig::Signed { n, spectrum, k } => {
            let ground = Ground::load(&GroundConfig::LowRank {
                n: *n,
                spectrum: spectrum.clone(),
            })?;
            let noise = Noise::load(&cfg.noise, *n)?;
            Instance::Signed { ground, noise, k: *k }
        }
    };
    let rect_noise = match &instance {
        Instance::Rect { shape, .. } => Some(load_rect_noise(&cfg.noise, Some(*shape))?),
        Instance::FixedRect(a) => Some(load_rect_noise(&cfg.noise, Some(a.shape()))?),
        Instance::Signed { .. } => None,
    };
    let sample_noise = |shape: (usize, usize), seed: u64| match rect_noise.as_ref().expect("rectangular noise") {
        RectNoise::Gaussian(s) => gaussian_matrix(shape.0, shape.1, seed).scale(*s),
        RectNoise::Fixed(e) => e.clone(),
        RectNoise::Zero => DMatrix::zeros(shape.0, shape.1),
    };
    let p = cfg.p;
    let shape = match &instance {
        Instance::Rect { shape, .. } => Some(*shape),
        Instance::FixedRect(a) => Some(a.shape()),
        Instance::Signed { .. } => None,
    };
    if let Some((m, n)) = shape {
        if p > m.min(n) {
            return Err(CliError::Config(format!("p = {p} exceeds min(rows, cols) = {}", m.min(n))));
        }
    }
    let seeds = cfg.run.seeds();
    let (results, wall_seconds) = run_trials(&seeds, |&seed| match &instance {
        Instance::Rect { shape, singular_values } => {
            let a = rectangular_ground(shape.0, shape.1, singular_values, seed)?;
            rect_trial(seed, p, &a, &sample_noise(*shape, seed), "rectangular")
        }
        Instance::FixedRect(a) => rect_trial(seed, p, a, &sample_noise(a.shape(), seed), "file"),
        Instance::Signed { ground, noise, k } => signed_trial(seed, p, ground, noise, *k),
    });

    let mut rows = Vec::with_capacity(seeds.len());
    let (mut errors, mut covered, mut violations, mut pairing_failures) = (0, 0, 0, 0);
    for (&seed, res) in seeds.iter().zip(results) {
        match res {
            Ok(o) => {
                covered += usize::from(o.covered);
                violations += usize::from(o.dominance == Some(false));
                pairing_failures += usize::from(o.pairing_ok == Some(false));
                rows.push(o.cells);
            }
            Err(e) => {
                errors += 1;
                rows.push(error_row(COLUMNS.len(), vec![seed.into()], &e.to_string()));
            }
        }
    }
    let total = seeds.len();
    let failures = errors + violations + pairing_failures;
    let mut summary = Map::new();
    summary.insert("command".into(), Value::from("singular-rect"));
    summary.insert("trials".into(), Value::from(total));
    summary.insert("errors".into(), Value::from(errors));
    summary.insert("precondition_coverage".into(), Value::from(covered));
    summary.insert("precondition_coverage_rate".into(), rate(covered, total));
    summary.insert("dominance_violations".into(), Value::from(violations));
    summary.insert("pairing_failures".into(), Value::from(pairing_failures));
    summary.insert("failures".into(), Value::from(failures));
    Ok(Report {
        command: "singular-rect",
        columns: COLUMNS,
        rows,
        summary,
        failures,
        wall_seconds,
    })
}
