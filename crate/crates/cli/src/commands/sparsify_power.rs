//! Power iteration on a sparsified (or explicitly perturbed) matrix with the
//! certificate and multiply-count accounting.

use std::f64::consts::PI;

use eigenbound::bounds::BoundStatus;
use eigenbound::io::read_symmetric;
use eigenbound::power::{
    leading_eigvec_with_noise, sparsified_certificate, sparsified_leading_eigvec_with_spectrum, PowerConfig,
    SparsePowerOutcome, StartVector,
};
use eigenbound::SymmetricMatrix;
use serde_json::{Map, Value};

use super::{error_row, rate, run_trials, status_text, Ground, DOMINANCE_SLACK};
use crate::config::SparsifyPowerConfig;
use crate::error::{CliError, Result};
use crate::output::{Cell, Report};

pub const COLUMNS: &[&str] = &[
    "seed",
    "rho",
    "n",
    "iterations",
    "iterations_used",
    "error",
    "certificate",
    "certificate_status",
    "certificate_failure_probability",
    "dk_comparison",
    "noise_norm",
    "entry_bound",
    "nonzeros",
    "dense_ops",
    "sparse_ops",
    "speed_ratio",
    "rho_advisory",
    "stalled",
    "final_alignment",
    "rayleigh",
    "residual",
    "dominance",
    "status",
];

fn power_config(cfg: &SparsifyPowerConfig, seed: u64) -> PowerConfig {
    PowerConfig {
        max_iterations: cfg.iterations,
        start: StartVector::Seeded(seed),
        stop_tol: cfg.stop_tol,
    }
}

fn trial(
    cfg: &SparsifyPowerConfig,
    ground: &Ground,
    noise: Option<&SymmetricMatrix>,
    rho: f64,
    seed: u64,
) -> eigenbound::Result<SparsePowerOutcome> {
    let (a, d) = ground.instance(seed)?;
    let pc = power_config(cfg, seed);
    let mut out = match noise {
        Some(e) => leading_eigvec_with_noise(&a, &d, e, &pc)?,
        None => sparsified_leading_eigvec_with_spectrum(&a, &d, rho, seed, &pc)?,
    };
    if let (Some(k), None) = (cfg.entry_bound, noise) {
        out.entry_bound = k;
        out.certificate = BoundStatus::from_result(sparsified_certificate(&d, k, rho), |v| v)?;
        let delta_1 = d.eigenvalue(0) - d.eigenvalue(1);
        out.dk_comparison = PI * 2.0 * k * (d.dim() as f64 / rho).sqrt() / delta_1;
    }
    Ok(out)
}

fn dominance(o: &SparsePowerOutcome) -> Option<bool> {
    o.certificate.value().map(|c| o.error <= c + DOMINANCE_SLACK)
}

fn row(cfg: &SparsifyPowerConfig, seed: u64, n: usize, o: &SparsePowerOutcome) -> Vec<Cell> {
    let dense = n * n;
    vec![
        seed.into(),
        o.rho.into(),
        n.into(),
        cfg.iterations.into(),
        o.result.iterations_used.into(),
        o.error.into(),
        o.certificate.value().into(),
        status_text(&o.certificate).into(),
        o.certificate_failure_probability.into(),
        o.dk_comparison.into(),
        o.noise_norm.into(),
        o.entry_bound.into(),
        o.nonzeros.into(),
        dense.into(),
        o.nonzeros.into(),
        (dense as f64 / o.nonzeros.max(1) as f64).into(),
        o.rho_advisory.into(),
        o.result.stalled.into(),
        o.result.alignment_history.last().copied().into(),
        o.result.rayleigh.into(),
        o.result.residual.into(),
        dominance(o).into(),
        if o.rho_advisory { "ok: rho-advisory" } else { "ok" }.into(),
    ]
}

pub fn run(cfg: &SparsifyPowerConfig) -> Result<Report> {
    let ground = Ground::load(&cfg.ground)?;
    let noise = match &cfg.noise_file {
        Some(p) => {
            let e = read_symmetric(p)?;
            if e.dim() != ground.dim() {
                return Err(CliError::Config(format!(
                    "noise file {} is {}x{}, ground is {n}x{n}",
                    p.display(),
                    e.dim(),
                    e.dim(),
                    n = ground.dim()
                )));
            }
            Some(e)
        }
        None => None,
    };
    // An explicit noise matrix replaces sparsification, so the density sweep collapses to rho = 1.
    let rhos = if noise.is_some() { vec![1.0] } else { cfg.rho.clone() };
    let seeds = cfg.run.seeds();
    let jobs: Vec<(f64, u64)> = rhos.iter().flat_map(|&r| seeds.iter().map(move |&s| (r, s))).collect();
    let (results, wall_seconds) = run_trials(&jobs, |&(rho, s)| trial(cfg, &ground, noise.as_ref(), rho, s));

    let n = ground.dim();
    let mut rows = Vec::with_capacity(jobs.len());
    let mut per_rho: Vec<Map<String, Value>> = Vec::new();
    let (mut errors, mut violations) = (0, 0);
    for (ri, &rho) in rhos.iter().enumerate() {
        let chunk = &results[ri * seeds.len()..(ri + 1) * seeds.len()];
        let (mut covered, mut bad, mut advisory, mut errs) = (0, 0, 0, 0);
        let (mut err_sum, mut speed_sum, mut ok) = (0.0, 0.0, 0usize);
        for (&seed, res) in seeds.iter().zip(chunk) {
            match res {
                Ok(o) => {
                    covered += usize::from(o.certificate.value().is_some());
                    bad += usize::from(dominance(o) == Some(false));
                    advisory += usize::from(o.rho_advisory);
                    err_sum += o.error;
                    speed_sum += (n * n) as f64 / o.nonzeros.max(1) as f64;
                    ok += 1;
                    rows.push(row(cfg, seed, n, o));
                }
                Err(e) => {
                    errs += 1;
                    rows.push(error_row(COLUMNS.len(), vec![seed.into(), rho.into(), n.into()], &e.to_string()));
                }
            }
        }
        errors += errs;
        violations += bad;
        let mean = |s: f64| if ok == 0 { Value::Null } else { Value::from(s / ok as f64) };
        let mut m = Map::new();
        m.insert("rho".into(), Value::from(rho));
        m.insert("trials".into(), Value::from(seeds.len()));
        m.insert("errors".into(), Value::from(errs));
        m.insert("certificate_coverage".into(), Value::from(covered));
        m.insert("certificate_coverage_rate".into(), rate(covered, seeds.len()));
        m.insert("dominance_violations".into(), Value::from(bad));
        m.insert("rho_advisory".into(), Value::from(advisory));
        m.insert("mean_error".into(), mean(err_sum));
        m.insert("mean_speed_ratio".into(), mean(speed_sum));
        per_rho.push(m);
    }

    let failures = violations + errors;
    let mut summary = Map::new();
    summary.insert("command".into(), Value::from("sparsify-power"));
    summary.insert("trials".into(), Value::from(jobs.len()));
    summary.insert("errors".into(), Value::from(errors));
    summary.insert("dominance_violations".into(), Value::from(violations));
    summary.insert("by_rho".into(), Value::Array(per_rho.into_iter().map(Value::Object).collect()));
    summary.insert("failures".into(), Value::from(failures));
    Ok(Report {
        command: "sparsify-power",
        columns: COLUMNS,
        rows,
        summary,
        failures,
        wall_seconds,
    })
}
