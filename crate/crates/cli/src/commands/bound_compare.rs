//! Measured eigenspace perturbation against every bound, per seed.

use eigenbound::bounds::{bound_report, BoundReport};
use eigenbound::spectral::spectral_decompose;
use serde_json::{Map, Value};

use super::{count_map, error_row, rate, run_trials, status_text, Ground, Noise, DOMINANCE_SLACK};
use crate::config::BoundCompareConfig;
use crate::error::{CliError, Result};
use crate::output::{Cell, Report};

pub const COLUMNS: &[&str] = &[
    "seed",
    "n",
    "subset",
    "p",
    "delta_p",
    "delta_s",
    "halving_index",
    "sigma_1",
    "lambda_p",
    "noise_norm",
    "cross_term_x",
    "weyl_gap",
    "perturbed_gap",
    "measured",
    "dk_classical",
    "dk_classical_status",
    "dk_corollary",
    "dk_corollary_status",
    "new_bound",
    "new_bound_status",
    "trivial_f1_bound",
    "trivial_f1_bound_status",
    "theorem_window",
    "new_below_corollary",
    "violations",
    "status",
];

fn trial(cfg: &BoundCompareConfig, ground: &Ground, noise: &Noise, seed: u64) -> eigenbound::Result<BoundReport> {
    let (a, d) = ground.instance(seed)?;
    let e = noise.sample(&a, seed)?;
    let dt = spectral_decompose(&a.add(&e)?)?;
    bound_report(&d, &dt, &e, &cfg.subset())
}

fn in_window(r: &BoundReport) -> bool {
    let window = ["4||E|| <= delta_p", "delta_p <= |lambda_p|/4"];
    let checks: Vec<_> = r.preconditions.iter().filter(|c| window.contains(&c.name.as_str())).collect();
    checks.len() == 2 && checks.iter().all(|c| c.satisfied)
}

fn new_below_corollary(r: &BoundReport) -> Option<bool> {
    Some(r.new_bound.value()? < r.dk_corollary.value()?)
}

fn row(seed: u64, n: usize, subset: &str, r: &BoundReport) -> Vec<Cell> {
    let pr = &r.profile;
    vec![
        seed.into(),
        n.into(),
        subset.into(),
        pr.p.into(),
        pr.delta_p.into(),
        pr.delta_s.into(),
        pr.halving_index.into(),
        pr.sigma_1.into(),
        pr.lambda_p.into(),
        r.noise_norm.into(),
        r.cross_term_x.into(),
        r.weyl_gap.into(),
        r.perturbed_gap.into(),
        r.measured.into(),
        r.dk_classical.value().into(),
        status_text(&r.dk_classical).into(),
        r.dk_corollary.value().into(),
        status_text(&r.dk_corollary).into(),
        r.new_bound.value().into(),
        status_text(&r.new_bound).into(),
        r.trivial_f1_bound.value().into(),
        status_text(&r.trivial_f1_bound).into(),
        in_window(r).into(),
        new_below_corollary(r).into(),
        r.violations(DOMINANCE_SLACK).join(";").into(),
        "ok".into(),
    ]
}

pub fn run(cfg: &BoundCompareConfig) -> Result<Report> {
    let ground = Ground::load(&cfg.ground)?;
    let noise = Noise::load(&cfg.noise, ground.dim())?;
    let subset = cfg.subset();
    if subset.len() >= ground.dim() || subset.iter().any(|&i| i >= ground.dim()) {
        return Err(CliError::Config(format!("subset {subset:?} is not a proper subset of 0..{}", ground.dim())));
    }
    let seeds = cfg.run.seeds();
    let subset_text = cfg.subset().iter().map(|i| i.to_string()).collect::<Vec<_>>().join(";");
    let (results, wall_seconds) = run_trials(&seeds, |&s| trial(cfg, &ground, &noise, s));

    let mut rows = Vec::with_capacity(seeds.len());
    let (mut errors, mut violations, mut window, mut below) = (0, 0, 0, 0);
    let mut covered = [0usize; 4];
    for (&seed, res) in seeds.iter().zip(&results) {
        match res {
            Ok(r) => {
                violations += r.violations(DOMINANCE_SLACK).len();
                window += usize::from(in_window(r));
                below += usize::from(new_below_corollary(r) == Some(true));
                for (c, b) in covered.iter_mut().zip([&r.dk_classical, &r.dk_corollary, &r.new_bound, &r.trivial_f1_bound]) {
                    *c += usize::from(b.value().is_some());
                }
                rows.push(row(seed, ground.dim(), &subset_text, r));
            }
            Err(e) => {
                errors += 1;
                rows.push(error_row(COLUMNS.len(), vec![seed.into(), ground.dim().into(), subset_text.as_str().into()], &e.to_string()));
            }
        }
    }

    let total = seeds.len();
    let names = ["dk_classical", "dk_corollary", "new_bound", "trivial_f1_bound"];
    let mut coverage_rate = Map::new();
    for (name, &c) in names.iter().zip(&covered) {
        coverage_rate.insert(name.to_string(), rate(c, total));
    }
    coverage_rate.insert("theorem_window".into(), rate(window, total));

    let failures = violations + errors;
    let mut summary = Map::new();
    summary.insert("command".into(), Value::from("bound-compare"));
    summary.insert("trials".into(), Value::from(total));
    summary.insert("errors".into(), Value::from(errors));
    summary.insert("dominance_violations".into(), Value::from(violations));
    summary.insert(
        "precondition_coverage".into(),
        Value::Object(count_map(names.iter().copied().zip(covered).chain([("theorem_window", window)]))),
    );
    summary.insert("precondition_coverage_rate".into(), Value::Object(coverage_rate));
    summary.insert("new_below_corollary".into(), Value::from(below));
    summary.insert("failures".into(), Value::from(failures));

    Ok(Report {
        command: "bound-compare",
        columns: COLUMNS,
        rows,
        summary,
        failures,
        wall_seconds,
    })
}
