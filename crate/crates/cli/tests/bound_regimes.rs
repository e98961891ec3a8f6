//! Where the moderate-gap bound beats the Davis-Kahan corollary. With the
//! cross term removed the comparison is `24 log(6R)/R` against `π`, so the
//! new bound only wins once `R = |λ_p|/δ_p` is past about 53.

use std::path::Path;

use eigenbound::bounds::theorem_bound_value;
use eigenbound::io::write_symmetric;
use eigenbound::noise::{low_rank_ground, wigner_matrix, GroundSpec, SubGaussian};
use eigenbound::SymmetricMatrix;
use eigenbound_cli::commands::bound_compare;
use eigenbound_cli::config::{self, BoundCompareConfig, Validate};
use eigenbound_cli::Report;
use nalgebra::DMatrix;

/// `A = R u₁u₁ᵀ + (R−1) u₂u₂ᵀ` with Wigner noise projected off `span(u₁, u₂)`, so `x = 0`.
fn family(ratio: f64, seed: u64, dir: &Path) -> Report {
    let n = 200;
    let (a, d) = low_rank_ground(&GroundSpec {
        n,
        rank: 2,
        spectrum: vec![ratio, ratio - 1.0],
        seed,
    })
    .unwrap();
    let u = d.eigenvectors().columns(0, 2).into_owned();
    let q = DMatrix::identity(n, n) - &u * u.transpose();
    let w = wigner_matrix(n, SubGaussian::Gaussian, seed).scaled(0.008);
    let m = &q * w.as_matrix() * &q;
    let e = SymmetricMatrix::new((&m + m.transpose()) * 0.5).unwrap();
    let (pa, pe) = (dir.join(format!("a-{ratio}-{seed}.mtx")), dir.join(format!("e-{ratio}-{seed}.mtx")));
    write_symmetric(&pa, &a).unwrap();
    write_symmetric(&pe, &e).unwrap();
    let json = format!(
        r#"{{"version": 1, "ground": {{"kind": "file", "path": {:?}}}, "noise": {{"kind": "custom-file", "path": {:?}}}}}"#,
        pa.to_str().unwrap(),
        pe.to_str().unwrap()
    );
    let c: BoundCompareConfig = config::parse(&json).unwrap();
    c.validate().unwrap();
    bound_compare::run(&c).unwrap()
}

#[test]
fn large_ratio_favours_new_bound() {
    let dir = tempfile::tempdir().unwrap();
    for ratio in [64.0, 128.0] {
        for seed in 0..3 {
            let r = family(ratio, seed, dir.path());
            assert_eq!(r.failures, 0);
            assert!(r.floats("cross_term_x")[0].unwrap() <= 1e-12);
            let nb = r.floats("new_bound")[0].unwrap();
            let dk = r.floats("dk_corollary")[0].unwrap();
            assert!(nb < dk, "R = {ratio}: {nb} >= {dk}");
        }
    }
}

#[test]
fn small_ratio_favours_corollary() {
    let dir = tempfile::tempdir().unwrap();
    let r = family(8.0, 1, dir.path());
    assert_eq!(r.flags("new_below_corollary"), vec![Some(false)]);
}

#[test]
fn ratio_floor_without_cross_term() {
    for (ratio, wins) in [(8.0, false), (16.0, false), (32.0, false), (64.0, true)] {
        let nb = theorem_bound_value(1.0, ratio, ratio, 1.0, 2, 0.0);
        assert_eq!(nb < std::f64::consts::PI, wins, "R = {ratio}");
    }
}
