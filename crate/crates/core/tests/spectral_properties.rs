use eigenbound::noise::{gaussian_matrix, wigner_matrix, SubGaussian};
use eigenbound::spectral::*;
use eigenbound::{SpectralNorm, SymmetricMatrix};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(48)
}

fn random_symmetric(n: usize, seed: u64) -> SymmetricMatrix {
    wigner_matrix(n, SubGaussian::Gaussian, seed)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn reconstruction_and_orthonormality(n in 1usize..12, seed in any::<u64>()) {
        let a = random_symmetric(n, seed);
        let d = spectral_decompose(&a).unwrap();
        let resid = (a.as_matrix() - d.reconstruct()).norm();
        prop_assert!(resid <= 1e-8 * a.frobenius_norm().max(1.0));
        let u = d.eigenvectors();
        let gram = u.transpose() * u - DMatrix::identity(n, n);
        prop_assert!(gram.norm() <= 1e-10 * n as f64);
        prop_assert!(d.eigenvalues().windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn projector_algebra(n in 2usize..10, seed in any::<u64>(), split in 1usize..9) {
        let split = split.min(n - 1);
        let d = spectral_decompose(&random_symmetric(n, seed)).unwrap();
        let s: Vec<usize> = (0..split).collect();
        let sc: Vec<usize> = (split..n).collect();
        let p = projector(&d, &s).unwrap();
        let q = projector(&d, &sc).unwrap();
        let pm = p.matrix();
        prop_assert!((pm * pm - pm).norm() <= 1e-9 * n as f64);
        prop_assert!((pm - pm.transpose()).amax() <= 1e-12);
        prop_assert!((pm.trace() - split as f64).abs() <= 1e-8);
        prop_assert!((pm * q.matrix()).amax() <= 1e-9);
        prop_assert!((pm + q.matrix() - DMatrix::identity(n, n)).amax() <= 1e-9);
    }

    #[test]
    fn resolvent_pole_structure(n in 1usize..8, seed in any::<u64>(), re in -5.0f64..5.0, im in 0.01f64..3.0) {
        let a = random_symmetric(n, seed);
        let d = spectral_decompose(&a).unwrap();
        let z = Complex64::new(re, im);
        let r = resolvent(&d, z).unwrap();
        let (dist, _) = distance_to_spectrum(d.eigenvalues(), z);
        let v = DVector::from_fn(n, |i, _| Complex64::new(1.0 / (n as f64).sqrt(), 0.0) * (i as f64 + 1.0).cos().signum());
        prop_assert!((r.as_matrix() * &v).norm() <= 1.0 / dist + 1e-8);
        let zi = DMatrix::<Complex64>::identity(n, n) * z - a.as_matrix().map(|x| Complex64::new(x, 0.0));
        prop_assert!((zi * r.as_matrix() - DMatrix::<Complex64>::identity(n, n)).norm() <= 1e-8);
    }

    #[test]
    fn dilation_spectrum_pairs_singular_values(m in 1usize..6, k in 1usize..6, seed in any::<u64>()) {
        let a = gaussian_matrix(m, k, seed);
        let dil = symmetric_dilation(&a).unwrap();
        let eig = symmetric_eigenvalues(&dil);
        let mut sv: Vec<f64> = a.singular_values().iter().copied().collect();
        sv.sort_by(|x, y| y.total_cmp(x));
        for (i, s) in sv.iter().enumerate() {
            prop_assert!((eig[i] - s).abs() <= 1e-8);
            prop_assert!((eig[m + k - 1 - i] + s).abs() <= 1e-8);
        }
        for e in &eig[sv.len()..m + k - sv.len()] {
            prop_assert!(e.abs() <= 1e-8);
        }
    }

    #[test]
    fn sine_distance_symmetry_and_triangle(n in 2usize..8, s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let p = leading_projector(&spectral_decompose(&random_symmetric(n, s1)).unwrap(), 1).unwrap();
        let q = leading_projector(&spectral_decompose(&random_symmetric(n, s2)).unwrap(), 1).unwrap();
        let r = leading_projector(&spectral_decompose(&random_symmetric(n, s3)).unwrap(), 1).unwrap();
        let pq = sine_distance(&p, &q).unwrap();
        prop_assert_eq!(pq, sine_distance(&q, &p).unwrap());
        prop_assert!((0.0..=1.0 + 1e-12).contains(&pq));
        let pr = sine_distance(&p, &r).unwrap();
        let qr = sine_distance(&q, &r).unwrap();
        prop_assert!(pr <= pq + qr + 1e-9);
    }

    #[test]
    fn spectral_norm_matches_singular_values(m in 1usize..7, k in 1usize..7, seed in any::<u64>()) {
        let a = gaussian_matrix(m, k, seed);
        let top = a.singular_values().max();
        prop_assert!((a.spectral_norm() - top).abs() <= 1e-9 * top.max(1.0));
        let c = a.map(|x| Complex64::new(x, -0.5 * x));
        let ctop = top * (1.25f64).sqrt();
        prop_assert!((c.spectral_norm() - ctop).abs() <= 1e-9 * ctop.max(1.0));
    }
}

#[test]
fn degenerate_blocks_give_basis_free_projectors() {
    let a = SymmetricMatrix::from_diagonal(&[2.0, 2.0, 1.0]);
    let d = spectral_decompose(&a).unwrap();
    let p = projector(&d, &[0, 1]).unwrap();
    let want = DMatrix::from_diagonal(&DVector::from_column_slice(&[1.0, 1.0, 0.0]));
    assert!((p.matrix() - want).amax() < 1e-14);
}

#[test]
fn singular_projectors_agree_with_svd() {
    let a = gaussian_matrix(5, 3, 17);
    let (left, right) = singular_projectors_via_dilation(&a, 2).unwrap();
    let svd = a.clone().svd(true, true);
    let mut order: Vec<usize> = (0..3).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let u = svd.u.unwrap();
    let vt = svd.v_t.unwrap();
    let mut pl = DMatrix::zeros(5, 5);
    let mut pr = DMatrix::zeros(3, 3);
    for &k in &order[..2] {
        let uk = u.column(k);
        let vk = vt.row(k).transpose();
        pl += &uk * uk.transpose();
        pr += &vk * vk.transpose();
    }
    assert!((left.matrix() - pl).amax() < 1e-10);
    assert!((right.matrix() - pr).amax() < 1e-10);
}
