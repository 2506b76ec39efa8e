use fractal_eigen::estimators::{
    delta, ell_hat, kappa_sweep, r_hat, regression_weights, WeightScheme,
};
use fractal_eigen::linalg::{jacobi_eigen, sym_eigen};
use fractal_eigen::montecarlo::{chi2_cdf, chi2_quantile, mahalanobis_sq};
use fractal_eigen::spectrum::{
    log_eigen_spectrum, octave_covariances, LogEigenSpectrum, DEFAULT_EIGEN_FLOOR,
};
use fractal_eigen::wavelet::{make_filter_bank, pyramid_transform, valid_count, WaveletFamily};
use fractal_eigen::{Matrix, MultivariateSeries};
use proptest::prelude::*;

fn symmetric(p: usize, seed: &[f64]) -> Matrix {
    let mut m = Matrix::from_fn(p, p, |i, j| {
        seed[(i * p + j) % seed.len()] * (1.0 + ((i + 2 * j) % 5) as f64)
    });
    for i in 0..p {
        for j in 0..i {
            m[(j, i)] = m[(i, j)];
        }
    }
    m
}

fn series(rows: usize, n: usize, seed: &[f64]) -> MultivariateSeries {
    MultivariateSeries::new(Matrix::from_fn(rows, n, |i, t| {
        seed[(i * 31 + t) % seed.len()] + (t as f64 * 0.01 * (i + 1) as f64).sin()
    }))
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pyramid_is_linear(
        a in prop::collection::vec(-5.0f64..5.0, 37),
        b in prop::collection::vec(-5.0f64..5.0, 41),
        alpha in -3.0f64..3.0,
        beta in -3.0f64..3.0,
        order in 1usize..=4,
    ) {
        let filter = make_filter_bank(WaveletFamily::Daubechies, order).unwrap();
        let (n, p) = (256, 2);
        let y1 = series(p, n, &a);
        let y2 = series(p, n, &b);
        let mix = MultivariateSeries::new(y1.values().scale(alpha).add(&y2.values().scale(beta)).unwrap()).unwrap();
        let (d1, d2, dm) = (
            pyramid_transform(&y1, &filter, 4).unwrap(),
            pyramid_transform(&y2, &filter, 4).unwrap(),
            pyramid_transform(&mix, &filter, 4).unwrap(),
        );
        for ((o1, o2), om) in d1.octaves.iter().zip(&d2.octaves).zip(&dm.octaves) {
            prop_assert_eq!(om.count(), valid_count(n, om.j, filter.len()));
            let expect = o1.coeffs.scale(alpha).add(&o2.coeffs.scale(beta)).unwrap();
            let scale = 1.0 + expect.max_abs();
            prop_assert!(om.coeffs.sub(&expect).unwrap().max_abs() < 1e-12 * scale);
        }
    }

    #[test]
    fn weight_identities(j1 in 1u32..12, span in 0u32..8, counts in prop::collection::vec(1usize..5000, 12)) {
        let j2 = (j1 + span).min(12);
        let m = (j2 - j1 + 1) as usize;
        for scheme in [WeightScheme::UniformLs, WeightScheme::CountWeightedLs] {
            let w = regression_weights(j1, j2, &counts[..m], scheme).unwrap();
            let sw: f64 = w.w.iter().sum();
            let sjw: f64 = w.w.iter().zip(j1..=j2).map(|(w, j)| w * f64::from(j)).sum();
            let sv: f64 = w.v.iter().sum();
            if m == 1 {
                prop_assert_eq!(&w.w, &vec![1.0]);
                prop_assert_eq!(&w.v, &vec![1.0]);
            } else {
                prop_assert!(sw.abs() < 1e-12);
                prop_assert!((sjw - 1.0).abs() < 1e-12);
            }
            prop_assert!((sv - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn equal_counts_make_schemes_agree(j1 in 1u32..8, span in 1u32..6, count in 1usize..10_000) {
        let j2 = j1 + span;
        let counts = vec![count; (span + 1) as usize];
        let u = regression_weights(j1, j2, &counts, WeightScheme::UniformLs).unwrap();
        let c = regression_weights(j1, j2, &counts, WeightScheme::CountWeightedLs).unwrap();
        for (a, b) in u.w.iter().zip(&c.w) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn power_law_recovery_and_scale_shift(
        h in prop::collection::vec(0.05f64..0.95, 1..5),
        j1 in 1u32..6,
        span in 1u32..5,
        log_c in -10.0f64..10.0,
        counts in prop::collection::vec(1usize..4000, 5),
    ) {
        let j2 = j1 + span;
        let m = (span + 1) as usize;
        let mut sorted = h.clone();
        sorted.sort_by(f64::total_cmp);
        for scheme in [WeightScheme::UniformLs, WeightScheme::CountWeightedLs] {
            let w = regression_weights(j1, j2, &counts[..m], scheme).unwrap();
            let exact = |c: f64| {
                let per: Vec<Vec<f64>> = (j1..=j2)
                    .map(|j| sorted.iter().map(|h| c * 2f64.powf(f64::from(j) * (2.0 * h + 1.0))).collect())
                    .collect();
                LogEigenSpectrum::from_eigenvalues(j1, per, DEFAULT_EIGEN_FLOOR).unwrap()
            };
            let plain = exact(1.0);
            let shifted = exact(2f64.powf(log_c));
            let (e0, e1) = (ell_hat(&plain, &w).unwrap(), ell_hat(&shifted, &w).unwrap());
            let d0 = delta(&plain, &w).unwrap();
            let d1 = delta(&shifted, &w).unwrap();
            let offset: f64 = w.v.iter().zip(j1..=j2).map(|(v, j)| v * log_c / f64::from(j)).sum();
            for i in 0..sorted.len() {
                prop_assert!((e0[i].unwrap() - sorted[i]).abs() < 1e-12);
                prop_assert!((e1[i].unwrap() - e0[i].unwrap()).abs() < 1e-12);
                prop_assert!((d0[i] - (2.0 * sorted[i] + 1.0)).abs() < 1e-12);
                prop_assert!((d1[i] - d0[i] - offset).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn r_hat_is_nonincreasing_in_kappa(
        d in prop::collection::vec(-3.0f64..3.0, 1..30),
        grid in prop::collection::vec(0.001f64..4.0, 2..20),
    ) {
        let mut grid = grid;
        grid.sort_by(f64::total_cmp);
        let counts: Vec<usize> = grid.iter().map(|&k| r_hat(&d, k)).collect();
        prop_assert!(counts.windows(2).all(|w| w[0] >= w[1]));
        let sweep = kappa_sweep(std::slice::from_ref(&d), &grid, None).unwrap();
        prop_assert!(sweep.windows(2).all(|w| w[0].mean >= w[1].mean));
        let mut with_flags = d.clone();
        with_flags.push(f64::NEG_INFINITY);
        prop_assert_eq!(r_hat(&with_flags, grid[0]), r_hat(&d, grid[0]));
    }

    #[test]
    fn eigensolver_residuals(p in 1usize..40, seed in prop::collection::vec(-10.0f64..10.0, 1..50)) {
        let m = symmetric(p, &seed);
        let e = sym_eigen(&m).unwrap();
        let norm = m.norm_fro().max(1.0);
        prop_assert!(e.reconstruction_residual(&m) <= 1e-10 * norm);
        prop_assert!(e.orthogonality_residual() <= 1e-10);
        prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        let trace: f64 = e.values.iter().sum();
        prop_assert!((trace - m.trace()).abs() <= 1e-10 * norm);
    }

    #[test]
    fn eigensolvers_agree_on_small_matrices(p in 1usize..=8, seed in prop::collection::vec(-10.0f64..10.0, 1..64)) {
        let m = symmetric(p, &seed);
        let a = sym_eigen(&m).unwrap();
        let b = jacobi_eigen(&m).unwrap();
        let norm = m.norm_fro().max(1.0);
        for (x, y) in a.values.iter().zip(&b.values) {
            prop_assert!((x - y).abs() <= 1e-10 * norm);
        }
    }

    #[test]
    fn spectrum_invariants(
        p in 1usize..12,
        octaves in 1u32..5,
        seed in prop::collection::vec(-4.0f64..4.0, 5..60),
    ) {
        let filter = make_filter_bank(WaveletFamily::Daubechies, 2).unwrap();
        let y = series(p, 128, &seed);
        let pyr = pyramid_transform(&y, &filter, octaves).unwrap();
        let last = octaves.min(pyr.last_octave());
        let covs = octave_covariances(&pyr, 1, last).unwrap();
        let spec = log_eigen_spectrum(&covs, DEFAULT_EIGEN_FLOOR).unwrap();
        for (c, o) in covs.iter().zip(&spec.octaves) {
            let m = &c.matrix;
            prop_assert!(m.asymmetry() <= 1e-12);
            let energy: f64 = pyr.octave(c.j).unwrap().coeffs.as_slice().iter().map(|x| x * x).sum::<f64>() / c.n_j as f64;
            prop_assert!((m.trace() - energy).abs() <= 1e-10 * energy.max(1e-300));
            let sum: f64 = o.eigenvalues.iter().sum();
            prop_assert!((sum - m.trace()).abs() <= 1e-10 * m.trace().max(1e-300));
            prop_assert!(o.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
            prop_assert!(o.eigenvalues[0] >= -1e-10 * m.norm_fro());
            if p > c.n_j {
                prop_assert!(o.zero_count() >= p - c.n_j);
            }
            for (lam, log) in o.eigenvalues.iter().zip(&o.log2) {
                prop_assert_eq!(log.is_none(), lam.abs() < DEFAULT_EIGEN_FLOOR || *lam <= 0.0);
            }
        }
    }

    #[test]
    fn mahalanobis_identity_and_direct_oracle(
        r in 1usize..4,
        extra in 2usize..30,
        seed in prop::collection::vec(-3.0f64..3.0, 7..97),
    ) {
        let m = 5 * r + extra;
        let samples = Matrix::from_fn(m, r, |i, q| {
            seed[(i * 7 + q * 13) % seed.len()] + ((i * (q + 3)) as f64).sin() * (q + 1) as f64
        });
        let Ok(d2) = mahalanobis_sq(&samples) else { return Ok(()) };
        let total: f64 = d2.iter().sum();
        prop_assert!((total / (r * (m - 1)) as f64 - 1.0).abs() < 1e-8);
        let mut oracle = direct_mahalanobis(&samples);
        oracle.sort_by(f64::total_cmp);
        for (a, b) in d2.iter().zip(&oracle) {
            prop_assert!((a - b).abs() < 1e-10 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn chi2_quantile_inverts_cdf(dof in 1usize..12, x in 0.05f64..40.0) {
        let p = chi2_cdf(dof, x);
        prop_assume!(p > 1e-9 && p < 1.0 - 1e-9);
        let back = chi2_quantile(dof, p).unwrap();
        prop_assert!((back - x).abs() < 1e-6 * x.max(1.0));
    }
}

/// Mahalanobis distances via Gauss–Jordan inversion of the sample covariance.
fn direct_mahalanobis(samples: &Matrix) -> Vec<f64> {
    let (m, r) = (samples.rows(), samples.cols());
    let mean: Vec<f64> = (0..r)
        .map(|q| samples.column(q).iter().sum::<f64>() / m as f64)
        .collect();
    let mut a = vec![vec![0.0; 2 * r]; r];
    for (i, row) in a.iter_mut().enumerate() {
        for j in 0..r {
            row[j] = (0..m)
                .map(|k| (samples[(k, i)] - mean[i]) * (samples[(k, j)] - mean[j]))
                .sum::<f64>()
                / (m - 1) as f64;
        }
        row[r + i] = 1.0;
    }
    for col in 0..r {
        let pivot = (col..r)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .unwrap();
        a.swap(col, pivot);
        let d = a[col][col];
        for v in a[col].iter_mut() {
            *v /= d;
        }
        for row in 0..r {
            if row != col {
                let f = a[row][col];
                let pivot_row = a[col].clone();
                for (v, pv) in a[row].iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
            }
        }
    }
    (0..m)
        .map(|k| {
            let c: Vec<f64> = (0..r).map(|q| samples[(k, q)] - mean[q]).collect();
            (0..r)
                .map(|i| (0..r).map(|j| c[i] * a[i][r + j] * c[j]).sum::<f64>())
                .sum()
        })
        .collect()
}

#[test]
fn kappa_sweep_examples() {
    let s = kappa_sweep(&[vec![2.0]], &[0.5, 1.5, 2.5], None).unwrap();
    assert_eq!(
        s.iter().map(|k| k.mean).collect::<Vec<_>>(),
        vec![1.0, 1.0, 0.0]
    );
    let s = kappa_sweep(&[vec![0.9], vec![1.1]], &[1.0], Some(1)).unwrap();
    assert_eq!(s[0].mean, 0.5);
    assert_eq!(s[0].exact_match, Some(false));
    let same = vec![vec![0.1, 1.4, 2.2]; 5];
    let s = kappa_sweep(&same, &[0.3, 1.0], Some(2)).unwrap();
    assert_eq!((s[0].q05, s[0].mean, s[0].q95), (2.0, 2.0, 2.0));
    assert_eq!(s[0].exact_match, Some(true));
}

#[test]
fn large_random_symmetric_residuals() {
    let seed: Vec<f64> = (0..997)
        .map(|k| ((k * 7919) % 1009) as f64 / 100.0 - 5.0)
        .collect();
    let m = symmetric(50, &seed);
    let e = sym_eigen(&m).unwrap();
    assert!(e.reconstruction_residual(&m) <= 1e-10 * m.norm_fro());
    assert!(e.orthogonality_residual() <= 1e-10);
}
