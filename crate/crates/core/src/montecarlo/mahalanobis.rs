use crate::error::{Error, Result};
use crate::linalg::sym_eigen;
use crate::matrix::{cholesky, cholesky_solve, Matrix};

/// Condition number above which the sample covariance counts as singular.
pub const MAX_CONDITION: f64 = 1e12;

/// Sample mean and covariance (denominator `M - 1`) of the rows of `samples`.
pub fn sample_moments(samples: &Matrix) -> (Vec<f64>, Matrix) {
    let (m, r) = (samples.rows(), samples.cols());
    let mut mean = vec![0.0; r];
    for row in samples.row_iter() {
        for (acc, x) in mean.iter_mut().zip(row) {
            *acc += x;
        }
    }
    for x in &mut mean {
        *x /= m as f64;
    }
    let mut cov = Matrix::zeros(r, r);
    for row in samples.row_iter() {
        for a in 0..r {
            let da = row[a] - mean[a];
            for b in 0..=a {
                cov[(a, b)] += da * (row[b] - mean[b]);
            }
        }
    }
    for a in 0..r {
        for b in 0..=a {
            let v = cov[(a, b)] / (m as f64 - 1.0);
            cov[(a, b)] = v;
            cov[(b, a)] = v;
        }
    }
    (mean, cov)
}

/// Squared Mahalanobis distances of each row to the sample mean under the
/// sample covariance, sorted ascending.
pub fn mahalanobis_sq(samples: &Matrix) -> Result<Vec<f64>> {
    let (m, r) = (samples.rows(), samples.cols());
    if r == 0 || m <= r {
        return Err(Error::param(
            "samples",
            format!("need more samples than dimensions (M = {m}, r = {r})"),
        ));
    }
    let (mean, cov) = sample_moments(samples);
    let eig = sym_eigen(&cov)?;
    let (lo, hi) = (eig.values[0], eig.values[r - 1]);
    let condition = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    if !(condition <= MAX_CONDITION) || hi <= 0.0 {
        return Err(Error::SingularCovariance { condition });
    }
    let chol = cholesky(&cov).ok_or(Error::SingularCovariance { condition })?;
    let mut d2: Vec<f64> = samples
        .row_iter()
        .map(|row| {
            let centred: Vec<f64> = row.iter().zip(&mean).map(|(x, m)| x - m).collect();
            let solved = cholesky_solve(&chol, &centred);
            centred.iter().zip(&solved).map(|(a, b)| a * b).sum()
        })
        .collect();
    // Σ d² = r (M - 1) holds identically for the sample mean/covariance.
    let total: f64 = d2.iter().sum();
    let expected = (r * (m - 1)) as f64;
    if ((total - expected) / expected).abs() > 1e-8 {
        return Err(Error::Numerical(format!(
            "Mahalanobis identity violated: Σ d² = {total}, expected {expected}"
        )));
    }
    d2.sort_by(f64::total_cmp);
    Ok(d2)
}
