//! Additive noise: i.i.d. Gaussian or entrywise independent ARMA rows.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::series::MultivariateSeries;

#[derive(Debug, Clone, PartialEq)]
pub enum NoiseSpec {
    IidGaussian {
        variance: f64,
    },
    /// `x_t = Σ φ_i x_{t-i} + e_t + Σ θ_j e_{t-j}`, `e_t ~ N(0, variance)`.
    Arma {
        ar: Vec<f64>,
        ma: Vec<f64>,
        variance: f64,
    },
    None,
}

impl NoiseSpec {
    pub fn arma(ar: Vec<f64>, ma: Vec<f64>, variance: f64) -> Result<Self> {
        let spec = NoiseSpec::Arma { ar, ma, variance };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            NoiseSpec::None => Ok(()),
            NoiseSpec::IidGaussian { variance } => check_variance(*variance),
            NoiseSpec::Arma { ar, ma, variance } => {
                check_variance(*variance)?;
                if ar.iter().chain(ma).any(|c| !c.is_finite()) {
                    return Err(Error::param("noise", "ARMA coefficients must be finite"));
                }
                let radius = spectral_radius(ar);
                if radius >= 1.0 {
                    return Err(Error::param(
                        "noise.ar",
                        format!(
                            "autoregressive polynomial has a root inside or on the unit circle \
                             (largest inverse root modulus {radius:.6})"
                        ),
                    ));
                }
                Ok(())
            }
        }
    }
}

fn check_variance(v: f64) -> Result<()> {
    if !(v >= 0.0 && v.is_finite()) {
        return Err(Error::param(
            "noise.variance",
            format!("{v} is not a valid variance"),
        ));
    }
    Ok(())
}

/// Roots of `z^p - φ_1 z^{p-1} - … - φ_p`, the reciprocals of the roots of
/// the autoregressive polynomial `1 - φ_1 z - … - φ_p z^p` (Durand–Kerner).
pub fn inverse_ar_roots(ar: &[f64]) -> Vec<Complex64> {
    let mut coeffs: Vec<f64> = ar.to_vec();
    while coeffs.last() == Some(&0.0) {
        coeffs.pop();
    }
    let p = coeffs.len();
    if p == 0 {
        return Vec::new();
    }
    // monic polynomial z^p + c_1 z^{p-1} + ... + c_p with c_i = -φ_i
    let eval = |z: Complex64| {
        coeffs
            .iter()
            .fold(Complex64::new(1.0, 0.0), |acc, &phi| acc * z - phi)
    };
    let bound = 1.0 + coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..p).map(|k| seed.powu(k as u32) * bound * 0.5).collect();
    for _ in 0..1000 {
        let mut moved = 0.0f64;
        for i in 0..p {
            let zi = roots[i];
            let denom = roots
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != i)
                .fold(Complex64::new(1.0, 0.0), |acc, (_, zk)| acc * (zi - zk));
            if denom.norm() == 0.0 {
                roots[i] += Complex64::new(1e-8, 1e-8);
                moved = f64::INFINITY;
                continue;
            }
            let step = eval(zi) / denom;
            roots[i] = zi - step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-15 * bound {
            break;
        }
    }
    roots
}

fn spectral_radius(ar: &[f64]) -> f64 {
    inverse_ar_roots(ar)
        .iter()
        .fold(0.0, |m, z| m.max(z.norm()))
}

/// Warm-up length discarded before recording an ARMA path:
/// `ceil(10 (p + q + 1/(1 - ρ)))`, at least 512, with `ρ` the largest
/// inverse-root modulus of the AR polynomial.
pub fn arma_burn_in(ar: &[f64], ma: &[f64]) -> usize {
    let rho = spectral_radius(ar);
    let len = 10.0 * ((ar.len() + ma.len()) as f64 + 1.0 / (1.0 - rho));
    (len.ceil() as usize).max(512)
}

/// `p x n` noise matrix; rows are independent realizations.
pub fn synthesize_noise<R: Rng + ?Sized>(
    spec: &NoiseSpec,
    p: usize,
    n: usize,
    rng: &mut R,
) -> Result<MultivariateSeries> {
    spec.validate()?;
    let mut out = Matrix::zeros(p, n);
    match spec {
        NoiseSpec::None => {}
        NoiseSpec::IidGaussian { variance } => {
            let sd = variance.sqrt();
            for i in 0..p {
                for x in out.row_mut(i) {
                    let z: f64 = rng.sample(StandardNormal);
                    *x = sd * z;
                }
            }
        }
        NoiseSpec::Arma { ar, ma, variance } => {
            let sd = variance.sqrt();
            let burn = arma_burn_in(ar, ma);
            let total = burn + n;
            let mut x = vec![0.0; total];
            let mut e = vec![0.0; total];
            for i in 0..p {
                for t in 0..total {
                    let z: f64 = rng.sample(StandardNormal);
                    e[t] = sd * z;
                    let mut v = e[t];
                    for (lag, phi) in ar.iter().enumerate() {
                        if t > lag {
                            v += phi * x[t - lag - 1];
                        }
                    }
                    for (lag, theta) in ma.iter().enumerate() {
                        if t > lag {
                            v += theta * e[t - lag - 1];
                        }
                    }
                    x[t] = v;
                }
                out.row_mut(i).copy_from_slice(&x[burn..]);
            }
        }
    }
    MultivariateSeries::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream_rng, Stream};

    /// AR(2) stationarity triangle: |φ2| < 1, φ2 + φ1 < 1, φ2 - φ1 < 1.
    fn ar2_stationary(phi1: f64, phi2: f64) -> bool {
        phi2.abs() < 1.0 && phi2 + phi1 < 1.0 && phi2 - phi1 < 1.0
    }

    #[test]
    fn stationarity_matches_ar2_triangle() {
        let grid = [-1.9, -1.2, -0.7, -0.3, 0.0, 0.4, 0.9, 1.3, 1.8];
        for &a in &grid {
            for &b in &[-0.95, -0.5, 0.0, 0.3, 0.6, 0.95] {
                let ok = NoiseSpec::arma(vec![a, b], vec![], 1.0).is_ok();
                assert_eq!(ok, ar2_stationary(a, b), "phi = ({a}, {b})");
            }
        }
    }

    #[test]
    fn ar1_roots_and_burn_in() {
        let roots = inverse_ar_roots(&[0.5]);
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - Complex64::new(0.5, 0.0)).norm() < 1e-14);
        assert_eq!(arma_burn_in(&[0.5], &[]), 512);
        // ρ = 0.999 → 10 (1 + 1000) = 10010
        assert_eq!(arma_burn_in(&[0.999], &[]), 10010);
        assert!(NoiseSpec::arma(vec![1.0], vec![], 1.0).is_err());
        assert!(NoiseSpec::arma(vec![0.3], vec![5.0], 1.0).is_ok());
    }

    #[test]
    fn none_is_zero() {
        let z = synthesize_noise(
            &NoiseSpec::None,
            3,
            10,
            &mut stream_rng(0, 0, Stream::Noise),
        )
        .unwrap();
        assert_eq!(z, MultivariateSeries::zeros(3, 10));
    }

    #[test]
    fn iid_variance() {
        let n = 1 << 14;
        let spec = NoiseSpec::IidGaussian { variance: 1.0 };
        let z = synthesize_noise(&spec, 2, n, &mut stream_rng(3, 0, Stream::Noise)).unwrap();
        // standard error of the sample variance is sqrt(2/n)
        let se = (2.0 / n as f64).sqrt();
        for i in 0..2 {
            let v = z.row(i).iter().map(|x| x * x).sum::<f64>() / n as f64;
            assert!((v - 1.0).abs() < 3.0 * se, "row {i}: {v}");
        }
    }

    #[test]
    fn ar1_lag_one_autocorrelation() {
        let n = 1 << 14;
        let spec = NoiseSpec::arma(vec![0.5], vec![], 1.0).unwrap();
        let z = synthesize_noise(&spec, 1, n, &mut stream_rng(4, 0, Stream::Noise)).unwrap();
        let x = z.row(0);
        let m = x.iter().sum::<f64>() / n as f64;
        let c0: f64 = x.iter().map(|a| (a - m) * (a - m)).sum();
        let c1: f64 = x.windows(2).map(|w| (w[0] - m) * (w[1] - m)).sum();
        let rho = c1 / c0;
        // Bartlett: Var(ρ̂(1)) ≈ (1 - φ²)/n
        let se = ((1.0 - 0.25) / n as f64).sqrt();
        assert!((rho - 0.5).abs() < 3.0 * se, "{rho}");
    }
}
