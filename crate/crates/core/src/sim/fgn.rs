//! Multivariate fractional Gaussian noise by circulant matrix embedding.
//!
//! The latent process is the time-reversible operator fBm with diagonal
//! Hurst matrix: component pair `(a, b)` has increment cross-covariance
//! `γ_ab(k) = σ_ab/2 (|k-1|^{h_a+h_b} - 2|k|^{h_a+h_b} + |k+1|^{h_a+h_b})`.
//! The lag sequence is embedded in a circulant of size `2n`; its FFT gives a
//! real symmetric `r x r` spectral matrix per frequency, whose PSD square
//! root colours complex white noise before an inverse FFT.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rustfft::{Fft, FftPlanner};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::sym_eigen;
use crate::matrix::Matrix;
use crate::rng::{stream_rng, Stream};
use crate::series::MultivariateSeries;

/// Relative spectral energy that may be clipped before the embedding is
/// reported as approximate.
pub const CLIP_ENERGY_TOLERANCE: f64 = 1e-6;

/// Increment cross-covariance at integer `lag` of the time-reversible
/// fractional Gaussian noise pair with exponents `h_a`, `h_b`.
pub fn fgn_cross_covariance(h_a: f64, h_b: f64, sigma_ab: f64, lag: i64) -> f64 {
    let e = h_a + h_b;
    let k = lag.unsigned_abs() as f64;
    let pow = |x: f64| if x == 0.0 { 0.0 } else { x.powf(e) };
    0.5 * sigma_ab * (pow((k - 1.0).abs()) - 2.0 * pow(k) + pow(k + 1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct OfBmSpec {
    /// Hurst eigenvalues, nondecreasing, each in (0, 1).
    pub hurst: Vec<f64>,
    /// `E B(1) B(1)ᵀ`.
    pub point_cov: Matrix,
}

impl OfBmSpec {
    pub fn new(hurst: Vec<f64>, point_cov: Matrix) -> Result<Self> {
        let spec = OfBmSpec { hurst, point_cov };
        spec.validate()?;
        Ok(spec)
    }

    /// Independent unit-variance components.
    pub fn independent(hurst: Vec<f64>) -> Result<Self> {
        let r = hurst.len();
        Self::new(hurst, Matrix::identity(r))
    }

    pub fn dim(&self) -> usize {
        self.hurst.len()
    }

    pub fn validate(&self) -> Result<()> {
        let r = self.hurst.len();
        if r == 0 {
            return Err(Error::param("hurst", "needs at least one component"));
        }
        if let Some(h) = self.hurst.iter().find(|h| !(**h > 0.0 && **h < 1.0)) {
            return Err(Error::param("hurst", format!("{h} is outside (0, 1)")));
        }
        if self.hurst.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::param("hurst", "must be sorted nondecreasing"));
        }
        let s = &self.point_cov;
        if s.rows() != r || s.cols() != r {
            return Err(Error::param(
                "point_cov",
                format!("expected {r}x{r}, got {}x{}", s.rows(), s.cols()),
            ));
        }
        if !s.is_finite() {
            return Err(Error::param("point_cov", "contains non-finite entries"));
        }
        if let Some(q) = (0..r).find(|&q| s[(q, q)] <= 0.0) {
            return Err(Error::param(
                "point_cov",
                format!("diagonal entry {q} is not positive"),
            ));
        }
        if s.asymmetry() > 1e-10 {
            return Err(Error::param("point_cov", "must be symmetric"));
        }
        let min_eig = sym_eigen(s)?.values[0];
        if min_eig < -1e-10 * s.max_abs().max(1.0) {
            return Err(Error::param(
                "point_cov",
                format!("not positive semidefinite (smallest eigenvalue {min_eig:e})"),
            ));
        }
        Ok(())
    }
}

/// Diagnostics of the spectral factorization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SynthesisReport {
    /// Σ|negative spectral eigenvalues| / Σ|spectral eigenvalues|.
    pub clipped_energy: f64,
    /// `clipped_energy` exceeds [`CLIP_ENERGY_TOLERANCE`].
    pub approximate: bool,
}

/// Precomputed circulant factorization for one `(spec, n)`; sampling is
/// then one complex Gaussian draw and `r` inverse FFTs per realization.
pub struct CirculantEmbedding {
    r: usize,
    n: usize,
    m: usize,
    /// Row-major `r x r` square root per frequency, pre-scaled by `1/sqrt(m)`.
    roots: Vec<f64>,
    ifft: Arc<dyn Fft<f64>>,
    report: SynthesisReport,
}

impl std::fmt::Debug for CirculantEmbedding {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CirculantEmbedding")
            .field("r", &self.r)
            .field("n", &self.n)
            .field("report", &self.report)
            .finish()
    }
}

impl CirculantEmbedding {
    pub fn new(spec: &OfBmSpec, n: usize) -> Result<Self> {
        spec.validate()?;
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::param(
                "n",
                format!("must be a power of two >= 2, got {n}"),
            ));
        }
        let r = spec.dim();
        let m = 2 * n;
        let mut planner = FftPlanner::<f64>::new();
        let fft = planner.plan_fft_forward(m);

        // spectra[f * r * r + a * r + b]
        let mut spectra = vec![0.0; m * r * r];
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        for a in 0..r {
            for b in a..r {
                let (ha, hb, s) = (spec.hurst[a], spec.hurst[b], spec.point_cov[(a, b)]);
                for (k, slot) in buf.iter_mut().enumerate() {
                    let lag = if k <= n { k } else { m - k };
                    *slot = Complex64::new(fgn_cross_covariance(ha, hb, s, lag as i64), 0.0);
                }
                fft.process(&mut buf);
                for (f, value) in buf.iter().enumerate() {
                    spectra[f * r * r + a * r + b] = value.re;
                    spectra[f * r * r + b * r + a] = value.re;
                }
            }
        }

        let scale = 1.0 / (m as f64).sqrt();
        let mut roots = vec![0.0; m * r * r];
        let mut negative = 0.0;
        let mut total = 0.0;
        for f in 0..m {
            let block = &spectra[f * r * r..(f + 1) * r * r];
            let root = &mut roots[f * r * r..(f + 1) * r * r];
            if r == 1 {
                let l = block[0];
                total += l.abs();
                if l < 0.0 {
                    negative -= l;
                }
                root[0] = l.max(0.0).sqrt() * scale;
                continue;
            }
            let s = Matrix::from_vec(r, r, block.to_vec())?;
            let eig = sym_eigen(&s)?;
            for &l in &eig.values {
                total += l.abs();
                if l < 0.0 {
                    negative -= l;
                }
            }
            let sq: Vec<f64> = eig
                .values
                .iter()
                .map(|l| l.max(0.0).sqrt() * scale)
                .collect();
            for a in 0..r {
                for b in 0..r {
                    root[a * r + b] = (0..r)
                        .map(|k| eig.vectors[(a, k)] * sq[k] * eig.vectors[(b, k)])
                        .sum();
                }
            }
        }
        let clipped_energy = if total > 0.0 { negative / total } else { 0.0 };
        Ok(CirculantEmbedding {
            r,
            n,
            m,
            roots,
            ifft: planner.plan_fft_inverse(m),
            report: SynthesisReport {
                clipped_energy,
                approximate: clipped_energy > CLIP_ENERGY_TOLERANCE,
            },
        })
    }

    pub fn report(&self) -> SynthesisReport {
        self.report
    }

    pub fn dim(&self) -> usize {
        self.r
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// One `r x n` realization of the increments.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> MultivariateSeries {
        let (r, m) = (self.r, self.m);
        // component-major frequency buffers
        let mut freq = vec![Complex64::new(0.0, 0.0); r * m];
        let mut xi = vec![0.0; r];
        let mut eta = vec![0.0; r];
        for f in 0..m {
            for q in 0..r {
                xi[q] = rng.sample(StandardNormal);
                eta[q] = rng.sample(StandardNormal);
            }
            let root = &self.roots[f * r * r..(f + 1) * r * r];
            for a in 0..r {
                let row = &root[a * r..(a + 1) * r];
                let re: f64 = row.iter().zip(&xi).map(|(c, x)| c * x).sum();
                let im: f64 = row.iter().zip(&eta).map(|(c, x)| c * x).sum();
                freq[a * m + f] = Complex64::new(re, im);
            }
        }
        let mut out = Matrix::zeros(r, self.n);
        for a in 0..r {
            let chunk = &mut freq[a * m..(a + 1) * m];
            self.ifft.process(chunk);
            for (dst, z) in out.row_mut(a).iter_mut().zip(chunk.iter()) {
                *dst = z.re;
            }
        }
        MultivariateSeries::new(out).expect("finite synthesis")
    }
}

/// Increments of the latent ofBm, `r x n`, drawn from stream `(seed, 0)`.
pub fn synthesize_ofbm_increments(
    spec: &OfBmSpec,
    n: usize,
    seed: u64,
) -> Result<(MultivariateSeries, SynthesisReport)> {
    let embedding = CirculantEmbedding::new(spec, n)?;
    let mut rng = stream_rng(seed, 0, Stream::Signal);
    Ok((embedding.sample(&mut rng), embedding.report()))
}
