//! Wavelet eigenvalue regression, the log-scale diagnostics `Δ_i` and the
//! effective-dimension count `r̂`.

use std::io::{BufWriter, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fmtnum::Num;
use crate::spectrum::LogEigenSpectrum;
use crate::stats;

/// Threshold used when none is configured. Sits below `2 h_1 + 1` for every
/// Hurst eigenvalue `h_1 >= 0`.
pub const DEFAULT_KAPPA: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightScheme {
    /// Ordinary least-squares slope over the octaves.
    UniformLs,
    /// Least-squares slope weighted by the coefficient counts `n_j`.
    #[default]
    CountWeightedLs,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegressionWeights {
    pub j1: u32,
    pub j2: u32,
    pub scheme: WeightScheme,
    /// Slope weights: `Σ w = 0`, `Σ j w = 1`.
    pub w: Vec<f64>,
    /// Δ weights `v_j = j w_j`, so `Σ v = 1`.
    pub v: Vec<f64>,
}

impl RegressionWeights {
    pub fn octaves(&self) -> impl Iterator<Item = u32> {
        self.j1..=self.j2
    }
}

/// Regression weights over `j1..=j2`. `counts[k]` is `n_j` for `j = j1 + k`
/// and is only read by the count-weighted scheme.
pub fn regression_weights(
    j1: u32,
    j2: u32,
    counts: &[usize],
    scheme: WeightScheme,
) -> Result<RegressionWeights> {
    if j1 > j2 {
        return Err(Error::param(
            "octaves",
            format!("j1 = {j1} exceeds j2 = {j2}"),
        ));
    }
    let m = (j2 - j1 + 1) as usize;
    if j1 == j2 {
        return Ok(RegressionWeights {
            j1,
            j2,
            scheme,
            w: vec![1.0],
            v: vec![1.0],
        });
    }
    let b: Vec<f64> = match scheme {
        WeightScheme::UniformLs => vec![1.0; m],
        WeightScheme::CountWeightedLs => {
            if counts.len() != m {
                return Err(Error::param(
                    "counts",
                    format!("expected {m} coefficient counts, got {}", counts.len()),
                ));
            }
            if counts.contains(&0) {
                return Err(Error::param(
                    "counts",
                    "every octave needs at least one coefficient",
                ));
            }
            counts.iter().map(|&c| c as f64).collect()
        }
    };
    let js: Vec<f64> = (j1..=j2).map(f64::from).collect();
    let s0: f64 = b.iter().sum();
    let s1: f64 = b.iter().zip(&js).map(|(b, j)| b * j).sum();
    let s2: f64 = b.iter().zip(&js).map(|(b, j)| b * j * j).sum();
    let det = s0 * s2 - s1 * s1;
    if det <= 0.0 {
        return Err(Error::Numerical("degenerate regression design".into()));
    }
    let w: Vec<f64> = b
        .iter()
        .zip(&js)
        .map(|(b, j)| b * (s0 * j - s1) / det)
        .collect();
    let v = w.iter().zip(&js).map(|(w, j)| w * j).collect();
    Ok(RegressionWeights {
        j1,
        j2,
        scheme,
        w,
        v,
    })
}

fn check_coverage(spectrum: &LogEigenSpectrum, weights: &RegressionWeights) -> Result<()> {
    let expected: Vec<u32> = weights.octaves().collect();
    let got: Vec<u32> = spectrum.octaves.iter().map(|o| o.j).collect();
    if expected != got {
        return Err(Error::param(
            "spectrum",
            format!("covers octaves {got:?}, weights expect {expected:?}"),
        ));
    }
    Ok(())
}

/// Per-index log2 eigenvalues across the octaves, or `None` when any octave
/// flags the index as zero.
fn log_profile(spectrum: &LogEigenSpectrum, i: usize) -> Option<Vec<f64>> {
    spectrum.octaves.iter().map(|o| o.log2[i]).collect()
}

/// `ℓ̂_i = (Σ_j w_j log2 λ_i(W(2^j)) - 1) / 2`; `None` for indices flagged
/// zero at any octave.
pub fn ell_hat(
    spectrum: &LogEigenSpectrum,
    weights: &RegressionWeights,
) -> Result<Vec<Option<f64>>> {
    check_coverage(spectrum, weights)?;
    Ok((0..spectrum.dim())
        .map(|i| {
            log_profile(spectrum, i).map(|logs| {
                let slope: f64 = weights.w.iter().zip(&logs).map(|(w, l)| w * l).sum();
                0.5 * (slope - 1.0)
            })
        })
        .collect())
}

/// `Δ_i = Σ_j v_j log2 λ_i(W(2^j)) / j`; `-∞` for flagged indices.
pub fn delta(spectrum: &LogEigenSpectrum, weights: &RegressionWeights) -> Result<Vec<f64>> {
    check_coverage(spectrum, weights)?;
    Ok((0..spectrum.dim())
        .map(|i| match log_profile(spectrum, i) {
            Some(logs) => weights
                .v
                .iter()
                .zip(weights.octaves())
                .zip(&logs)
                .map(|((v, j), l)| v * l / f64::from(j))
                .sum(),
            None => f64::NEG_INFINITY,
        })
        .collect())
}

/// The top `r` entries of `ell` (ascending index order), i.e. the Hurst
/// eigenvalue estimates when the latent dimension is `r`.
pub fn h_hat(ell: &[Option<f64>], r: usize) -> Result<Vec<f64>> {
    let p = ell.len();
    if r > p {
        return Err(Error::param(
            "r",
            format!("r = {r} exceeds dimension p = {p}"),
        ));
    }
    ell[p - r..]
        .iter()
        .enumerate()
        .map(|(q, e)| {
            e.ok_or_else(|| {
                let defined = ell.iter().rev().take_while(|e| e.is_some()).count();
                Error::Undefined(format!(
                    "h_{} (index {}) sits on a zero eigenvalue; only the top {defined} estimates are defined",
                    q + 1,
                    p - r + q + 1
                ))
            })
        })
        .collect()
}

/// `#{i : Δ_i > κ}`.
pub fn r_hat(delta: &[f64], kappa: f64) -> usize {
    delta.iter().filter(|&&d| d > kappa).count()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KappaPoint {
    pub kappa: f64,
    pub mean: f64,
    pub q05: f64,
    pub q95: f64,
    /// Mean equals the true dimension exactly; `None` without a truth.
    pub exact_match: Option<bool>,
}

/// `r̂(κ)` summarized over replications for every κ of the grid.
pub fn kappa_sweep(
    delta_samples: &[Vec<f64>],
    grid: &[f64],
    truth: Option<usize>,
) -> Result<Vec<KappaPoint>> {
    if delta_samples.is_empty() || grid.is_empty() {
        return Err(Error::param(
            "kappa_sweep",
            "samples and grid must be nonempty",
        ));
    }
    Ok(grid
        .iter()
        .map(|&kappa| {
            let mut counts: Vec<f64> = delta_samples
                .iter()
                .map(|d| r_hat(d, kappa) as f64)
                .collect();
            counts.sort_by(f64::total_cmp);
            let mean = stats::mean(&counts);
            KappaPoint {
                kappa,
                mean,
                q05: stats::quantile_sorted(&counts, 0.05),
                q95: stats::quantile_sorted(&counts, 0.95),
                exact_match: truth.map(|r| mean == r as f64),
            }
        })
        .collect())
}

/// Evenly spaced grid `k / steps`, `k = 1..steps`, inside (0, 1).
pub fn default_kappa_grid() -> Vec<f64> {
    (1..100).map(|k| k as f64 / 100.0).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimationResult {
    pub ell_hat: Vec<Option<f64>>,
    pub h_hat: Vec<f64>,
    pub delta: Vec<f64>,
    pub r_hat: usize,
    /// Dimension used to extract `h_hat`: the override when given, else `r_hat`.
    pub r_used: usize,
    pub kappa: f64,
    pub weights: RegressionWeights,
}

impl EstimationResult {
    pub fn octaves(&self) -> (u32, u32) {
        (self.weights.j1, self.weights.j2)
    }

    /// CSV with columns `i,ell_hat,delta,flagged`; undefined values are empty.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = BufWriter::new(out);
        writeln!(w, "i,ell_hat,delta,flagged")?;
        for (i, (ell, d)) in self.ell_hat.iter().zip(&self.delta).enumerate() {
            match ell {
                Some(e) => writeln!(w, "{},{},{},0", i + 1, Num(*e), Num(*d))?,
                None => writeln!(w, "{},,,1", i + 1)?,
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn summary(&self) -> EstimationSummary {
        EstimationSummary {
            octaves: [self.weights.j1, self.weights.j2],
            weights: self.weights.clone(),
            r_hat: self.r_hat,
            r_used: self.r_used,
            kappa: self.kappa,
            h_hat: self.h_hat.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EstimationSummary {
    pub octaves: [u32; 2],
    pub weights: RegressionWeights,
    pub r_hat: usize,
    pub r_used: usize,
    pub kappa: f64,
    pub h_hat: Vec<f64>,
}

/// Full estimate from a spectrum. With `r = None` the estimated `r̂` selects
/// the Hurst block.
pub fn estimate(
    spectrum: &LogEigenSpectrum,
    weights: &RegressionWeights,
    kappa: f64,
    r: Option<usize>,
) -> Result<EstimationResult> {
    if !(kappa > 0.0) {
        return Err(Error::param("kappa", "must be positive"));
    }
    let ell = ell_hat(spectrum, weights)?;
    let delta = delta(spectrum, weights)?;
    let r_hat = r_hat(&delta, kappa);
    let r_used = r.unwrap_or(r_hat);
    let h_hat = h_hat(&ell, r_used)?;
    Ok(EstimationResult {
        ell_hat: ell,
        h_hat,
        delta,
        r_hat,
        r_used,
        kappa,
        weights: weights.clone(),
    })
}
