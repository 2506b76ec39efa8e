//! Series → pyramid → wavelet spectrum → estimates.

use crate::error::{Error, Result};
use crate::estimators::{estimate, regression_weights, EstimationResult, WeightScheme};
use crate::series::MultivariateSeries;
use crate::spectrum::{log_eigen_spectrum, octave_covariances, LogEigenSpectrum};
use crate::wavelet::{pyramid_transform, valid_count, FilterPair};

#[derive(Debug, Clone)]
pub struct AnalysisSpec {
    pub filter: FilterPair,
    pub j1: u32,
    pub j2: u32,
    pub scheme: WeightScheme,
    pub eigen_floor: f64,
    pub kappa: f64,
    /// Latent dimension used for `ĥ`; `None` uses `r̂`.
    pub r: Option<usize>,
}

impl AnalysisSpec {
    /// Largest octave with at least one coefficient for length `n`.
    pub fn last_feasible_octave(&self, n: usize) -> u32 {
        (1..)
            .take_while(|&j| valid_count(n, j, self.filter.len()) > 0)
            .last()
            .unwrap_or(0)
    }

    pub fn check_feasible(&self, n: usize) -> Result<()> {
        if self.j1 < 1 || self.j1 > self.j2 {
            return Err(Error::param(
                "analysis.j1",
                format!("need 1 <= j1 <= j2, got ({}, {})", self.j1, self.j2),
            ));
        }
        let last = self.last_feasible_octave(n);
        if self.j2 > last {
            return Err(Error::InfeasibleOctave {
                requested: self.j2,
                n,
                last_feasible: last,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub spectrum: LogEigenSpectrum,
    pub estimate: EstimationResult,
}

pub fn analyze(series: &MultivariateSeries, spec: &AnalysisSpec) -> Result<Analysis> {
    spec.check_feasible(series.len())?;
    let pyramid = pyramid_transform(series, &spec.filter, spec.j2)?;
    let covariances = octave_covariances(&pyramid, spec.j1, spec.j2)?;
    let counts: Vec<usize> = covariances.iter().map(|c| c.n_j).collect();
    let spectrum = log_eigen_spectrum(&covariances, spec.eigen_floor)?;
    let weights = regression_weights(spec.j1, spec.j2, &counts, spec.scheme)?;
    let estimate = estimate(&spectrum, &weights, spec.kappa, spec.r)?;
    Ok(Analysis { spectrum, estimate })
}
