//! Wavelet eigenvalue regression for high-dimensional fractal time series.
//!
//! Observations `Y(t) = P X(t) + Z(t)` mix an `r`-variate operator
//! fractional Brownian motion into `p >> r` coordinates and add noise. The
//! `r` largest eigenvalues of the per-octave wavelet covariance matrices
//! scale like `2^{j(2h_q+1)}`; regressing their logarithms across octaves
//! recovers the Hurst eigenvalues `h_q`, and the log-scale ratios `Δ_i`
//! separate scaling from non-scaling directions to estimate `r`.
//!
//! Pipeline: [`wavelet::pyramid_transform`] →
//! [`spectrum::octave_covariances`] → [`spectrum::log_eigen_spectrum`] →
//! [`estimators::estimate`]. [`sim`] synthesizes ground truth and
//! [`montecarlo`] replicates the whole chain.

pub mod commands;
pub mod config;
pub mod error;
pub mod estimators;
pub mod fmtnum;
pub mod linalg;
pub mod matrix;
pub mod montecarlo;
pub mod par;
pub mod pipeline;
pub mod rng;
pub mod series;
pub mod sim;
pub mod spectrum;
pub mod stats;
pub mod wavelet;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use series::MultivariateSeries;
