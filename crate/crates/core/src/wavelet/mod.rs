//! Discrete wavelet multiresolution analysis.

mod filters;
mod pyramid;

pub use filters::{make_filter_bank, FilterPair, WaveletFamily, MAX_VANISHING};
pub use pyramid::{analysis_step, pyramid_transform, valid_count, DetailOctave, DetailPyramid};
