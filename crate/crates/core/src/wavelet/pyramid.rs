//! Mallat's pyramid restricted to border-free coefficients.
//!
//! Every level uses valid-only convolution: detail index `k` at the next
//! level is the filter window starting at approximation index `2k`, and
//! windows that would run past the end of the data are dropped. Each
//! retained coefficient therefore depends on observed samples only.

use super::filters::FilterPair;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::par;
use crate::series::MultivariateSeries;

/// Detail coefficients of one octave, `p x n_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct DetailOctave {
    pub j: u32,
    pub coeffs: Matrix,
}

impl DetailOctave {
    pub fn count(&self) -> usize {
        self.coeffs.cols()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetailPyramid {
    /// Octaves `1..=last`, in increasing order.
    pub octaves: Vec<DetailOctave>,
    pub requested: u32,
    /// Set when the pyramid stopped before `requested` because the
    /// coefficient count reached zero.
    pub truncated: bool,
}

impl DetailPyramid {
    pub fn octave(&self, j: u32) -> Option<&DetailOctave> {
        self.octaves.iter().find(|o| o.j == j)
    }

    pub fn last_octave(&self) -> u32 {
        self.octaves.last().map_or(0, |o| o.j)
    }

    pub fn counts(&self) -> Vec<(u32, usize)> {
        self.octaves.iter().map(|o| (o.j, o.count())).collect()
    }
}

/// Border-free coefficient count at octave `j` for a series of length `n`
/// and filter length `filter_len`; 0 when the octave is out of reach.
pub fn valid_count(n: usize, j: u32, filter_len: usize) -> usize {
    let mut count = n;
    for _ in 0..j {
        if count < filter_len {
            return 0;
        }
        count = (count - filter_len) / 2 + 1;
    }
    count
}

/// One analysis level: returns `(approximation, detail)` of the next octave.
pub fn analysis_step(approx: &[f64], filter: &FilterPair) -> (Vec<f64>, Vec<f64>) {
    let l = filter.len();
    if approx.len() < l {
        return (Vec::new(), Vec::new());
    }
    let out = (approx.len() - l) / 2 + 1;
    let mut a = Vec::with_capacity(out);
    let mut d = Vec::with_capacity(out);
    for k in 0..out {
        let window = &approx[2 * k..2 * k + l];
        let mut sa = 0.0;
        let mut sd = 0.0;
        for ((x, u), v) in window.iter().zip(&filter.low_pass).zip(&filter.high_pass) {
            sa += u * x;
            sd += v * x;
        }
        a.push(sa);
        d.push(sd);
    }
    (a, d)
}

/// Detail coefficients of every row of `series` for octaves `1..=j_max`.
pub fn pyramid_transform(
    series: &MultivariateSeries,
    filter: &FilterPair,
    j_max: u32,
) -> Result<DetailPyramid> {
    if j_max < 1 {
        return Err(Error::param("j_max", "must be at least 1"));
    }
    let n = series.len();
    let feasible = (1..=j_max)
        .take_while(|&j| valid_count(n, j, filter.len()) > 0)
        .last()
        .unwrap_or(0);

    // per row: detail vectors for octaves 1..=feasible
    let rows: Vec<Vec<Vec<f64>>> = par::map_range(series.dim(), |i| {
        let mut approx = series.row(i).to_vec();
        let mut details = Vec::with_capacity(feasible as usize);
        for _ in 0..feasible {
            let (a, d) = analysis_step(&approx, filter);
            details.push(d);
            approx = a;
        }
        details
    });

    let p = series.dim();
    let octaves = (1..=feasible)
        .map(|j| {
            let n_j = valid_count(n, j, filter.len());
            let mut coeffs = Matrix::zeros(p, n_j);
            for (i, row) in rows.iter().enumerate() {
                coeffs.row_mut(i).copy_from_slice(&row[(j - 1) as usize]);
            }
            DetailOctave { j, coeffs }
        })
        .collect();

    Ok(DetailPyramid {
        octaves,
        requested: j_max,
        truncated: feasible < j_max,
    })
}
