//! Wavelet random matrices: per-octave sample covariance of the detail
//! vectors and their ordered (log-)eigenvalues.

use std::io::{BufWriter, Write};

use crate::error::{Error, Result};
use crate::fmtnum::Num;
use crate::linalg::sym_eigen;
use crate::matrix::Matrix;
use crate::par;
use crate::wavelet::{DetailOctave, DetailPyramid};

/// Eigenvalues below this magnitude count as structural zeros.
pub const DEFAULT_EIGEN_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct WaveletCovariance {
    pub j: u32,
    pub n_j: usize,
    pub matrix: Matrix,
}

/// `(1/n_j) Σ_k D(2^j,k) D(2^j,k)ᵀ`; the upper triangle mirrors the lower.
pub fn wavelet_covariance(octave: &DetailOctave) -> Result<WaveletCovariance> {
    let d = &octave.coeffs;
    let n_j = d.cols();
    if n_j == 0 {
        return Err(Error::param(
            "details",
            format!("octave {} has no coefficients", octave.j),
        ));
    }
    let p = d.rows();
    let mut w = Matrix::zeros(p, p);
    for a in 0..p {
        let ra = d.row(a);
        for b in 0..=a {
            let s: f64 = ra.iter().zip(d.row(b)).map(|(x, y)| x * y).sum();
            w[(a, b)] = s / n_j as f64;
        }
    }
    for a in 0..p {
        for b in 0..a {
            w[(b, a)] = w[(a, b)];
        }
    }
    Ok(WaveletCovariance {
        j: octave.j,
        n_j,
        matrix: w,
    })
}

/// Sorted eigenvalues of one octave with their base-2 logarithms.
#[derive(Debug, Clone, PartialEq)]
pub struct OctaveSpectrum {
    pub j: u32,
    pub n_j: usize,
    pub eigenvalues: Vec<f64>,
    /// `None` exactly where the eigenvalue fell below the floor.
    pub log2: Vec<Option<f64>>,
}

impl OctaveSpectrum {
    pub fn is_zero(&self, i: usize) -> bool {
        self.log2[i].is_none()
    }

    pub fn zero_count(&self) -> usize {
        self.log2.iter().filter(|x| x.is_none()).count()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogEigenSpectrum {
    pub floor: f64,
    pub octaves: Vec<OctaveSpectrum>,
}

impl LogEigenSpectrum {
    pub fn dim(&self) -> usize {
        self.octaves.first().map_or(0, |o| o.eigenvalues.len())
    }

    pub fn range(&self) -> Option<(u32, u32)> {
        Some((self.octaves.first()?.j, self.octaves.last()?.j))
    }

    pub fn octave(&self, j: u32) -> Option<&OctaveSpectrum> {
        self.octaves.iter().find(|o| o.j == j)
    }

    /// Builds a spectrum straight from eigenvalue lists, one per octave
    /// starting at `j1`. Values are sorted ascending.
    pub fn from_eigenvalues(j1: u32, per_octave: Vec<Vec<f64>>, floor: f64) -> Result<Self> {
        let octaves = per_octave
            .into_iter()
            .enumerate()
            .map(|(offset, values)| log_octave(j1 + offset as u32, 0, values, floor))
            .collect();
        check_floor(floor)?;
        Ok(LogEigenSpectrum { floor, octaves })
    }

    /// CSV with columns `j,i,lambda,log2_lambda,zero_flag`; `i` is 1-based,
    /// `log2_lambda` is empty for flagged eigenvalues.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = BufWriter::new(out);
        writeln!(w, "j,i,lambda,log2_lambda,zero_flag")?;
        for o in &self.octaves {
            for (i, (lambda, log)) in o.eigenvalues.iter().zip(&o.log2).enumerate() {
                match log {
                    Some(l) => writeln!(w, "{},{},{},{},0", o.j, i + 1, Num(*lambda), Num(*l))?,
                    None => writeln!(w, "{},{},{},,1", o.j, i + 1, Num(*lambda))?,
                }
            }
        }
        w.flush()?;
        Ok(())
    }
}

fn check_floor(floor: f64) -> Result<()> {
    if !(floor > 0.0 && floor.is_finite()) {
        return Err(Error::param("eigen_floor", "must be positive and finite"));
    }
    Ok(())
}

fn log_octave(j: u32, n_j: usize, mut eigenvalues: Vec<f64>, floor: f64) -> OctaveSpectrum {
    eigenvalues.sort_by(f64::total_cmp);
    // a value below the floor in absolute value is a rank-deficiency zero
    let log2 = eigenvalues
        .iter()
        .map(|&l| (l.abs() >= floor && l > 0.0).then(|| l.log2()))
        .collect();
    OctaveSpectrum {
        j,
        n_j,
        eigenvalues,
        log2,
    }
}

/// Eigen-decomposes every covariance and applies the zero floor.
pub fn log_eigen_spectrum(
    covariances: &[WaveletCovariance],
    floor: f64,
) -> Result<LogEigenSpectrum> {
    check_floor(floor)?;
    let decomposed = par::map_range(covariances.len(), |idx| {
        sym_eigen(&covariances[idx].matrix).map(|e| e.values)
    });
    let mut octaves = Vec::with_capacity(covariances.len());
    for (cov, values) in covariances.iter().zip(decomposed) {
        octaves.push(log_octave(cov.j, cov.n_j, values?, floor));
    }
    Ok(LogEigenSpectrum { floor, octaves })
}

/// Covariances for octaves `j1..=j2` of a pyramid.
pub fn octave_covariances(
    pyramid: &DetailPyramid,
    j1: u32,
    j2: u32,
) -> Result<Vec<WaveletCovariance>> {
    if j1 < 1 || j1 > j2 {
        return Err(Error::param(
            "octaves",
            format!("need 1 <= j1 <= j2, got ({j1}, {j2})"),
        ));
    }
    (j1..=j2)
        .map(|j| {
            let octave = pyramid.octave(j).ok_or(Error::InfeasibleOctave {
                requested: j,
                n: 0,
                last_feasible: pyramid.last_octave(),
            })?;
            wavelet_covariance(octave)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn octave(rows: &[Vec<f64>]) -> DetailOctave {
        DetailOctave {
            j: 1,
            coeffs: Matrix::from_rows(rows).unwrap(),
        }
    }

    #[test]
    fn covariance_examples() {
        let w = wavelet_covariance(&octave(&[vec![2.0, -2.0]])).unwrap();
        assert_eq!(w.matrix, Matrix::from_rows(&[vec![4.0]]).unwrap());

        let w = wavelet_covariance(&octave(&[vec![0.0; 5], vec![0.0; 5]])).unwrap();
        assert_eq!(w.matrix, Matrix::zeros(2, 2));

        let w = wavelet_covariance(&octave(&[vec![1.0], vec![1.0]])).unwrap();
        assert_eq!(
            w.matrix,
            Matrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap()
        );
        let spec = log_eigen_spectrum(&[w], DEFAULT_EIGEN_FLOOR).unwrap();
        assert_eq!(spec.octaves[0].zero_count(), 1);
    }

    #[test]
    fn empty_octave_rejected() {
        assert!(wavelet_covariance(&octave(&[vec![]])).is_err());
    }

    #[test]
    fn floor_flags() {
        let s = LogEigenSpectrum::from_eigenvalues(1, vec![vec![4.0, 1e-14]], 1e-10).unwrap();
        let o = &s.octaves[0];
        assert_eq!(o.log2, vec![None, Some(2.0)]);
        let s = LogEigenSpectrum::from_eigenvalues(3, vec![vec![8.0]], 1e-10).unwrap();
        assert_eq!(s.octaves[0].log2, vec![Some(3.0)]);
        assert_eq!(s.octaves[0].j, 3);
        let s = LogEigenSpectrum::from_eigenvalues(1, vec![vec![1e-12, -1e-13]], 1e-10).unwrap();
        assert_eq!(s.octaves[0].zero_count(), 2);
        assert!(LogEigenSpectrum::from_eigenvalues(1, vec![vec![1.0]], 0.0).is_err());
    }

    #[test]
    fn trace_identity_and_rank_deficiency() {
        // p = 6 > n_j = 3
        let rows: Vec<Vec<f64>> = (0..6)
            .map(|i| {
                (0..3)
                    .map(|k| ((i * 7 + k * 3) % 5) as f64 - 2.0 + 0.1 * i as f64)
                    .collect()
            })
            .collect();
        let oct = octave(&rows);
        let w = wavelet_covariance(&oct).unwrap();
        let energy: f64 = rows.iter().flatten().map(|x| x * x).sum::<f64>() / 3.0;
        assert!((w.matrix.trace() - energy).abs() < 1e-10 * energy);
        let spec = log_eigen_spectrum(&[w], DEFAULT_EIGEN_FLOOR).unwrap();
        let sum: f64 = spec.octaves[0].eigenvalues.iter().sum();
        assert!((sum - energy).abs() < 1e-10 * energy);
        assert!(spec.octaves[0].zero_count() >= 3);
    }

    #[test]
    fn spectrum_csv() {
        let s = LogEigenSpectrum::from_eigenvalues(2, vec![vec![1e-14, 4.0]], 1e-10).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "j,i,lambda,log2_lambda,zero_flag\n2,1,1e-14,,1\n2,2,4,2,0\n"
        );
    }
}
