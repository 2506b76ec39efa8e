use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq)]
pub enum MixingKind {
    /// First `r` canonical basis vectors of `R^p`.
    Canonical,
    /// i.i.d. standard normal entries, each column rescaled to unit norm.
    RandomGaussianUnitColumns,
    /// A fixed `p x r` matrix with unit-norm columns.
    Explicit(Matrix),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixingSpec {
    pub kind: MixingKind,
    pub p: usize,
    pub r: usize,
}

const UNIT_NORM_TOLERANCE: f64 = 1e-12;

pub fn make_mixing_matrix<R: Rng + ?Sized>(spec: &MixingSpec, rng: &mut R) -> Result<Matrix> {
    let (p, r) = (spec.p, spec.r);
    if r < 1 {
        return Err(Error::param("r", "latent dimension must be at least 1"));
    }
    if p < r {
        return Err(Error::param(
            "p",
            format!("ambient dimension p = {p} is below r = {r}"),
        ));
    }
    match &spec.kind {
        MixingKind::Canonical => Ok(Matrix::from_fn(p, r, |i, q| if i == q { 1.0 } else { 0.0 })),
        MixingKind::RandomGaussianUnitColumns => {
            let mut m = Matrix::zeros(p, r);
            for i in 0..p {
                for q in 0..r {
                    m[(i, q)] = rng.sample(StandardNormal);
                }
            }
            for q in 0..r {
                let norm = m.column(q).iter().map(|x| x * x).sum::<f64>().sqrt();
                for i in 0..p {
                    m[(i, q)] /= norm;
                }
            }
            Ok(m)
        }
        MixingKind::Explicit(m) => {
            if m.rows() != p || m.cols() != r {
                return Err(Error::Shape(format!(
                    "explicit mixing matrix is {}x{}, expected {p}x{r}",
                    m.rows(),
                    m.cols()
                )));
            }
            for q in 0..r {
                let norm = m.column(q).iter().map(|x| x * x).sum::<f64>().sqrt();
                if (norm - 1.0).abs() > UNIT_NORM_TOLERANCE {
                    return Err(Error::param(
                        "mixing.matrix",
                        format!("column {q} has norm {norm}, expected 1"),
                    ));
                }
            }
            Ok(m.clone())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream_rng, Stream};

    #[test]
    fn canonical_columns() {
        let spec = MixingSpec {
            kind: MixingKind::Canonical,
            p: 4,
            r: 2,
        };
        let m = make_mixing_matrix(&spec, &mut stream_rng(0, 0, Stream::Mixing)).unwrap();
        assert_eq!(m.column(0), vec![1.0, 0.0, 0.0, 0.0]);
        assert_eq!(m.column(1), vec![0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn random_columns_have_unit_norm() {
        let spec = MixingSpec {
            kind: MixingKind::RandomGaussianUnitColumns,
            p: 100,
            r: 3,
        };
        let m = make_mixing_matrix(&spec, &mut stream_rng(1, 0, Stream::Mixing)).unwrap();
        for q in 0..3 {
            let norm = m.column(q).iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn explicit_identity_and_errors() {
        let mut rng = stream_rng(0, 0, Stream::Mixing);
        let spec = MixingSpec {
            kind: MixingKind::Explicit(Matrix::identity(3)),
            p: 3,
            r: 3,
        };
        assert_eq!(
            make_mixing_matrix(&spec, &mut rng).unwrap(),
            Matrix::identity(3)
        );
        let spec = MixingSpec {
            kind: MixingKind::Canonical,
            p: 2,
            r: 3,
        };
        assert!(make_mixing_matrix(&spec, &mut rng).is_err());
        let spec = MixingSpec {
            kind: MixingKind::Explicit(Matrix::identity(3).scale(2.0)),
            p: 3,
            r: 3,
        };
        assert!(make_mixing_matrix(&spec, &mut rng).is_err());
    }
}
