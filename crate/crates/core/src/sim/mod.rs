//! Synthetic observations `Y = P X + Z`: a latent operator fractional
//! Brownian motion `X` seen through a mixing matrix `P` plus noise `Z`.

mod fgn;
mod mixing;
mod noise;

pub use fgn::{
    fgn_cross_covariance, synthesize_ofbm_increments, CirculantEmbedding, OfBmSpec,
    SynthesisReport, CLIP_ENERGY_TOLERANCE,
};
pub use mixing::{make_mixing_matrix, MixingKind, MixingSpec};
pub use noise::{arma_burn_in, inverse_ar_roots, synthesize_noise, NoiseSpec};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rng::{stream_rng, Stream};
use crate::series::MultivariateSeries;

/// Everything needed to draw one realization of `Y = P X + Z`.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationModel {
    pub ofbm: OfBmSpec,
    pub mixing: MixingKind,
    pub noise: NoiseSpec,
    pub n: usize,
    pub p: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Observations {
    pub y: MultivariateSeries,
    /// Latent path (cumulative sum of the synthesized increments).
    pub x: MultivariateSeries,
    pub z: MultivariateSeries,
    pub mixing: Matrix,
}

impl ObservationModel {
    pub fn embedding(&self) -> Result<CirculantEmbedding> {
        CirculantEmbedding::new(&self.ofbm, self.n)
    }

    /// Realization `index` under `master_seed`; `embedding` must come from
    /// [`ObservationModel::embedding`].
    pub fn draw(
        &self,
        embedding: &CirculantEmbedding,
        master_seed: u64,
        index: u64,
    ) -> Result<Observations> {
        let x = embedding
            .sample(&mut stream_rng(master_seed, index, Stream::Signal))
            .cumulative_sum();
        let spec = MixingSpec {
            kind: self.mixing.clone(),
            p: self.p,
            r: self.ofbm.dim(),
        };
        let mixing =
            make_mixing_matrix(&spec, &mut stream_rng(master_seed, index, Stream::Mixing))?;
        let z = synthesize_noise(
            &self.noise,
            self.p,
            self.n,
            &mut stream_rng(master_seed, index, Stream::Noise),
        )?;
        let y = assemble_observations(&mixing, &x, &z)?;
        Ok(Observations { y, x, z, mixing })
    }
}

/// `Y = P X + Z`.
pub fn assemble_observations(
    mixing: &Matrix,
    latent: &MultivariateSeries,
    noise: &MultivariateSeries,
) -> Result<MultivariateSeries> {
    if mixing.cols() != latent.dim() {
        return Err(Error::Shape(format!(
            "mixing matrix has {} columns but the latent series has {} components",
            mixing.cols(),
            latent.dim()
        )));
    }
    if mixing.rows() != noise.dim() || latent.len() != noise.len() {
        return Err(Error::Shape(format!(
            "P X is {}x{} but Z is {}x{}",
            mixing.rows(),
            latent.len(),
            noise.dim(),
            noise.len()
        )));
    }
    let y = mixing.matmul(latent.values())?.add(noise.values())?;
    MultivariateSeries::new(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn assemble_identity_and_zero() {
        let x = MultivariateSeries::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let z = MultivariateSeries::zeros(2, 2);
        assert_eq!(
            assemble_observations(&Matrix::identity(2), &x, &z).unwrap(),
            x
        );
        let zz = MultivariateSeries::from_rows(&[vec![0.5, 0.0], vec![0.0, -1.0], vec![2.0, 2.0]])
            .unwrap();
        let zero_x = MultivariateSeries::zeros(2, 2);
        let p = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert_eq!(assemble_observations(&p, &zero_x, &zz).unwrap(), zz);
        assert!(assemble_observations(&p, &x, &z).is_err());
    }

    #[test]
    fn assemble_matches_triple_loop() {
        let p = Matrix::from_fn(3, 2, |i, j| (i as f64 + 1.0) * 0.3 - j as f64);
        let x =
            MultivariateSeries::new(Matrix::from_fn(2, 5, |i, t| ((i + 2 * t) % 3) as f64 - 0.7))
                .unwrap();
        let z = MultivariateSeries::new(Matrix::from_fn(3, 5, |i, t| 0.01 * (i * 5 + t) as f64))
            .unwrap();
        let y = assemble_observations(&p, &x, &z).unwrap();
        for i in 0..3 {
            for t in 0..5 {
                let mut s = 0.0;
                for q in 0..2 {
                    s += p[(i, q)] * x.values()[(q, t)];
                }
                s += z.values()[(i, t)];
                assert!((y.values()[(i, t)] - s).abs() < 1e-15);
            }
        }
    }
}
