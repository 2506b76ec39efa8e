//! Dense symmetric eigensolvers.
//!
//! [`sym_eigen`] is the production path (Householder tridiagonalization
//! followed by implicit QL with Wilkinson-style shifts). [`jacobi_eigen`]
//! is a cyclic Jacobi solver kept as an independent cross-check for small
//! matrices.

mod jacobi;
mod tridiag_ql;

pub use jacobi::jacobi_eigen;
pub use tridiag_ql::sym_eigen;

use crate::matrix::Matrix;

/// Ascending eigenvalues with the matching orthonormal eigenvectors stored
/// as the columns of `vectors`.
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

impl SymEigen {
    /// `max |M V - V diag(values)|` in Frobenius norm.
    pub fn reconstruction_residual(&self, m: &Matrix) -> f64 {
        let mv = m.matmul(&self.vectors).expect("square");
        let vd = self
            .vectors
            .matmul(&Matrix::diag(&self.values))
            .expect("square");
        mv.sub(&vd).expect("same shape").norm_fro()
    }

    /// Frobenius norm of `VᵀV - I`.
    pub fn orthogonality_residual(&self) -> f64 {
        let n = self.values.len();
        let vtv = self
            .vectors
            .transpose()
            .matmul(&self.vectors)
            .expect("square");
        vtv.sub(&Matrix::identity(n))
            .expect("same shape")
            .norm_fro()
    }

    pub(crate) fn sorted(values: Vec<f64>, vectors: Matrix) -> SymEigen {
        let n = values.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let sorted_values = order.iter().map(|&i| values[i]).collect();
        let sorted_vectors = Matrix::from_fn(n, n, |r, c| vectors[(r, order[c])]);
        SymEigen {
            values: sorted_values,
            vectors: sorted_vectors,
        }
    }
}

/// Relative asymmetry tolerated before a matrix is rejected.
pub const SYMMETRY_TOLERANCE: f64 = 1e-8;
