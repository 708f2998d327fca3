//! Dense matrices, least-squares solvers and block-sparse assembly.

mod block;
mod dense;
mod lstsq;

pub use block::{solve_block_sparse, Block, BlockMethod, BlockSparseSystem};
pub use dense::{dot, norm2, DenseMatrix};
pub use lstsq::{
    default_tolerance, residual_norm, solve_least_squares, LeastSquaresSolution, LsMethod,
    MethodUsed,
};

/// Free-function form of [`DenseMatrix::matmul`].
pub fn matmul(a: &DenseMatrix, b: &DenseMatrix) -> crate::Result<DenseMatrix> {
    a.matmul(b)
}

/// Free-function form of [`DenseMatrix::hadamard_scale_columns`].
pub fn hadamard_scale_columns(a: &DenseMatrix, v: &[f64]) -> crate::Result<DenseMatrix> {
    a.hadamard_scale_columns(v)
}
