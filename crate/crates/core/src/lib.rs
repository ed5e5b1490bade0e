//! Dense complex multilinear algebra built around the Einstein product:
//! Moore-Penrose and weighted Moore-Penrose inverses of arbitrary-order
//! tensors, weighted conjugate transposes, and numerical checkers for
//! reverse-order laws of the weighted inverse.
//!
//! A [`DenseTensor`] carries a [`ShapeSignature`] splitting its modes into a
//! row block and a column block. The Einstein product contracts the column
//! block of the left operand against the row block of the right one, which
//! under [`matricize::flatten`] is plain matrix multiplication.

pub mod error;
pub mod geninv;
pub mod kernels;
pub mod matricize;
pub mod random;
pub mod rol;
pub mod tensor;
pub mod weights;

pub use error::{Error, Result};
pub use geninv::{
    mpinverse, penrose_residuals, weighted_conj_transpose, weighted_mpinverse,
    weighted_penrose_residuals, PenroseReport,
};
pub use matricize::{flatten, unflatten, DenseMatrix};
pub use tensor::{
    approx_equal, chain, conj_transpose, diagonal_tensor, einstein_product, frobenius_norm,
    identity_tensor, linear_combine, rel_distance, zero_tensor, DenseTensor, ShapeSignature,
    Tolerance, C64,
};
pub use weights::HpdWeight;
