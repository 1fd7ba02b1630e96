//! Complex and exact-phase matrix arithmetic for linear optical circuits.

pub mod cyclotomic;
mod matrix;
mod monomial;
mod permanent;
mod phase;

pub use matrix::{
    dagger, direct_sum, embed, fourier_matrix, max_abs_diff, tensor, unitarity_defect, TransferMatrix,
    INTERNAL_UNITARY_TOL, UNITARY_TOL,
};
pub use monomial::{pauli_x, pauli_z, MonomialMatrix};
pub use permanent::{permanent, permanent_repeated_rows, MAX_PERMANENT_ORDER};
pub use phase::ExactPhase;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix is not square ({rows}×{cols})")]
    NonSquareMatrix { rows: usize, cols: usize },

    #[error("empty matrix")]
    EmptyMatrix,

    #[error("size {size} exceeds the limit of {limit}")]
    SizeLimit { size: usize, limit: usize },

    #[error("matrix is not unitary: max |U·U† - I| = {deviation:.3e} > {tol:.1e}")]
    NotUnitary { deviation: f64, tol: f64 },

    #[error("mode index {index} out of range for {modes} modes")]
    IndexOutOfRange { index: usize, modes: usize },

    #[error("mode {0} listed more than once")]
    DuplicateMode(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}
