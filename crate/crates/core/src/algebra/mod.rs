//! Finite fields, truncated polynomial rings and matrices over them.

mod field;
mod matrix;
mod ring;

pub use field::{default_poly, is_irreducible, is_prime, FieldParams, FieldSpec, MAX_FIELD_ORDER};
pub use matrix::{Code, Elementary, MatrixSpace, RingMatrix};
pub use ring::{in_tpower, RingElement, RingOp, TPowerModule, TruncatedRing};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("p = {0} is not prime")]
    NonPrimeP(u32),
    #[error("reduction polynomial {0:?} is reducible")]
    ReduciblePolynomial(Vec<u32>),
    #[error("no built-in reduction polynomial for GF({p}^{k}); supply one")]
    MissingPolynomial { p: u32, k: u32 },
    #[error("invalid reduction polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("field order {0} exceeds the supported maximum of 32")]
    FieldTooLarge(u64),
    #[error("truncation degree s = {0} must be at least 1")]
    InvalidTruncation(usize),
    #[error("ring mismatch: expected {expected} coefficients, found {found}")]
    MismatchedRing { expected: usize, found: usize },
    #[error("digit {digit} out of range for q = {q}")]
    DigitOutOfRange { digit: u32, q: u32 },
    #[error("matrix is not invertible")]
    SingularMatrix,
    #[error("matrix shape does not match the ambient space")]
    DimensionMismatch,
    #[error("no elementary matrix e_({i},{j}) in dimension {dim}")]
    BadElementaryIndex { i: usize, j: usize, dim: usize },
    #[error("canonical code needs {bits} bits, more than 128")]
    EncodingOverflow { bits: usize },
}
