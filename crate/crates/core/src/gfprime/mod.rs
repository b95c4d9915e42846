//! Exact arithmetic and dense linear algebra over a word-sized prime field.

mod field;
mod matrix;
mod rank;

pub use field::{is_prime, PrimeField, MERSENNE_61, NARROW_LIMIT};
pub use matrix::PrimeFieldMatrix;
