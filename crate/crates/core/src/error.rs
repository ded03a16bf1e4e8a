use alloc::string::String;
use alloc::vec::Vec;

use crate::report::Report;

/// Errors raised by constructors and operations of this crate.
///
/// Verification failures that are an expected outcome (an identity that does
/// not hold) are returned as a [`Report`], not as an error. Errors carry a
/// report only when a constructor refuses its input.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("shape mismatch: expected {expected_rows}x{expected_cols}, found {rows}x{cols}")]
    ShapeMismatch {
        expected_rows: usize,
        expected_cols: usize,
        rows: usize,
        cols: usize,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("algebra is not associative")]
    NotAssociative(Report),

    #[error("grading is not special")]
    NotSpeciallyGraded(Report),

    #[error("bimodule axioms fail")]
    NotABimodule(Report),

    #[error("bracket fails the right Leibniz identity")]
    NotLeibniz(Report),

    #[error("square bracket is not a Lie bracket")]
    NotLie(Report),

    #[error("brackets fail the Hu-Liu identities")]
    NotHuLiu(Report),

    #[error("algebra has no identity element")]
    NotUnital,

    #[error("element is not a unit: its even component is not invertible")]
    NotAUnit,

    #[error("matrix realization is invalid: {0}")]
    Realization(String),

    #[error("sampler could not produce group elements: {0}")]
    Sampling(String),

    #[error("numerical rank is ambiguous at the requested gap ratio")]
    UnknownRank { singular_values: Vec<f64> },
}

pub type Result<T> = core::result::Result<T, Error>;
