use std::fmt;

use crate::poly::Shape;

/// Errors shared across the library.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Two polynomials with different variable arrays were combined.
    ShapeMismatch { left: Shape, right: Shape },
    /// A variable index fell outside the declared array.
    IndexOutOfRange { row: u32, col: u32, shape: Shape },
    /// Text input could not be parsed; positions are 1-based.
    Parse { line: usize, col: usize, msg: String },
    /// An operation that requires row-permutation invariance got a
    /// polynomial that is not invariant.
    NotSymmetric,
    /// The all-zero exponent tuple is not a valid power-sum index.
    ZeroExponentTuple,
    /// A tuple, weight vector or point had the wrong number of entries.
    ArityMismatch { expected: usize, got: usize },
    /// A monomial function was requested with more tuples than rows.
    TooManyTuples { ell: usize, rows: u32 },
    /// Generic orbit enumeration would require visiting n! images.
    OrbitTooLarge { rows: u32, limit: u32 },
    /// A bound's precondition failed; the bound is reported inapplicable.
    Inapplicable(String),
    /// A simplex does not contain the exponent profile it must enclose.
    NotEnclosed { point: String },
    /// An operation on an exponent profile needs at least one point.
    EmptyProfile,
    /// A partition was malformed or incompatible with the row count.
    InvalidPartition(String),
    /// Any other invalid input, with context.
    InvalidInput(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ShapeMismatch { left, right } => {
                write!(f, "shape mismatch: {}x{} vs {}x{}", left.rows, left.cols, right.rows, right.cols)
            }
            Error::IndexOutOfRange { row, col, shape } => {
                write!(f, "variable x[{},{}] outside {}x{} array", row, col, shape.rows, shape.cols)
            }
            Error::Parse { line, col, msg } => write!(f, "parse error at {}:{}: {}", line, col, msg),
            Error::NotSymmetric => write!(f, "polynomial is not invariant under row permutations"),
            Error::ZeroExponentTuple => write!(f, "the zero tuple does not index a power sum"),
            Error::ArityMismatch { expected, got } => {
                write!(f, "expected {} entries, got {}", expected, got)
            }
            Error::TooManyTuples { ell, rows } => {
                write!(f, "monomial function with {} tuples needs at least {} rows, have {}", ell, ell, rows)
            }
            Error::OrbitTooLarge { rows, limit } => {
                write!(f, "orbit enumeration over {} rows exceeds the limit of {}", rows, limit)
            }
            Error::Inapplicable(reason) => write!(f, "bound inapplicable: {}", reason),
            Error::NotEnclosed { point } => {
                write!(f, "simplex does not contain profile point {}", point)
            }
            Error::EmptyProfile => write!(f, "exponent profile is empty"),
            Error::InvalidPartition(reason) => write!(f, "invalid partition: {}", reason),
            Error::InvalidInput(reason) => write!(f, "invalid input: {}", reason),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
