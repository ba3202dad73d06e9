use std::fmt::{Debug, Display};
use std::ops::{Div, Mul, Neg, Sub};

use num_traits::{FromPrimitive, One, Zero};

/// Coefficient scalar: a commutative ring with exact division by the
/// integers it embeds. Satisfied by `BigRational` (the exact path) and
/// by `f64` (the floating path used for numerical verification).
pub trait Coeff:
    Clone
    + PartialEq
    + PartialOrd
    + Debug
    + Display
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + FromPrimitive
{
    /// Embedding of small integers, used for derivative factors and the
    /// rewriting recursion. Panics only if the scalar cannot represent
    /// the value, which does not happen for the types used here.
    fn from_int(value: i64) -> Self {
        Self::from_i64(value).expect("integer embeds into scalar")
    }
}

impl<T> Coeff for T where
    T: Clone
        + PartialEq
        + PartialOrd
        + Debug
        + Display
        + Zero
        + One
        + Neg<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Div<Output = T>
        + FromPrimitive
{
}
