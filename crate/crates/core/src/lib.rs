//! Exact arithmetic, symmetry reduction and certified minimizer-support
//! bounds for polynomials invariant under simultaneous permutation of the
//! rows of an n-by-k variable array (k-symmetric polynomials).
//!
//! The pipeline, in the order the modules build on one another:
//!
//! * [`poly`] — sparse polynomials with exact rational (or float)
//!   coefficients over the n-by-k array, canonical text format.
//! * [`sym`] — symmetrization, power sums, monomial functions, and the
//!   rewriting of any k-symmetric polynomial as a polynomial in power
//!   sums.
//! * [`bounds`] — bounds on the number of distinct rows a sphere
//!   minimizer needs, from weighted degrees and enclosing simplices.
//! * [`convexity`] — the Hessian form of a polynomial and the bound
//!   machinery specialized to it.
//! * [`reduce`] — partition-indexed substitution instances that restrict
//!   a k-symmetric polynomial to points with few distinct rows.
//! * [`verify`] — multistart projected-gradient search on spheres and
//!   ellipsoids, used to cross-check the reductions numerically and to
//!   hunt for convexity counterexamples.

pub mod bounds;
pub mod convexity;
pub mod error;
pub mod poly;
pub mod reduce;
pub mod scalar;
pub mod sym;
pub mod verify;

pub use error::{Error, Result};
pub use poly::{parse_poly, Degree, Monomial, Polynomial, Shape, VarIndex};
pub use scalar::Coeff;

/// Exact coefficient scalar used on the symbolic path.
pub type Rat = num::BigRational;

/// Exact-coefficient polynomial.
pub type Poly = Polynomial<Rat>;

/// Float-coefficient polynomial for the numerical path.
pub type FloatPoly = Polynomial<f64>;
