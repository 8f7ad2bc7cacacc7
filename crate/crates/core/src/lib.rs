//! Exact arithmetic for Diophantine approximation over products of p-adic
//! and real completions: p-adic valuations, S-norms and content, separation
//! bounds for rationals of bounded height, lattice covolume certificates,
//! height-windowed enumeration of rationals in S-adic balls, and
//! digit-restricted self-similar measures with exact cylinder weights.

pub mod enumeration;
pub mod error;
pub mod exactnum;
pub mod lattice;
pub mod measures;
pub mod places;
pub mod simplex1d;

pub use error::Error;

/// Arbitrary-precision signed integer, the backing type for all integer data.
pub type Int = num_bigint::BigInt;

/// Reduced arbitrary-precision fraction; the universal exact scalar.
/// Canonical form (positive denominator, gcd 1) is maintained by the
/// underlying `num_rational::BigRational` on every operation.
pub type Rational = num_rational::BigRational;

pub type Result<T> = std::result::Result<T, Error>;
