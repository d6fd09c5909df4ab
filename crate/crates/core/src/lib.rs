//! Projective nested cartesian codes over finite fields.
//!
//! Closed-form parameters live in [`formulas`] and are generic over any exact
//! integer type; [`Count`] is the default. Everything else works over a
//! runtime-chosen [`gf::Field`].

pub mod cli;
pub mod codes;
pub mod config;
pub mod error;
pub mod formulas;
pub mod gf;
pub mod oracles;
pub mod poly;
pub mod sets;

pub use error::{Error, Result};
pub use formulas::{DistanceResult, DistanceStatus, ExactInt, SizeVector};
pub use gf::{Elem, Field};
pub use poly::{Monomial, Polynomial};
pub use sets::{CartesianSpec, Classification, ProjectivePoint};

/// Arbitrary-precision count used for code parameters.
pub type Count = num_bigint::BigInt;

/// Fixed-width alternative for small parameters.
pub type Small = i128;
