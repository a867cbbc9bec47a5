//! Exact-arithmetic computations around hyperelliptic curves: discriminants
//! of binary forms, automorphism groups of point configurations on the
//! projective line, equivariant fiber characters and the cyclic group orders
//! they produce, stratum combinatorics, and quadratic-twist classification.
//!
//! Everything is exact: scalars live in `Q` or in a prime field `F_p` with
//! `p` odd, and no operation ever rounds.

pub mod binform;
pub mod config;
pub mod curve;
pub mod error;
pub mod json;
pub mod moebius;
pub mod picard;
pub mod poly;
pub mod rng;
pub mod scalar;
pub mod strata;
pub mod verify;

pub use error::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
