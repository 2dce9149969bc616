//! Exact computations with finite theta groups.
//!
//! The crate builds finite Heisenberg groups and their standard
//! (Schrödinger) representations over cyclotomic fields, classifies
//! alternating pairings on finite abelian groups, and computes
//! desk-scale Brauer-group and self-duality invariants of homogeneous
//! projective bundles on abelian varieties.
//!
//! Everything is exact: rationals are arbitrary precision, roots of unity
//! are stored as exponents and matrices have entries in `Q(zeta_N)`.

pub mod brauer;
pub mod cli;
pub mod error;
pub mod exactnum;
pub mod fingroup;
pub mod heisenberg;
pub mod pairing;
pub mod selfdual;

pub use error::{Error, Result};
