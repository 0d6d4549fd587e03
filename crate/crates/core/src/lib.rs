//! Decision procedures, witness construction and certificates for chaotic
//! behavior of one-sided subshifts of finite type.
//!
//! Every distance is an exact dyadic `2^-k`, every set is a finite union of
//! cylinders, and every positive verdict carries a certificate that can be
//! re-checked without trusting the search that produced it.

pub mod classify;
pub mod construct;
pub mod corpus;
pub mod criterion;
pub mod decide;
pub mod dot;
pub mod ellis;
pub mod error;
pub mod graph;
pub mod shift;
pub mod witness;
pub mod vset;

pub use error::{Error, Result};
pub use shift::{Cylinder, Dist, PointRep, SftPresentation, Symbol, Word};
