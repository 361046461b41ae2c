//! Exact reductions between linear recurrences, orbit hitting problems and
//! regular realizability, with deciders for the injective and surjective
//! filters.

pub mod dfa;
pub mod digraph;
pub mod error;
pub mod filters;
pub mod formats;
pub mod fwd;
pub mod hitting;
pub mod lattice;
pub mod linalg;
pub mod lrs;
pub mod monoid;
pub mod shadow;
pub mod verify;

pub use error::{Error, Result};
pub use linalg::{Int, QMatrix, Rational, ZMatrix};
pub use lrs::{AffineFunction, Lrs, OrbitSystem};
