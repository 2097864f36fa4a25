//! Exact invariants of meromorphic connections on the projective line and of
//! their spectral curves: formal (HTL) cell data, irregularities, Milnor and
//! delta invariants at infinity, arithmetic genus, and the index of rigidity.

pub mod error;
pub mod exact;
pub mod germ;
pub mod global;
pub mod io;
pub mod local;
pub mod puiseux;
pub mod splitting;

pub use error::{Error, Result};
