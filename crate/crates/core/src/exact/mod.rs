//! Exact arithmetic: rationals, polynomials, rational functions, matrices,
//! resultants, factorization over Q and localization at points of P^1.

pub mod bifactor;
pub mod factor;
pub mod field;
pub mod localize;
pub mod matrix;
pub mod poly;
pub mod rat;
pub mod ratfn;
pub mod resultant;

pub use field::Field;
pub use localize::{localize, pole_set_validate, LocalMatrix};
pub use matrix::{charpoly, BiPoly, Mat, MatRF};
pub use poly::UPoly;
pub use rat::Rat;
pub use ratfn::{Point, RatFn, Valuation};
pub use resultant::{discriminant, resultant};
