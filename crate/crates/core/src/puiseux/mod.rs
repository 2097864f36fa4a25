//! Newton–Puiseux expansion of the spectral curve over field towers.

pub mod clusters;
pub mod newton;
pub mod series;
pub mod tfactor;
pub mod tower;
