//! Exact computations in the stable module category of graded quotient
//! rings `k[x_1..x_n]/I`: resolutions, transposes, mapping cones, the
//! represented-by-monomorphisms criterion and perfect exact sequences.

pub mod algebra;
pub mod complexes;
pub mod dsl;
pub mod error;
pub mod fmod;
pub mod gb;
pub mod matrix;
pub mod ring;
pub mod sample;
pub mod session;
pub mod stable;

pub use error::{Error, Result};
