//! Spencer δ-cohomology and related invariants of constant-coefficient
//! symbolic systems, computed in exact arithmetic.

pub mod basis;
pub mod characteristics;
pub mod cohomology;
pub mod dsl;
pub mod error;
pub mod linalg;
pub mod poly;
pub mod system;

pub use error::{Error, Result};
