//! Exact linear algebra over ℚ and ℚ(i).

mod matrix;
mod scalar;
mod subspace;

pub use matrix::{rank_of_rows, Matrix, Rref};
pub use scalar::{Field, Gaussian, Q};
pub use subspace::{kernel, sum_contains_quotient, Subspace};
