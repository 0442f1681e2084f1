//! Exact and tolerant linear algebra over complex matrices.

pub mod echelon;
pub mod matrix;
pub mod scalar;
pub mod subspace;

pub use echelon::{kernel, Echelon};
pub use matrix::{inner, orthogonal_projection, Matrix};
pub use scalar::{format_rational, parse_rational, Cf64, GaussRat, Mode, Scalar, DEFAULT_TOL};
pub use subspace::OperatorSubspace;
