//! Finite-dimensional quantum relations.
//!
//! The crate represents von Neumann algebras inside `M_n`, quantum relations
//! as bimodules over their commutants, and the classical objects they
//! generalize (relations on finite sets, lattices of lower sets, finite
//! pseudometrics). All algebraic code runs over exact Gaussian rationals by
//! default so that subspace equality is decidable; the quantum torus module
//! works with tolerance-governed complex doubles.

pub mod algebra;
pub mod class;
pub mod error;
pub mod finite;
pub mod intrinsic;
pub mod io;
pub mod linalg;
pub mod par;
pub mod reflexivity;
pub mod relation;
pub mod torus;

pub use algebra::VonNeumannAlgebra;
pub use class::RelationClass;
pub use error::{Error, Result};
pub use linalg::{Cf64, GaussRat, Matrix, OperatorSubspace, Scalar};
pub use par::Exec;
pub use relation::QuantumRelation;
