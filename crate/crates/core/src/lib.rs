//! Exact structure-constant computations for finite-dimensional BiHom-Lie algebras: axiom checks,
//! generalized derivation spaces, centroids, structural invariants, a catalog of the
//! two-dimensional families and isomorphism tools.
//!
//! Everything is generic over [`scalar::Scalar`]; the aliases below fix the two supported fields.

pub mod algebra;
pub mod catalog;
pub mod cli;
pub mod derivation;
pub mod error;
pub mod expr;
pub mod format;
pub mod iso;
pub mod linalg;
pub mod scalar;
pub mod structure;

pub use error::{Error, Result};
pub use scalar::{Field, Fp, PrimeField, Rational, RationalField, Scalar};

pub type QMatrix = linalg::Matrix<Rational>;
pub type FpMatrix = linalg::Matrix<Fp>;
pub type QAlgebra = algebra::BiHomLieAlgebra<Rational>;
pub type FpAlgebra = algebra::BiHomLieAlgebra<Fp>;
pub type QSubspace = linalg::Subspace<Rational>;
pub type QMatrixSubspace = linalg::MatrixSubspace<Rational>;
