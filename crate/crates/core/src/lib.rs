//! Generic Hecke algebra of the complex reflection group G13: basis,
//! multiplication tables, the symmetrising trace and its Gram matrix.

pub mod algebra;
pub mod basis;
pub mod field;
pub mod gram;
pub mod group;
pub mod io;
pub mod laurent;
pub mod matrix;
pub mod pipeline;
pub mod rewrite;
pub mod scalar;
pub mod verify;

pub use basis::{BasisIndex, Gen, Letter, Word};
pub use field::Fp;
pub use laurent::{LaurentPoly, Monomial};
pub use matrix::Matrix;
pub use scalar::{Field, Ring};

/// Matrices with exact Laurent entries.
pub type ExactMatrix = Matrix<LaurentPoly>;
/// The default modular scalar.
pub type Fp61 = Fp<{ field::P61 }>;
/// Matrices over [`Fp61`].
pub type ModMatrix = Matrix<Fp61>;
