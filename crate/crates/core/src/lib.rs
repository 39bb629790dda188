//! Exact symmetric powers, permutation splittings and binomial graded
//! bimonoids over rational and Boolean matrices.
//!
//! The core is generic over a [`Scalar`] carrier; [`Rational`] gives the
//! category of free Q-modules and [`Boolean`] the category of relations.

pub mod category;
pub mod combinat;
pub mod dsl;
pub mod graded;
pub mod matrix;
pub mod report;
pub mod scalar;
pub mod sympow;
pub mod verify;

pub use category::{LinearCategory, MatCat, MatQ, RelCat};
pub use combinat::{Multiset, NatMatrix, Permutation};
pub use graded::{BinGrBimon, Blender, GradedMorphism, PermSplit};
pub use matrix::Matrix;
pub use report::{CheckReport, Status};
pub use scalar::{Boolean, Rational, Scalar};
pub use sympow::Variant;

pub type QMatrix = Matrix<Rational>;
pub type BoolMatrix = Matrix<Boolean>;
pub type QSplit = PermSplit<Rational>;
pub type RelSplit = PermSplit<Boolean>;
pub type QBimonoid = BinGrBimon<Rational>;
pub type RelBimonoid = BinGrBimon<Boolean>;
