//! Exact integer linear algebra: normal forms, kernels, saturation and the
//! structure of finitely generated abelian groups presented by matrices.

mod abelian;
mod matrix;
mod normal_form;

use thiserror::Error;

pub use abelian::{
    cokernel_invariants, homology, nilpotent_block_sizes, quotient_invariants, AbelianInvariants, ModulePresentation,
};
pub use matrix::IntMatrix;
pub use normal_form::{
    coordinates, has_saturated_image, hermite, hermite_with_transform, kernel_basis, rank, saturation, smith,
    smith_invariants, solve_integer, solve_integer_many, unimodular_inverse, Echelon, SmithDecomposition,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("column {column} is not an integer combination of the basis")]
    NotInLattice { column: usize },
    #[error("basis columns are linearly dependent")]
    DependentBasis,
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error("module has positive free rank")]
    NotTorsion,
    #[error("module is not a {p}-group")]
    NotPrimary { p: u64 },
    #[error("operator does not preserve the relations")]
    NotEndomorphism,
    #[error("operator is not nilpotent on the module")]
    NotNilpotent,
}
