//! Exact linear algebra over `Z` and `Q`: normal forms, lattices in `Q^n`,
//! and finitely generated abelian groups given by presentations.

pub mod fgab;
pub mod lattice;
pub mod mat;
pub mod snf;

pub use fgab::{subquotient, FgAbPresentation, Subquotient};
pub use lattice::{condition_lattice, Lattice};
pub use mat::{int, rat, Int, IntMatrix, Rat, RatMatrix, RatVector};
pub use snf::{
    integer_kernel, row_hermite, smith_normal_form, solve_integer, solve_integer_matrix,
    solve_integer_rational, solve_rational, HermiteForm, SmithDecomposition,
};

use core::fmt;

/// Errors from lattice and presentation constructions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ExactlinError {
    /// A claimed sublattice basis vector is not a member of the ambient
    /// lattice; carries the offending basis index.
    NotASublattice { index: usize },
    /// A vector handed to a class operation is not in the relevant lattice.
    NotInLattice,
}

impl fmt::Display for ExactlinError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactlinError::NotASublattice { index } => {
                write!(f, "basis vector {index} is not a member of the ambient lattice")
            }
            ExactlinError::NotInLattice => write!(f, "vector is not a member of the lattice"),
        }
    }
}
