//! Finite groups, modules over their integral group rings, and Tate
//! cohomology in degrees -1 through 2.

pub mod cohomology;
pub mod group;
pub mod hom;
pub mod induced;
pub mod module;

pub use cohomology::{
    augmentation_lattice, canonical_submodules, cohomological_obstruction, invariant_lattice,
    norm_matrix, tate_cohomology, CanonicalSubmodules, CohomologyGroup,
};
pub use group::{FiniteGroup, GroupHom};
pub use hom::equivariant_hom_lattice;
pub use induced::{
    equivariant_lift, equivariant_lift_with_kernel_hint, induced_witness,
    induced_witness_with_hint, InducedWitness,
};
pub use module::{GMap, GModule};

use core::fmt;

/// Errors from group, module, and cohomology constructions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GmodError {
    /// The multiplication table violates a group axiom.
    InvalidGroupTable(&'static str),
    /// The element map does not respect products.
    NotAHomomorphism,
    /// Action list or matrix shapes disagree with the group and lattice.
    ActionShapeMismatch,
    /// The claimed stable sublattice is not contained in the ambient one.
    SublatticeNotContained,
    IdentityActsNontrivially,
    /// `action(g) action(h) != action(gh)`.
    ActionNotAHomomorphism { g: usize, h: usize },
    /// `action(g)` moves the ambient or stable lattice out of itself.
    LatticeNotStable { g: usize },
    /// Source and target are modules over different groups.
    GroupMismatch,
    /// The matrix fails `T action(g) = action(g) T` on the source lattice.
    NotEquivariant { g: usize },
    /// The matrix does not carry the source lattice pair into the target's.
    DoesNotPreserveLattice,
    TorsionFreeRequired,
    /// Tate cohomology is implemented for degrees -1 through 2 only.
    DegreeUnsupported { degree: i32 },
    NotASubgroup,
    /// Orbit-basis search is capped; supply a basis hint instead.
    RankTooLargeForSearch { rank: usize },
    /// The map to lift through is not onto.
    NotSurjective,
    /// The kernel admits no free permutation basis, so the lifting equation
    /// may be unsolvable.
    KernelNotInduced,
}

impl fmt::Display for GmodError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GmodError::InvalidGroupTable(why) => write!(f, "invalid group table: {why}"),
            GmodError::NotAHomomorphism => write!(f, "map is not a group homomorphism"),
            GmodError::ActionShapeMismatch => write!(f, "action shape mismatch"),
            GmodError::SublatticeNotContained => {
                write!(f, "sublattice is not contained in the ambient lattice")
            }
            GmodError::IdentityActsNontrivially => write!(f, "identity must act as the identity"),
            GmodError::ActionNotAHomomorphism { g, h } => {
                write!(f, "action({g}) action({h}) != action(product)")
            }
            GmodError::LatticeNotStable { g } => {
                write!(f, "action({g}) does not stabilize the lattice pair")
            }
            GmodError::GroupMismatch => write!(f, "modules live over different groups"),
            GmodError::NotEquivariant { g } => {
                write!(f, "matrix does not commute with action({g})")
            }
            GmodError::DoesNotPreserveLattice => {
                write!(f, "matrix does not carry the source lattices into the target's")
            }
            GmodError::TorsionFreeRequired => write!(f, "operation requires a torsion-free module"),
            GmodError::DegreeUnsupported { degree } => {
                write!(f, "cohomology degree {degree} unsupported (use -1..=2)")
            }
            GmodError::NotASubgroup => write!(f, "element set is not a subgroup"),
            GmodError::RankTooLargeForSearch { rank } => {
                write!(f, "orbit-basis search capped below rank {rank}; pass a hint")
            }
            GmodError::NotSurjective => write!(f, "map is not surjective"),
            GmodError::KernelNotInduced => {
                write!(f, "kernel has no free permutation basis; cannot lift")
            }
        }
    }
}
