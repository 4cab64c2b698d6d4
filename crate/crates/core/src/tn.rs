//! The Tate–Nakayama layer over the comparison families.
//!
//! For a torsion-free module `Y` over a finite group the layer builds three
//! functors: the coinvariants `Y_G`, the middle group of pairs `(lambda, mu)`
//! with `lambda` a coinvariant class and `mu` a rational vector sharing its
//! normalized norm, and the finite quotient `(Y (x) Q / I*Y)[tor]` of
//! certified torsion classes. The maps between them, namely the splitting
//! `lambda -> (lambda, N#(lambda))`, the difference `(lambda, mu) ->
//! lambda - mu`, and the defect `(lambda, mu) -> mu - N#(mu)`, are realized
//! as exact class arithmetic, verified against the fiber-product squares
//! that tie them to the comparison modules. Over a site the same structure
//! exists for zero-sum point classes paired with invariant tensors:
//! localization at marked points, the product formula, fiber sums along
//! towers, support normalization of norm sections, and the semi-adelic
//! membership tests.

pub mod global;
pub mod local;
pub mod semiadelic;
pub mod torus;

pub use global::{
    build_global_torus, build_tower_iso, dotted_norm_section, global_mid_from_class,
    global_square_is_cartesian, iso_extension, iso_fiber_sum, localize_ymid, product_defect_sum,
    y_mid_check_global, GlobalMidPair, GlobalTorus, TowerIso,
};
pub use local::{
    defect, iso_to_mid, local_square_is_cartesian, map_pair, map_rig, mid_lift, mid_to_rig,
    y_mid_check_local, MidPair,
};
pub use semiadelic::{iota, mid_sa_lift, semiadelic_membership, SemiAdelicFamily};
pub use torus::{
    default_certificate, rig_add, rig_neg, rig_order, rig_sub, y_rig_reduce, RigClass, TorusData,
};

use core::fmt;

/// Errors from the Tate–Nakayama layer.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TnError {
    /// The coefficient module is not torsion free on the standard lattice.
    NotAFreeLattice,
    /// The subtorus lattice is not saturated in the coefficient lattice.
    SubtorusNotSaturated,
    /// The subtorus lattice is not stable under the group action.
    SubtorusNotStable,
    /// A vector lies outside the lattice or rational span required of it.
    OutsideLattice,
    /// The two halves of a middle pair fail their defining identity.
    MismatchedPair,
    /// The stated certificate does not multiply the vector into the
    /// augmentation sublattice.
    NotTorsion,
    /// Per-place data does not line up with the places of the site.
    PlaceMismatch,
    /// A lift was requested through a map that does not reach its target.
    NotSurjective,
    /// The decomposition subgroups at the marked points do not cover the
    /// group; carries the least element outside their union.
    CoverConditionFails { witness: usize },
}

impl fmt::Display for TnError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TnError::NotAFreeLattice => {
                write!(f, "coefficient module is not torsion free on the standard lattice")
            }
            TnError::SubtorusNotSaturated => write!(f, "subtorus lattice is not saturated"),
            TnError::SubtorusNotStable => {
                write!(f, "subtorus lattice is not stable under the group action")
            }
            TnError::OutsideLattice => {
                write!(f, "vector lies outside the lattice or span required of it")
            }
            TnError::MismatchedPair => {
                write!(f, "the two halves of the pair fail their defining identity")
            }
            TnError::NotTorsion => {
                write!(f, "certificate does not multiply the vector into the augmentation sublattice")
            }
            TnError::PlaceMismatch => {
                write!(f, "per-place data does not line up with the places of the site")
            }
            TnError::NotSurjective => write!(f, "lift requested through a map that is not onto"),
            TnError::CoverConditionFails { witness } => {
                write!(f, "decomposition subgroups do not cover the group: element {witness} is missed")
            }
        }
    }
}
