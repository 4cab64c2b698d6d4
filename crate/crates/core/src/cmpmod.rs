//! Comparison families of modules over finite Galois data.
//!
//! A *local level* over a finite group packages three modules: the trivial
//! rank-one module, the middle lattice of fractional functions with integral
//! total sum, and the finite quotient of the middle lattice by the integer
//! functions, joined by the total-sum map and the negated reduction map. A
//! *global level* does the same over a site, with functions indexed by
//! (group element, point) pairs subject to a support condition. This module
//! builds both levels and the maps between them: splittings of the sum maps,
//! constructive lifts through the reduction maps, inflation along towers,
//! localization at marked points, support normalization, duality for the
//! middle lattice, and the tower operators that push functions onto marked
//! points coherently across two levels.

pub mod dual;
pub mod global;
pub mod local;
pub mod tower;

pub use dual::{
    dual_inflation, dual_mid, inflations_are_adjoint, splitting_dualizes_to_averaging, MidDual,
};
pub use global::{
    build_global, localize, normalize_support, point_action_matrix, point_function_module,
    s_iso_global, zero_sum_point_lattice, GlobalLevel, Localization, NormalizedSupport,
    SupportCorrection,
};
pub use local::{
    build_local, inflate_local, s_iso_local, zero_sum_scaling_factor, LocalInflation, LocalLevel,
};
pub use tower::{
    inflate_global, localization_square_commutes, pullback_split_identity, tower_dotting,
    zero_sum_inflation_factor, GlobalInflation, TowerDotting,
};

use core::fmt;

/// Errors from level construction and the comparison-map toolkit.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CmpError {
    /// A construction needs `factor` to divide `value`.
    DivisibilityRequired { factor: usize, value: usize },
    /// The given levels and connecting data do not fit together as a tower.
    TowerMismatch,
    /// The decomposition subgroups at the marked points do not cover the
    /// group; carries the least element outside their union.
    CoverConditionFails { witness: usize },
    /// The requested point is not one of the marked coset points.
    PlaceNotInDottedSet { point: usize },
}

impl fmt::Display for CmpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CmpError::DivisibilityRequired { factor, value } => {
                write!(f, "construction needs {factor} to divide {value}")
            }
            CmpError::TowerMismatch => write!(f, "levels and tower data do not fit together"),
            CmpError::CoverConditionFails { witness } => {
                write!(
                    f,
                    "marked stabilizers do not cover the group (element {witness} is missed)"
                )
            }
            CmpError::PlaceNotInDottedSet { point } => {
                write!(f, "point {point} is not a marked point")
            }
        }
    }
}
