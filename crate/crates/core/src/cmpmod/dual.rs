//! Integral dual of the local middle lattice inside the group ring: the
//! span of the scaled delta basis and the constant function, paired with
//! the middle lattice by coordinatewise summation. Carries the norm
//! computations and the four short exact sequences that pin the dual down.

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::exactlin::{int, rat, smith_normal_form, subquotient, Int, Lattice, Rat, RatMatrix, RatVector};
use crate::gmod::{GMap, GModule, GroupHom};

use super::local::LocalLevel;
use super::CmpError;

/// Dual of the middle lattice: `modulus`-scaled integer functions plus the
/// constants, inside the group ring with the translation action.
#[derive(Clone, Debug)]
pub struct MidDual {
    modulus: usize,
    module: Arc<GModule>,
    // middle lattice of the same level, kept for the pairing checks
    mid: Lattice,
}

/// Build the dual of the middle lattice over `group` with the given
/// denominator.
pub fn dual_mid(group: Arc<crate::gmod::FiniteGroup>, modulus: usize) -> MidDual {
    assert!(modulus >= 1, "denominator must be positive");
    let n = group.order();
    let level = super::local::build_local(group.clone(), modulus);
    let mut rows: Vec<RatVector> = (0..n)
        .map(|i| RatVector::unit(n, i).scale(&rat(modulus as i64, 1)))
        .collect();
    rows.push(RatVector::from(alloc::vec![Rat::one(); n]));
    let lattice = Lattice::from_rows(n, &rows);
    let module = Arc::new(
        GModule::regular(group)
            .with_lattices(lattice, Lattice::zero(n))
            .expect("both spanning families are translation-stable"),
    );
    MidDual {
        modulus,
        module,
        mid: level.m_mid().ambient().clone(),
    }
}

impl MidDual {
    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn module(&self) -> &Arc<GModule> {
        &self.module
    }

    fn order(&self) -> usize {
        self.module.group().order()
    }

    /// Gram matrix of the summation pairing on the two lattice bases.
    pub fn pairing_gram(&self) -> RatMatrix {
        self.mid
            .basis_matrix()
            .mul(&self.module.ambient().basis_matrix().transpose())
    }

    /// The summation pairing is integral and unimodular on the bases.
    pub fn pairing_is_perfect(&self) -> bool {
        let Some(gram) = self.pairing_gram().to_int() else {
            return false;
        };
        let n = self.order();
        let s = smith_normal_form(&gram);
        s.rank == n && (0..n).all(|i| s.diag(i).is_one())
    }

    /// Matrix of the norm element acting on the group ring.
    pub fn norm(&self) -> RatMatrix {
        let all: Vec<usize> = (0..self.order()).collect();
        crate::gmod::norm_matrix(&self.module, &all)
    }

    /// Image of the dual lattice under the norm map.
    pub fn norm_image(&self) -> Lattice {
        self.module.ambient().image(&self.norm())
    }

    /// The middle lattice sits between the scaled functions and the full
    /// scaled group ring, with the residue of the total sum as cokernel.
    pub fn covering_sequence_is_exact(&self) -> bool {
        let n = self.order();
        let scaled = Lattice::scaled_standard(n, &int(self.modulus as i64));
        let total = RatMatrix::from_fn(1, n, |_, _| Rat::one());
        let integers = Lattice::standard(1);
        let composite_zero = self.mid.image(&total).is_sublattice_of(&integers);
        let middle = scaled.preimage(&total, &integers) == self.mid;
        let onto = Lattice::scaled_standard(1, &int(self.modulus as i64))
            .is_sublattice_of(&scaled.image(&total).sum(&integers));
        self.mid.is_sublattice_of(&scaled) && composite_zero && middle && onto
    }

    /// The integer functions are exactly the kernel of the reduction of the
    /// middle lattice onto the finite quotient.
    pub fn quotient_sequence_is_exact(&self) -> bool {
        let standard = Lattice::standard(self.order());
        standard.is_sublattice_of(&self.mid) && self.mid.intersect(&standard) == standard
    }

    /// The scaled integer functions are exactly the kernel of the residue
    /// of the identity coordinate on the dual lattice.
    pub fn dual_residue_sequence_is_exact(&self) -> bool {
        let n = self.order();
        let scaled_int = Lattice::standard(n)
            .image(&RatMatrix::identity(n).scale(&rat(self.modulus as i64, 1)));
        let first = RatMatrix::from_fn(1, n, |_, c| {
            if c == 0 {
                Rat::one()
            } else {
                Rat::zero()
            }
        });
        let residue_target = Lattice::standard(1)
            .image(&RatMatrix::identity(1).scale(&rat(self.modulus as i64, 1)));
        let dual = self.module.ambient();
        let composite_zero = scaled_int.image(&first).is_sublattice_of(&residue_target);
        let middle = dual.preimage(&first, &residue_target) == scaled_int;
        let onto = Lattice::standard(1).is_sublattice_of(&dual.image(&first).sum(&residue_target));
        scaled_int.is_sublattice_of(dual) && composite_zero && middle && onto
    }

    /// The dual lattice sits in the group ring with quotient a sum of
    /// `order - 1` cyclic groups of the denominator's size.
    pub fn dual_covering_sequence_is_exact(&self) -> bool {
        let n = self.order();
        let standard = Lattice::standard(n);
        if !self.module.ambient().is_sublattice_of(&standard) {
            return false;
        }
        let classes = subquotient(self.module.ambient(), &standard).expect("sublattice checked");
        let expected: Vec<Int> = if self.modulus > 1 {
            alloc::vec![int(self.modulus as i64); n - 1]
        } else {
            Vec::new()
        };
        classes.invariant_factors() == expected
    }

    /// All four defining sequences hold.
    pub fn exact_sequences_hold(&self) -> bool {
        self.covering_sequence_is_exact()
            && self.quotient_sequence_is_exact()
            && self.dual_residue_sequence_is_exact()
            && self.dual_covering_sequence_is_exact()
    }
}

/// Dual inflation: fiberwise summation from the upper dual down to the
/// lower one, the transpose of middle inflation. Returned as a map over the
/// upper group into the pulled-back lower dual. Requires the lower
/// denominator to divide the upper one.
pub fn dual_inflation(
    lower: &MidDual,
    upper: &MidDual,
    p: &GroupHom,
) -> Result<GMap, CmpError> {
    if p.source_order() != upper.order() || p.target_order() != lower.order() || !p.is_surjective()
    {
        return Err(CmpError::TowerMismatch);
    }
    if !upper.modulus.is_multiple_of(lower.modulus) {
        return Err(CmpError::DivisibilityRequired {
            factor: lower.modulus,
            value: upper.modulus,
        });
    }
    let summation = RatMatrix::from_fn(lower.order(), upper.order(), |s, t| {
        if p.apply(t) == s {
            Rat::one()
        } else {
            Rat::zero()
        }
    });
    let pulled = Arc::new(
        lower
            .module
            .pullback(upper.module.group().clone(), p)
            .expect("orders were checked"),
    );
    Ok(GMap::new(upper.module.clone(), pulled, summation)
        .expect("fiber sums keep both spanning families"))
}

/// Pairing adjunction between middle inflation and dual inflation: the
/// summation matrix is the transpose of the composition matrix.
pub fn inflations_are_adjoint(level_inflation: &GMap, dual_inflation: &GMap) -> bool {
    level_inflation.matrix() == &dual_inflation.matrix().transpose()
}

/// The constant section of the total sum dualizes to averaging: pairing a
/// section value against `y` returns the scaled total sum of `y`.
pub fn splitting_dualizes_to_averaging(level: &LocalLevel, s_iso: &GMap) -> bool {
    let n = level.group().order();
    let average = RatMatrix::from_fn(1, n, |_, _| rat(1, n as i64));
    s_iso.matrix().transpose() == average
}
