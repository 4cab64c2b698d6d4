//! The lattice of equivariant maps between two modules.

use crate::exactlin::{integer_kernel, IntMatrix, Lattice, RatMatrix};

use super::module::GModule;
use super::GmodError;

/// All equivariant integral maps `X -> M`, written on the lattice bases and
/// flattened row-major: coordinate `(i, j) -> i * rank(X) + j` holds the
/// matrix entry sending basis slot `j` of `X` to basis slot `i` of `M`.
///
/// Requires torsion-free modules; the commutation law `B_M(g) T = T B_X(g)`
/// is solved exactly over the integers.
pub fn equivariant_hom_lattice(x: &GModule, m: &GModule) -> Result<Lattice, GmodError> {
    if x.group() != m.group() {
        return Err(GmodError::GroupMismatch);
    }
    if !x.is_torsion_free() || !m.is_torsion_free() {
        return Err(GmodError::TorsionFreeRequired);
    }
    let (rx, rm) = (x.rank(), m.rank());
    let bx = x.basis_action();
    let bm = m.basis_action();
    let n = x.group().order();
    // one block of rows per group element, each encoding
    // B_M(g) T - T B_X(g) = 0 entrywise in the unknowns T_{ij}
    let unknowns = rm * rx;
    let mut sys = IntMatrix::zero(n * unknowns, unknowns);
    for g in 0..n {
        for i in 0..rm {
            for j in 0..rx {
                let row = g * unknowns + i * rx + j;
                for k in 0..rm {
                    let v = sys[(row, k * rx + j)].clone() + &bm[g][(i, k)];
                    sys[(row, k * rx + j)] = v;
                }
                for k in 0..rx {
                    let v = sys[(row, i * rx + k)].clone() - &bx[g][(k, j)];
                    sys[(row, i * rx + k)] = v;
                }
            }
        }
    }
    Ok(Lattice::from_rat_rows(&integer_kernel(&sys).to_rat()))
}

/// Reshape a flattened hom-lattice member back into a matrix on the bases.
pub fn hom_entry_matrix(v: &crate::exactlin::RatVector, rx: usize, rm: usize) -> RatMatrix {
    assert_eq!(v.len(), rm * rx, "flattened hom length mismatch");
    RatMatrix::from_fn(rm, rx, |i, j| v[i * rx + j].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::RatVector;
    use crate::gmod::cohomology::invariant_lattice;
    use crate::gmod::group::FiniteGroup;
    use alloc::sync::Arc;
    use alloc::vec::Vec;
    use num_traits::Zero;

    fn c2() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(2))
    }

    #[test]
    fn hom_from_sign_into_regular() {
        let sign = GModule::one_dimensional(c2(), &[1, -1]).unwrap();
        let reg = GModule::regular(c2());
        let h = equivariant_hom_lattice(&sign, &reg).unwrap();
        assert_eq!(h.rank(), 1);
        // generated by y -> (y, -y) up to sign
        let gen = h.basis_vectors().remove(0);
        let m = hom_entry_matrix(&gen, 1, 2);
        assert_eq!(m[(0, 0)].clone() + m[(1, 0)].clone(), crate::exactlin::rat(0, 1));
        assert!(!m[(0, 0)].is_zero());
    }

    #[test]
    fn hom_between_different_characters_vanishes() {
        let sign = GModule::one_dimensional(c2(), &[1, -1]).unwrap();
        let triv = GModule::trivial(c2(), 1);
        assert!(equivariant_hom_lattice(&triv, &sign).unwrap().is_zero());
        assert!(equivariant_hom_lattice(&sign, &triv).unwrap().is_zero());
    }

    #[test]
    fn identity_is_always_present() {
        let mods = [
            GModule::trivial(c2(), 2),
            GModule::regular(c2()),
            GModule::one_dimensional(c2(), &[1, -1]).unwrap(),
            GModule::regular(Arc::new(FiniteGroup::cyclic(3))),
        ];
        for m in &mods {
            let h = equivariant_hom_lattice(m, m).unwrap();
            let r = m.rank();
            let id_flat = RatVector::from(
                (0..r * r)
                    .map(|k| {
                        if k / r == k % r {
                            crate::exactlin::rat(1, 1)
                        } else {
                            crate::exactlin::rat(0, 1)
                        }
                    })
                    .collect::<Vec<_>>(),
            );
            assert!(h.contains(&id_flat));
        }
    }

    #[test]
    fn hom_rank_matches_invariants_of_dual_tensor() {
        let pairs = [
            (
                GModule::one_dimensional(c2(), &[1, -1]).unwrap(),
                GModule::regular(c2()),
            ),
            (GModule::regular(c2()), GModule::regular(c2())),
            (
                GModule::trivial(Arc::new(FiniteGroup::cyclic(3)), 2),
                GModule::regular(Arc::new(FiniteGroup::cyclic(3))),
            ),
        ];
        for (x, m) in &pairs {
            let h = equivariant_hom_lattice(x, m).unwrap();
            let t = x.dual().unwrap().tensor(m).unwrap();
            let inv = invariant_lattice(&t, &(0..t.group().order()).collect::<Vec<_>>());
            assert_eq!(h.rank(), inv.rank());
        }
    }
}
