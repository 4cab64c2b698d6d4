//! Modules over integral group rings, presented as a pair of lattices
//! (ambient and a stable sublattice) with an action on the ambient space.
//!
//! The module is the quotient `amb / sub`; torsion-free modules carry the
//! zero sublattice. All cohomological constructions reduce to lattice
//! arithmetic on this pair.

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::exactlin::{
    int, subquotient, IntMatrix, Lattice, Rat, RatMatrix, RatVector, Subquotient,
};

use super::group::{FiniteGroup, GroupHom};
use super::GmodError;

/// A finitely generated module over `Z[G]`: the quotient of `amb` by the
/// stable sublattice `sub`, with `action[g]` invertible on the ambient space.
#[derive(Clone, Debug)]
pub struct GModule {
    group: Arc<FiniteGroup>,
    amb: Lattice,
    sub: Lattice,
    action: Vec<RatMatrix>,
}

impl GModule {
    /// Validates: one matrix per element, identity acts as identity, the
    /// table law `action(g) action(h) = action(gh)`, and stability of both
    /// lattices.
    pub fn new(
        group: Arc<FiniteGroup>,
        amb: Lattice,
        sub: Lattice,
        action: Vec<RatMatrix>,
    ) -> Result<Self, GmodError> {
        let n = group.order();
        let dim = amb.dim();
        if action.len() != n {
            return Err(GmodError::ActionShapeMismatch);
        }
        if sub.dim() != dim || action.iter().any(|a| a.rows() != dim || a.cols() != dim) {
            return Err(GmodError::ActionShapeMismatch);
        }
        if !sub.is_sublattice_of(&amb) {
            return Err(GmodError::SublatticeNotContained);
        }
        if action[group.identity()] != RatMatrix::identity(dim) {
            return Err(GmodError::IdentityActsNontrivially);
        }
        for g in 0..n {
            for h in 0..n {
                if action[g].mul(&action[h]) != action[group.mul(g, h)] {
                    return Err(GmodError::ActionNotAHomomorphism { g, h });
                }
            }
        }
        for (g, a) in action.iter().enumerate() {
            for b in amb.basis_vectors() {
                if !amb.contains(&a.mul_vec(&b)) {
                    return Err(GmodError::LatticeNotStable { g });
                }
            }
            for s in sub.basis_vectors() {
                if !sub.contains(&a.mul_vec(&s)) {
                    return Err(GmodError::LatticeNotStable { g });
                }
            }
        }
        Ok(GModule {
            group,
            amb,
            sub,
            action,
        })
    }

    /// Torsion-free module: `sub = 0`.
    pub fn torsion_free(
        group: Arc<FiniteGroup>,
        amb: Lattice,
        action: Vec<RatMatrix>,
    ) -> Result<Self, GmodError> {
        let dim = amb.dim();
        GModule::new(group, amb, Lattice::zero(dim), action)
    }

    /// `Z^rank` with every element acting as the identity.
    pub fn trivial(group: Arc<FiniteGroup>, rank: usize) -> Self {
        let action = alloc::vec![RatMatrix::identity(rank); group.order()];
        GModule::torsion_free(group, Lattice::standard(rank), action)
            .expect("trivial action is valid")
    }

    /// The group ring `Z[G]` with the left regular action: basis slot `h`
    /// is sent by `g` to slot `gh`.
    pub fn regular(group: Arc<FiniteGroup>) -> Self {
        let n = group.order();
        let perms: Vec<Vec<usize>> = (0..n)
            .map(|g| (0..n).map(|h| group.mul(g, h)).collect())
            .collect();
        GModule::from_permutation_action(group, n, &perms).expect("regular action is valid")
    }

    /// `Z[G]^rank` with the block regular action: slot `(i, h)` at index
    /// `i * |G| + h` is sent by `g` to `(i, gh)`. The module induced from
    /// the trivial subgroup by a free module of the given rank.
    pub fn induced(group: Arc<FiniteGroup>, rank: usize) -> Self {
        let n = group.order();
        let perms: Vec<Vec<usize>> = (0..n)
            .map(|g| {
                (0..rank * n)
                    .map(|x| (x / n) * n + group.mul(g, x % n))
                    .collect()
            })
            .collect();
        GModule::from_permutation_action(group, rank * n, &perms).expect("induced action is valid")
    }

    /// Rank-one module where `g` acts by the sign `values[g]`; the values
    /// must form a homomorphism into `{1, -1}`.
    pub fn one_dimensional(group: Arc<FiniteGroup>, values: &[i64]) -> Result<Self, GmodError> {
        if values.len() != group.order() || values.iter().any(|v| v.abs() != 1) {
            return Err(GmodError::ActionShapeMismatch);
        }
        let action: Vec<RatMatrix> = values
            .iter()
            .map(|&v| RatMatrix::identity(1).scale(&Rat::from_integer(int(v))))
            .collect();
        GModule::torsion_free(group, Lattice::standard(1), action)
    }

    /// `Z^points` permuted: `perms[g][j]` is the image slot of basis slot `j`.
    pub fn from_permutation_action(
        group: Arc<FiniteGroup>,
        points: usize,
        perms: &[Vec<usize>],
    ) -> Result<Self, GmodError> {
        let action: Vec<RatMatrix> = perms
            .iter()
            .map(|p| {
                RatMatrix::from_fn(points, points, |r, c| {
                    if p[c] == r {
                        Rat::one()
                    } else {
                        Rat::zero()
                    }
                })
            })
            .collect();
        GModule::torsion_free(group, Lattice::standard(points), action)
    }

    /// View a module over `target` through a homomorphism `p` from another
    /// group: `g` acts as `action(p(g))`. Used for level changes.
    pub fn pullback(
        &self,
        new_group: Arc<FiniteGroup>,
        p: &GroupHom,
    ) -> Result<Self, GmodError> {
        if p.source_order() != new_group.order() || p.target_order() != self.group.order() {
            return Err(GmodError::GroupMismatch);
        }
        let action: Vec<RatMatrix> = (0..new_group.order())
            .map(|g| self.action[p.apply(g)].clone())
            .collect();
        GModule::new(new_group, self.amb.clone(), self.sub.clone(), action)
    }

    /// Same group and action, new lattice pair (checked for stability).
    pub fn with_lattices(&self, amb: Lattice, sub: Lattice) -> Result<Self, GmodError> {
        GModule::new(self.group.clone(), amb, sub, self.action.clone())
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.amb.dim()
    }

    pub fn rank(&self) -> usize {
        self.amb.rank()
    }

    pub fn ambient(&self) -> &Lattice {
        &self.amb
    }

    pub fn sublattice(&self) -> &Lattice {
        &self.sub
    }

    pub fn action(&self, g: usize) -> &RatMatrix {
        &self.action[g]
    }

    pub fn is_torsion_free(&self) -> bool {
        self.sub.is_zero()
    }

    /// The module's own abelian-group structure `amb / sub`.
    pub fn underlying_group(&self) -> Subquotient {
        subquotient(&self.sub, &self.amb).expect("sub is stable inside amb")
    }

    /// The action written on the ambient-lattice basis: integer matrices
    /// `B(g)` with `action(g) basis_j = sum_i B(g)_{ij} basis_i`. Unimodular
    /// since the action is invertible and lattice-stable.
    pub fn basis_action(&self) -> Vec<IntMatrix> {
        let basis = self.amb.basis_vectors();
        (0..self.group.order())
            .map(|g| {
                let images: Vec<RatVector> =
                    basis.iter().map(|b| self.action[g].mul_vec(b)).collect();
                self.amb
                    .coords_of_many(&images)
                    .expect("action is lattice-stable")
            })
            .collect()
    }

    /// Coordinatized copy: `Z^rank` with the basis action. Isomorphic to the
    /// original when torsion-free; loses `sub`.
    pub fn coordinatized(&self) -> Result<GModule, GmodError> {
        if !self.is_torsion_free() {
            return Err(GmodError::TorsionFreeRequired);
        }
        let r = self.rank();
        let action: Vec<RatMatrix> = self.basis_action().iter().map(IntMatrix::to_rat).collect();
        GModule::torsion_free(self.group.clone(), Lattice::standard(r), action)
    }

    /// Dual of a torsion-free module: `Z^rank` with `g` acting by the
    /// inverse-transpose of the basis action, i.e. `B(g^{-1})^T`.
    pub fn dual(&self) -> Result<GModule, GmodError> {
        if !self.is_torsion_free() {
            return Err(GmodError::TorsionFreeRequired);
        }
        let r = self.rank();
        let basis = self.basis_action();
        let action: Vec<RatMatrix> = (0..self.group.order())
            .map(|g| basis[self.group.inverse(g)].transpose().to_rat())
            .collect();
        GModule::torsion_free(self.group.clone(), Lattice::standard(r), action)
    }

    /// Tensor product over `Z` of two torsion-free modules, on coordinates
    /// `(i, j) -> i * rank(other) + j` with the Kronecker action.
    pub fn tensor(&self, other: &GModule) -> Result<GModule, GmodError> {
        if !Arc::ptr_eq(&self.group, &other.group) && self.group != other.group {
            return Err(GmodError::GroupMismatch);
        }
        if !self.is_torsion_free() || !other.is_torsion_free() {
            return Err(GmodError::TorsionFreeRequired);
        }
        let (ra, rb) = (self.rank(), other.rank());
        let ba = self.basis_action();
        let bb = other.basis_action();
        let action: Vec<RatMatrix> = (0..self.group.order())
            .map(|g| {
                RatMatrix::from_fn(ra * rb, ra * rb, |r, c| {
                    let (i1, j1) = (r / rb, r % rb);
                    let (i2, j2) = (c / rb, c % rb);
                    Rat::from_integer(&ba[g][(i1, i2)] * &bb[g][(j1, j2)])
                })
            })
            .collect();
        GModule::torsion_free(self.group.clone(), Lattice::standard(ra * rb), action)
    }
}

/// An equivariant map of modules over the same group, as a matrix on the
/// ambient spaces. Equivariance and lattice mapping are checked on the
/// source lattice (the matrix is only meaningful on its span).
#[derive(Clone, Debug)]
pub struct GMap {
    source: Arc<GModule>,
    target: Arc<GModule>,
    matrix: RatMatrix,
}

impl GMap {
    pub fn new(
        source: Arc<GModule>,
        target: Arc<GModule>,
        matrix: RatMatrix,
    ) -> Result<Self, GmodError> {
        if source.group() != target.group() {
            return Err(GmodError::GroupMismatch);
        }
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(GmodError::ActionShapeMismatch);
        }
        for b in source.amb.basis_vectors() {
            if !target.amb.contains(&matrix.mul_vec(&b)) {
                return Err(GmodError::DoesNotPreserveLattice);
            }
            for g in 0..source.group.order() {
                // T(g b) - g T(b) must vanish modulo the target sublattice
                let lhs = matrix.mul_vec(&source.action[g].mul_vec(&b));
                let rhs = target.action[g].mul_vec(&matrix.mul_vec(&b));
                let diff = lhs.sub(&rhs);
                if !(diff.is_zero() || target.sub.contains(&diff)) {
                    return Err(GmodError::NotEquivariant { g });
                }
            }
        }
        for s in source.sub.basis_vectors() {
            let img = matrix.mul_vec(&s);
            if !(img.is_zero() || target.sub.contains(&img)) {
                return Err(GmodError::DoesNotPreserveLattice);
            }
        }
        Ok(GMap {
            source,
            target,
            matrix,
        })
    }

    pub fn identity(module: Arc<GModule>) -> Self {
        let matrix = RatMatrix::identity(module.dim());
        GMap {
            source: module.clone(),
            target: module,
            matrix,
        }
    }

    pub fn source(&self) -> &Arc<GModule> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GModule> {
        &self.target
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    pub fn apply(&self, v: &RatVector) -> RatVector {
        self.matrix.mul_vec(v)
    }

    /// `self` after `earlier`.
    pub fn compose(&self, earlier: &GMap) -> Result<GMap, GmodError> {
        GMap::new(
            earlier.source.clone(),
            self.target.clone(),
            self.matrix.mul(&earlier.matrix),
        )
    }

    /// Surjectivity as a map of quotients: image of the source lattice plus
    /// the target sublattice fills the target lattice.
    pub fn is_surjective(&self) -> bool {
        let img = self.source.amb.image(&self.matrix).sum(&self.target.sub);
        self.target.amb.is_sublattice_of(&img)
    }

    /// Injectivity as a map of quotients: anything sent into the target
    /// sublattice already lies in the source sublattice.
    pub fn is_injective(&self) -> bool {
        self.kernel_lattice().is_sublattice_of(&self.source.sub)
    }

    /// `{x in source amb : T x in target sub}` (contains the source sub).
    pub fn kernel_lattice(&self) -> Lattice {
        self.source.amb.preimage(&self.matrix, &self.target.sub)
    }

    /// Kernel as a module: the kernel lattice over the source sublattice.
    pub fn kernel_module(&self) -> GModule {
        self.source
            .with_lattices(self.kernel_lattice(), self.source.sub.clone())
            .expect("kernel is action-stable")
    }

    /// Image as a submodule of the target: image lattice plus target sub.
    pub fn image_module(&self) -> GModule {
        let img = self.source.amb.image(&self.matrix).sum(&self.target.sub);
        self.target
            .with_lattices(img, self.target.sub.clone())
            .expect("image is action-stable")
    }

    /// Cokernel `target / (image + target sub)` as a plain abelian group.
    pub fn cokernel(&self) -> Subquotient {
        let img = self.source.amb.image(&self.matrix).sum(&self.target.sub);
        subquotient(&img, &self.target.amb).expect("image lies in the target lattice")
    }

    /// Exactness at the middle of `self` then `later`: image = kernel.
    pub fn exact_with(&self, later: &GMap) -> bool {
        let img = self.source.amb.image(&self.matrix).sum(&self.target.sub);
        let ker = later.kernel_lattice().sum(&self.target.sub);
        img == ker
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(2))
    }

    #[test]
    fn regular_module_validates() {
        let m = GModule::regular(c2());
        assert_eq!(m.rank(), 2);
        assert!(m.is_torsion_free());
        // g swaps the two slots
        let v = RatVector::from_i64s(&[1, 0]);
        assert_eq!(m.action(1).mul_vec(&v), RatVector::from_i64s(&[0, 1]));
    }

    #[test]
    fn sign_values_must_be_a_homomorphism() {
        let c4 = Arc::new(FiniteGroup::cyclic(4));
        assert!(GModule::one_dimensional(c4.clone(), &[1, -1, 1, -1]).is_ok());
        assert!(matches!(
            GModule::one_dimensional(c4, &[1, -1, -1, -1]),
            Err(GmodError::ActionNotAHomomorphism { .. })
        ));
    }

    #[test]
    fn unstable_lattice_is_rejected() {
        // a claimed sublattice that is not contained in the ambient lattice
        let g = c2();
        let action = alloc::vec![RatMatrix::identity(1); 2];
        let amb = Lattice::from_rows(1, &[RatVector::from_i64s(&[2])]);
        let sub = Lattice::standard(1);
        assert!(matches!(
            GModule::new(g, amb, sub, action),
            Err(GmodError::SublatticeNotContained)
        ));
    }

    #[test]
    fn gmap_checks_equivariance() {
        let g = c2();
        let reg = Arc::new(GModule::regular(g.clone()));
        let triv = Arc::new(GModule::trivial(g.clone(), 1));
        // the sum map (1, 1) is equivariant; the projection (1, 0) is not
        let sum = RatMatrix::from_i64s(&[&[1, 1]]);
        assert!(GMap::new(reg.clone(), triv.clone(), sum).is_ok());
        let proj = RatMatrix::from_i64s(&[&[1, 0]]);
        assert!(matches!(
            GMap::new(reg, triv, proj),
            Err(GmodError::NotEquivariant { .. })
        ));
    }

    #[test]
    fn kernel_image_cokernel_of_the_sum_map() {
        let g = c2();
        let reg = Arc::new(GModule::regular(g.clone()));
        let triv = Arc::new(GModule::trivial(g.clone(), 1));
        let sum = GMap::new(reg, triv, RatMatrix::from_i64s(&[&[1, 1]])).unwrap();
        assert!(sum.is_surjective());
        assert!(!sum.is_injective());
        let k = sum.kernel_module();
        assert_eq!(k.rank(), 1);
        assert!(k.ambient().contains(&RatVector::from_i64s(&[1, -1])));
        assert!(sum.cokernel().is_trivial());
    }

    #[test]
    fn quotient_module_maps_respect_sub() {
        // amb = Z^2 regular C2, sub = diagonal Z(1,1): the quotient is Z via
        // x0 - x1, the swap negates it, and (1,0) = (2,1) as classes
        let g = c2();
        let reg = GModule::regular(g.clone());
        let sub = Lattice::from_rows(2, &[RatVector::from_i64s(&[1, 1])]);
        let q = Arc::new(reg.with_lattices(Lattice::standard(2), sub).unwrap());
        let id = GMap::new(q.clone(), q.clone(), RatMatrix::identity(2)).unwrap();
        assert!(id.is_surjective() && id.is_injective());
        let uq = q.underlying_group();
        assert!(uq
            .class_eq(
                &RatVector::from_i64s(&[1, 0]),
                &RatVector::from_i64s(&[2, 1])
            )
            .unwrap());
        assert!(!uq
            .class_eq(
                &RatVector::from_i64s(&[1, 0]),
                &RatVector::from_i64s(&[0, 1])
            )
            .unwrap());
        assert_eq!(uq.free_rank(), 1);
    }

    #[test]
    fn dual_and_tensor_have_the_expected_actions() {
        let g = c2();
        let sign = GModule::one_dimensional(g.clone(), &[1, -1]).unwrap();
        let dual = sign.dual().unwrap();
        assert_eq!(dual.action(1), sign.action(1));
        let reg = GModule::regular(g.clone());
        let t = sign.tensor(&reg).unwrap();
        assert_eq!(t.rank(), 2);
        // (sign (x) regular): g sends e_(0,h) to -e_(1,gh)
        let v = RatVector::from_i64s(&[1, 0]);
        assert_eq!(t.action(1).mul_vec(&v), RatVector::from_i64s(&[0, -1]));
    }

    #[test]
    fn pullback_through_projection() {
        let v4 = Arc::new(FiniteGroup::direct_product(
            &FiniteGroup::cyclic(2),
            &FiniteGroup::cyclic(2),
        ));
        let c2g = c2();
        let p = GroupHom::new(&v4, &c2g, alloc::vec![0, 0, 1, 1]).unwrap();
        let sign = GModule::one_dimensional(c2g, &[1, -1]).unwrap();
        let pulled = sign.pullback(v4.clone(), &p).unwrap();
        assert_eq!(pulled.group().order(), 4);
        assert_eq!(pulled.action(2), sign.action(1));
        assert_eq!(pulled.action(1), sign.action(0));
    }
}
