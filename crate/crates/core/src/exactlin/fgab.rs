//! Finitely generated abelian groups as cokernel presentations
//! `Z^n / col-span(R)`, plus subquotients of lattices.

use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, Zero};

use super::mat::{Int, IntMatrix, Rat, RatVector};
use super::snf::{smith_normal_form, SmithDecomposition};
use super::{ExactlinError, Lattice};

/// `Z^n / col-span(rel)`, with Smith data cached for canonical class forms.
#[derive(Clone, Debug)]
pub struct FgAbPresentation {
    n: usize,
    rel: IntMatrix,
    smith: SmithDecomposition,
}

impl FgAbPresentation {
    /// `rel` is `n x m`; its columns are the relations.
    pub fn new(n: usize, rel: IntMatrix) -> Self {
        assert_eq!(rel.rows(), n, "relation matrix must have n rows");
        let smith = smith_normal_form(&rel);
        FgAbPresentation { n, rel, smith }
    }

    pub fn generators(&self) -> usize {
        self.n
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.rel
    }

    /// Diagonal entry for generator slot `i` in Smith coordinates: the class
    /// of slot `i` is `Z/d_i` (`d_i = 0` meaning a free `Z` slot).
    fn slot_modulus(&self, i: usize) -> Int {
        self.smith.diag(i)
    }

    /// All nonzero invariant factors, including trivial ones.
    pub fn diagonal(&self) -> Vec<Int> {
        (0..self.n)
            .map(|i| self.slot_modulus(i))
            .filter(|d| !d.is_zero())
            .collect()
    }

    /// Invariant factors with the trivial entries dropped: `d_1 | d_2 | ...`.
    pub fn invariant_factors(&self) -> Vec<Int> {
        self.diagonal().into_iter().filter(|d| !d.is_one()).collect()
    }

    /// Rank of the free part.
    pub fn free_rank(&self) -> usize {
        self.n - self.diagonal().len()
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank() == 0 && self.invariant_factors().is_empty()
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<Int> {
        if self.free_rank() > 0 {
            return None;
        }
        Some(
            self.invariant_factors()
                .iter()
                .fold(Int::one(), |acc, d| acc * d),
        )
    }

    /// Canonical form of the class of `v`: Smith coordinates reduced modulo
    /// the invariant factors. Two vectors are congruent modulo the relations
    /// iff their canonical forms agree.
    pub fn reduce(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(v.len(), self.n, "element length mismatch");
        let mut c = self.smith.u.mul_vec(v);
        for (i, ci) in c.iter_mut().enumerate() {
            let d = self.slot_modulus(i);
            if !d.is_zero() {
                *ci = ci.mod_floor(&d);
            }
        }
        c
    }

    pub fn class_eq(&self, a: &[Int], b: &[Int]) -> bool {
        self.reduce(a) == self.reduce(b)
    }

    pub fn is_zero_class(&self, v: &[Int]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// A representative in `Z^n` of the class with the given canonical form.
    pub fn representative(&self, reduced: &[Int]) -> Vec<Int> {
        assert_eq!(reduced.len(), self.n);
        self.smith.u_inv.mul_vec(reduced)
    }

    /// Additive order of the class of `v`: `None` for infinite order.
    pub fn class_order(&self, v: &[Int]) -> Option<Int> {
        let c = self.reduce(v);
        let mut order = Int::one();
        for (i, ci) in c.iter().enumerate() {
            let d = self.slot_modulus(i);
            if d.is_zero() {
                if !ci.is_zero() {
                    return None;
                }
            } else if !ci.is_zero() {
                let step = &d / d.gcd(ci);
                order = order.lcm(&step);
            }
        }
        Some(order)
    }

    /// Generators (as vectors in `Z^n`) of the torsion subgroup, one per
    /// nontrivial invariant factor, paired with their orders.
    pub fn torsion_generators(&self) -> Vec<(Vec<Int>, Int)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            let d = self.slot_modulus(i);
            if d.is_zero() || d.is_one() {
                continue;
            }
            let mut e = alloc::vec![Int::zero(); self.n];
            e[i] = Int::one();
            out.push((self.smith.u_inv.mul_vec(&e), d));
        }
        out
    }

    /// Same abstract group: equal free rank and nontrivial invariant factors.
    pub fn isomorphic_to(&self, other: &FgAbPresentation) -> bool {
        self.free_rank() == other.free_rank()
            && self.invariant_factors() == other.invariant_factors()
    }
}

/// The quotient `amb / sub` of lattices in the same `Q^n`, with class
/// arithmetic on ambient vectors.
#[derive(Clone, Debug)]
pub struct Subquotient {
    amb: Lattice,
    sub: Lattice,
    pres: FgAbPresentation,
}

/// Present `amb / sub`. Errors with [`ExactlinError::NotASublattice`] when a
/// basis vector of `sub` is not a member of `amb`.
pub fn subquotient(sub: &Lattice, amb: &Lattice) -> Result<Subquotient, ExactlinError> {
    assert_eq!(sub.dim(), amb.dim(), "ambient dim mismatch");
    let basis = sub.basis_vectors();
    let rel = match amb.coords_of_many(&basis) {
        Some(m) => m,
        None => {
            // locate the offending vector for the error report
            let index = basis
                .iter()
                .position(|v| !amb.contains(v))
                .unwrap_or(0);
            return Err(ExactlinError::NotASublattice { index });
        }
    };
    Ok(Subquotient {
        amb: amb.clone(),
        sub: sub.clone(),
        pres: FgAbPresentation::new(amb.rank(), rel),
    })
}

impl Subquotient {
    pub fn ambient(&self) -> &Lattice {
        &self.amb
    }

    pub fn sublattice(&self) -> &Lattice {
        &self.sub
    }

    pub fn presentation(&self) -> &FgAbPresentation {
        &self.pres
    }

    pub fn invariant_factors(&self) -> Vec<Int> {
        self.pres.invariant_factors()
    }

    pub fn free_rank(&self) -> usize {
        self.pres.free_rank()
    }

    pub fn order(&self) -> Option<Int> {
        self.pres.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.pres.is_trivial()
    }

    /// Canonical form of the class of `v` (must be a member of the ambient
    /// lattice).
    pub fn class_of(&self, v: &RatVector) -> Result<Vec<Int>, ExactlinError> {
        let coords = self
            .amb
            .coords_of(v)
            .ok_or(ExactlinError::NotInLattice)?;
        Ok(self.pres.reduce(&coords))
    }

    pub fn class_eq(&self, a: &RatVector, b: &RatVector) -> Result<bool, ExactlinError> {
        Ok(self.class_of(a)? == self.class_of(b)?)
    }

    pub fn is_zero_class(&self, v: &RatVector) -> Result<bool, ExactlinError> {
        Ok(self.class_of(v)?.iter().all(Zero::is_zero))
    }

    pub fn class_order(&self, v: &RatVector) -> Result<Option<Int>, ExactlinError> {
        let coords = self
            .amb
            .coords_of(v)
            .ok_or(ExactlinError::NotInLattice)?;
        Ok(self.pres.class_order(&coords))
    }

    /// An ambient-lattice representative of the class with the given
    /// canonical form.
    pub fn representative(&self, reduced: &[Int]) -> RatVector {
        let coords = self.pres.representative(reduced);
        self.vector_of_coords(&coords)
    }

    fn vector_of_coords(&self, coords: &[Int]) -> RatVector {
        let basis = self.amb.basis_vectors();
        let mut acc = RatVector::zero(self.amb.dim());
        for (c, b) in coords.iter().zip(&basis) {
            acc = acc.add(&b.scale(&Rat::from_integer(c.clone())));
        }
        acc
    }

    /// Ambient-lattice generators of the torsion subgroup with their orders.
    pub fn torsion_generators(&self) -> Vec<(RatVector, Int)> {
        self.pres
            .torsion_generators()
            .iter()
            .map(|(v, d)| (self.vector_of_coords(v), d.clone()))
            .collect()
    }

    /// Ambient-lattice representatives generating the whole quotient (free
    /// slots included), with the slot modulus (`0` for free slots).
    pub fn generators(&self) -> Vec<(RatVector, Int)> {
        let mut out = Vec::new();
        let n = self.pres.generators();
        for i in 0..n {
            let d = self.pres.slot_modulus(i);
            if d.is_one() {
                continue;
            }
            let mut e = alloc::vec![Int::zero(); n];
            e[i] = Int::one();
            out.push((self.vector_of_coords(&self.pres.representative(&e)), d));
        }
        out
    }

    pub fn isomorphic_to(&self, other: &Subquotient) -> bool {
        self.pres.isomorphic_to(&other.pres)
    }
}
