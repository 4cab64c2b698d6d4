//! Tate cohomology of finite-group modules in degrees -1 through 2, plus the
//! norm/augmentation package used everywhere else.
//!
//! Degrees -1 and 0 come from the norm map; degrees 1 and 2 from the
//! inhomogeneous cochain complex with cochains stored as full tuples indexed
//! by subgroup elements: a 1-cochain occupies coordinates
//! `(h, j) -> h_pos * dim + j`, a 2-cochain `(g, h, j) -> (g_pos * |H| +
//! h_pos) * dim + j`.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::exactlin::{rat, subquotient, Lattice, RatMatrix, Subquotient};

use super::module::{GMap, GModule};
use super::GmodError;

/// A computed cohomology group with class arithmetic on representatives.
#[derive(Clone, Debug)]
pub struct CohomologyGroup {
    pub degree: i32,
    /// Classes of cocycles (for degrees 1, 2: cochain tuples as documented
    /// in the module header) modulo coboundaries and sublattice values.
    pub classes: Subquotient,
}

impl CohomologyGroup {
    pub fn invariant_factors(&self) -> Vec<crate::exactlin::Int> {
        self.classes.invariant_factors()
    }

    pub fn free_rank(&self) -> usize {
        self.classes.free_rank()
    }

    pub fn is_trivial(&self) -> bool {
        self.classes.is_trivial()
    }

    /// Free rank and invariant factors: equal iff the groups are abstractly
    /// isomorphic.
    pub fn abstract_type(&self) -> (usize, Vec<crate::exactlin::Int>) {
        (self.free_rank(), self.invariant_factors())
    }
}

/// Sum of the action matrices over a subgroup.
pub fn norm_matrix(m: &GModule, subgroup: &[usize]) -> RatMatrix {
    let mut acc = RatMatrix::zero(m.dim(), m.dim());
    for &h in subgroup {
        acc = acc.add(m.action(h));
    }
    acc
}

/// `{x in amb : (h - 1) x in sub for all h}`: the lattice of invariant
/// classes.
pub fn invariant_lattice(m: &GModule, subgroup: &[usize]) -> Lattice {
    let mut acc = m.ambient().clone();
    let id = RatMatrix::identity(m.dim());
    for &h in subgroup {
        let t = m.action(h).sub(&id);
        acc = acc.intersect(&m.ambient().preimage(&t, m.sublattice()));
    }
    acc
}

/// `sum_h (h - 1) amb + sub`: the augmentation-ideal image inside the
/// ambient lattice.
pub fn augmentation_lattice(m: &GModule, subgroup: &[usize]) -> Lattice {
    let mut acc = m.sublattice().clone();
    let id = RatMatrix::identity(m.dim());
    for &h in subgroup {
        let t = m.action(h).sub(&id);
        acc = acc.sum(&m.ambient().image(&t));
    }
    acc
}

fn full_group(m: &GModule) -> Vec<usize> {
    (0..m.group().order()).collect()
}

/// The norm, invariants, coinvariants, and augmentation data of the full
/// group action.
pub struct CanonicalSubmodules {
    pub invariants: Lattice,
    pub coinvariants: Subquotient,
    pub norm: GMap,
    /// `norm / |G|`, idempotent on the rational span.
    pub normalized_norm: RatMatrix,
    pub augmentation_submodule: Lattice,
}

pub fn canonical_submodules(m: &Arc<GModule>) -> CanonicalSubmodules {
    let all = full_group(m);
    let nm = norm_matrix(m, &all);
    let normalized_norm = nm.scale(&rat(1, m.group().order() as i64));
    let norm = GMap::new(m.clone(), m.clone(), nm).expect("norm is equivariant");
    let augmentation_submodule = augmentation_lattice(m, &all);
    let coinvariants =
        subquotient(&augmentation_submodule, m.ambient()).expect("augmentation image is inside");
    CanonicalSubmodules {
        invariants: invariant_lattice(m, &all),
        coinvariants,
        norm,
        normalized_norm,
        augmentation_submodule,
    }
}

// Writes `block` (scaled by `sign`) into `out` at block position (br, bc),
// accumulating with what is already there.
fn accumulate_block(out: &mut RatMatrix, br: usize, bc: usize, dim: usize, sign: i64, block: &RatMatrix) {
    let s = rat(sign, 1);
    for i in 0..dim {
        for j in 0..dim {
            let v = out[(br * dim + i, bc * dim + j)].clone() + &block[(i, j)] * &s;
            out[(br * dim + i, bc * dim + j)] = v;
        }
    }
}

/// `d^0 : M -> Maps(H, M)`, `(d m)(h) = h m - m`.
fn coboundary_zero(m: &GModule, h: &[usize]) -> RatMatrix {
    let dim = m.dim();
    let id = RatMatrix::identity(dim);
    let mut out = RatMatrix::zero(h.len() * dim, dim);
    for (hp, &hh) in h.iter().enumerate() {
        accumulate_block(&mut out, hp, 0, dim, 1, m.action(hh));
        accumulate_block(&mut out, hp, 0, dim, -1, &id);
    }
    out
}

/// `d^1 : Maps(H, M) -> Maps(H^2, M)`, `(d c)(g, h) = g c(h) - c(gh) + c(g)`.
fn coboundary_one(m: &GModule, h: &[usize]) -> RatMatrix {
    let dim = m.dim();
    let k = h.len();
    let id = RatMatrix::identity(dim);
    let pos = |x: usize| h.iter().position(|&y| y == x).expect("closed subgroup");
    let mut out = RatMatrix::zero(k * k * dim, k * dim);
    for (gp, &g) in h.iter().enumerate() {
        for (hp, &hh) in h.iter().enumerate() {
            let row = gp * k + hp;
            accumulate_block(&mut out, row, hp, dim, 1, m.action(g));
            accumulate_block(&mut out, row, pos(m.group().mul(g, hh)), dim, -1, &id);
            accumulate_block(&mut out, row, gp, dim, 1, &id);
        }
    }
    out
}

/// `d^2 : Maps(H^2, M) -> Maps(H^3, M)`,
/// `(d c)(g, h, k) = g c(h, k) - c(gh, k) + c(g, hk) - c(g, h)`.
fn coboundary_two(m: &GModule, h: &[usize]) -> RatMatrix {
    let dim = m.dim();
    let k = h.len();
    let id = RatMatrix::identity(dim);
    let pos = |x: usize| h.iter().position(|&y| y == x).expect("closed subgroup");
    let mut out = RatMatrix::zero(k * k * k * dim, k * k * dim);
    for (gp, &g) in h.iter().enumerate() {
        for (hp, &hh) in h.iter().enumerate() {
            for (kp, &kk) in h.iter().enumerate() {
                let row = (gp * k + hp) * k + kp;
                accumulate_block(&mut out, row, hp * k + kp, dim, 1, m.action(g));
                accumulate_block(&mut out, row, pos(m.group().mul(g, hh)) * k + kp, dim, -1, &id);
                accumulate_block(&mut out, row, gp * k + pos(m.group().mul(hh, kk)), dim, 1, &id);
                accumulate_block(&mut out, row, gp * k + hp, dim, -1, &id);
            }
        }
    }
    out
}

/// Tate cohomology of the restriction to a subgroup, degrees -1 through 2.
pub fn tate_cohomology(
    m: &GModule,
    subgroup: &[usize],
    degree: i32,
) -> Result<CohomologyGroup, GmodError> {
    let mut h: Vec<usize> = subgroup.to_vec();
    h.sort_unstable();
    h.dedup();
    if !m.group().is_subgroup(&h) {
        return Err(GmodError::NotASubgroup);
    }
    let classes = match degree {
        -1 => {
            // ker(N) / I M
            let nm = norm_matrix(m, &h);
            let ker = m.ambient().preimage(&nm, m.sublattice());
            let aug = augmentation_lattice(m, &h);
            subquotient(&aug, &ker).expect("I M lies in ker N")
        }
        0 => {
            // M^H / N M
            let nm = norm_matrix(m, &h);
            let inv = invariant_lattice(m, &h);
            let nimg = m.ambient().image(&nm).sum(m.sublattice());
            subquotient(&nimg, &inv).expect("N M lies in M^H")
        }
        1 => {
            let c1_amb = m.ambient().direct_power(h.len());
            let c1_sub = m.sublattice().direct_power(h.len());
            let c2_sub = m.sublattice().direct_power(h.len() * h.len());
            let cocycles = c1_amb.preimage(&coboundary_one(m, &h), &c2_sub);
            let coboundaries = m
                .ambient()
                .image(&coboundary_zero(m, &h))
                .sum(&c1_sub);
            subquotient(&coboundaries, &cocycles).expect("coboundaries are cocycles")
        }
        2 => {
            let k = h.len();
            let c2_amb = m.ambient().direct_power(k * k);
            let c2_sub = m.sublattice().direct_power(k * k);
            let c3_sub = m.sublattice().direct_power(k * k * k);
            let cocycles = c2_amb.preimage(&coboundary_two(m, &h), &c3_sub);
            let c1_amb = m.ambient().direct_power(k);
            let coboundaries = c1_amb.image(&coboundary_one(m, &h)).sum(&c2_sub);
            subquotient(&coboundaries, &cocycles).expect("coboundaries are cocycles")
        }
        _ => return Err(GmodError::DegreeUnsupported { degree }),
    };
    Ok(CohomologyGroup { degree, classes })
}

/// First nonvanishing `(subgroup, degree, abstract type)` among degrees
/// -1, 0, 1 over all subgroups; `None` means cohomologically trivial there.
#[allow(clippy::type_complexity)]
pub fn cohomological_obstruction(
    m: &GModule,
) -> Result<Option<(Vec<usize>, i32, (usize, Vec<crate::exactlin::Int>))>, GmodError> {
    for sub in m.group().subgroups() {
        for degree in [-1, 0, 1] {
            let c = tate_cohomology(m, &sub, degree)?;
            if !c.is_trivial() {
                return Ok(Some((sub, degree, c.abstract_type())));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{condition_lattice, int, RatVector};
    use crate::gmod::group::FiniteGroup;

    fn c2() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(2))
    }

    #[test]
    fn trivial_module_over_c2() {
        let m = GModule::trivial(c2(), 1);
        // norm is multiplication by 2: injective, so degree -1 vanishes
        let hm1 = tate_cohomology(&m, &[0, 1], -1).unwrap();
        assert!(hm1.is_trivial());
        // invariants Z over norm image 2Z
        let h0 = tate_cohomology(&m, &[0, 1], 0).unwrap();
        assert_eq!(h0.invariant_factors(), alloc::vec![int(2)]);
    }

    #[test]
    fn sign_module_over_c2() {
        let m = GModule::one_dimensional(c2(), &[1, -1]).unwrap();
        // ker N = Z, I M = 2Z
        let hm1 = tate_cohomology(&m, &[0, 1], -1).unwrap();
        assert_eq!(hm1.invariant_factors(), alloc::vec![int(2)]);
        // invariants 0
        let h0 = tate_cohomology(&m, &[0, 1], 0).unwrap();
        assert!(h0.is_trivial());
        // H^1 = Z/2 by the cochain computation directly
        let h1 = tate_cohomology(&m, &[0, 1], 1).unwrap();
        assert_eq!(h1.invariant_factors(), alloc::vec![int(2)]);
    }

    #[test]
    fn half_integer_pairs_with_integral_sum() {
        // ambient: pairs in (1/2)Z^2 with integral coordinate sum, swapped
        // by the involution; invariants are spanned by (1/2, 1/2) while the
        // norm image is spanned by (1, 1).
        let amb = condition_lattice(
            2,
            &int(2),
            &RatMatrix::zero(0, 2),
            &RatMatrix::from_i64s(&[&[1, 1]]),
        );
        let g = c2();
        let swap = RatMatrix::from_i64s(&[&[0, 1], &[1, 0]]);
        let m = GModule::torsion_free(
            g,
            amb,
            alloc::vec![RatMatrix::identity(2), swap],
        )
        .unwrap();
        let h0 = tate_cohomology(&m, &[0, 1], 0).unwrap();
        assert_eq!(h0.invariant_factors(), alloc::vec![int(2)]);
        let inv = invariant_lattice(&m, &[0, 1]);
        assert!(inv.contains(&RatVector::from(alloc::vec![rat(1, 2), rat(1, 2)])));
        assert_eq!(inv.rank(), 1);
    }

    #[test]
    fn canonical_submodules_on_small_modules() {
        let g = c2();
        // trivial: invariants Z, coinvariants Z, norm = *2, normalized = id
        let t = Arc::new(GModule::trivial(g.clone(), 1));
        let ct = canonical_submodules(&t);
        assert_eq!(ct.invariants, Lattice::standard(1));
        assert_eq!(ct.coinvariants.free_rank(), 1);
        assert!(ct.coinvariants.invariant_factors().is_empty());
        assert_eq!(ct.norm.matrix(), &RatMatrix::from_i64s(&[&[2]]));
        assert_eq!(ct.normalized_norm, RatMatrix::identity(1));
        assert!(ct.augmentation_submodule.is_zero());

        // sign: invariants 0, coinvariants Z/2, norm = 0, I M = 2Z
        let s = Arc::new(GModule::one_dimensional(g.clone(), &[1, -1]).unwrap());
        let cs = canonical_submodules(&s);
        assert!(cs.invariants.is_zero());
        assert_eq!(cs.coinvariants.invariant_factors(), alloc::vec![int(2)]);
        assert_eq!(cs.coinvariants.free_rank(), 0);
        assert!(cs.norm.matrix().is_zero());
        assert_eq!(
            cs.augmentation_submodule,
            Lattice::from_rows(1, &[RatVector::from_i64s(&[2])])
        );

        // regular: invariants Z(1,1), coinvariants Z, I M = Z(1,-1)
        let r = Arc::new(GModule::regular(g));
        let cr = canonical_submodules(&r);
        assert_eq!(
            cr.invariants,
            Lattice::from_rows(2, &[RatVector::from_i64s(&[1, 1])])
        );
        assert_eq!(cr.coinvariants.free_rank(), 1);
        assert!(cr.coinvariants.invariant_factors().is_empty());
        assert_eq!(
            cr.augmentation_submodule,
            Lattice::from_rows(2, &[RatVector::from_i64s(&[1, -1])])
        );
    }

    #[test]
    fn normalized_norm_is_idempotent_and_kills_augmentation() {
        let groups: Vec<Arc<FiniteGroup>> = alloc::vec![
            Arc::new(FiniteGroup::cyclic(3)),
            Arc::new(FiniteGroup::direct_product(
                &FiniteGroup::cyclic(2),
                &FiniteGroup::cyclic(2),
            )),
        ];
        for g in groups {
            let m = Arc::new(GModule::regular(g.clone()));
            let c = canonical_submodules(&m);
            let nn = &c.normalized_norm;
            assert_eq!(nn.mul(nn), *nn);
            for h in 0..g.order() {
                let t = m.action(h).sub(&RatMatrix::identity(m.dim()));
                assert!(nn.mul(&t).is_zero());
            }
            // exact containments: N M inside invariants, I M inside ker N
            let nimg = m.ambient().image(c.norm.matrix());
            assert!(nimg.is_sublattice_of(&c.invariants));
            let ker = m
                .ambient()
                .preimage(c.norm.matrix(), m.sublattice());
            assert!(c.augmentation_submodule.is_sublattice_of(&ker));
        }
    }

    #[test]
    fn induced_modules_have_vanishing_cohomology() {
        let s3 = {
            let named: [(&str, [usize; 3]); 6] = [
                ("e", [0, 1, 2]),
                ("(12)", [1, 0, 2]),
                ("(23)", [0, 2, 1]),
                ("(13)", [2, 1, 0]),
                ("(123)", [1, 2, 0]),
                ("(132)", [2, 0, 1]),
            ];
            use alloc::string::ToString;
            Arc::new(
                FiniteGroup::from_permutations(
                    named.iter().map(|(l, _)| l.to_string()).collect(),
                    named.iter().map(|(_, p)| p.to_vec()).collect(),
                )
                .unwrap(),
            )
        };
        let groups: Vec<Arc<FiniteGroup>> = alloc::vec![
            c2(),
            Arc::new(FiniteGroup::cyclic(3)),
            Arc::new(FiniteGroup::cyclic(4)),
            Arc::new(FiniteGroup::direct_product(
                &FiniteGroup::cyclic(2),
                &FiniteGroup::cyclic(2),
            )),
            s3,
        ];
        for g in groups {
            for rank in 1..=3 {
                let m = GModule::induced(g.clone(), rank);
                assert!(
                    cohomological_obstruction(&m).unwrap().is_none(),
                    "induced over |G| = {} rank {rank}",
                    g.order()
                );
            }
        }
    }

    #[test]
    fn cyclic_periodicity_on_test_modules() {
        let modules: Vec<GModule> = alloc::vec![
            GModule::trivial(c2(), 1),
            GModule::one_dimensional(c2(), &[1, -1]).unwrap(),
            GModule::regular(c2()),
            GModule::regular(Arc::new(FiniteGroup::cyclic(3))),
            GModule::trivial(Arc::new(FiniteGroup::cyclic(4)), 1),
            GModule::one_dimensional(Arc::new(FiniteGroup::cyclic(4)), &[1, -1, 1, -1]).unwrap(),
        ];
        for m in &modules {
            let all: Vec<usize> = (0..m.group().order()).collect();
            let h1 = tate_cohomology(m, &all, 1).unwrap();
            let hm1 = tate_cohomology(m, &all, -1).unwrap();
            assert_eq!(h1.abstract_type(), hm1.abstract_type());
            let h2 = tate_cohomology(m, &all, 2).unwrap();
            let h0 = tate_cohomology(m, &all, 0).unwrap();
            assert_eq!(h2.abstract_type(), h0.abstract_type());
        }
    }

    #[test]
    fn quotient_module_cohomology() {
        // Z[C2] / Z(1,1) is Z with the swap acting as -1: the class of
        // (1, 0) goes to the class of (0, 1) = -(1, 0) + (1, 1). Its Tate
        // groups must match the sign module's.
        let g = c2();
        let reg = GModule::regular(g.clone());
        let sub = Lattice::from_rows(2, &[RatVector::from_i64s(&[1, 1])]);
        let q = reg.with_lattices(Lattice::standard(2), sub).unwrap();
        let sign = GModule::one_dimensional(g, &[1, -1]).unwrap();
        for degree in [-1, 0, 1, 2] {
            let a = tate_cohomology(&q, &[0, 1], degree).unwrap();
            let b = tate_cohomology(&sign, &[0, 1], degree).unwrap();
            assert_eq!(a.abstract_type(), b.abstract_type(), "degree {degree}");
        }
    }

    #[test]
    fn unsupported_degrees_are_rejected() {
        let m = GModule::trivial(c2(), 1);
        assert!(matches!(
            tate_cohomology(&m, &[0, 1], 3),
            Err(GmodError::DegreeUnsupported { degree: 3 })
        ));
        assert!(matches!(
            tate_cohomology(&m, &[1], 0),
            Err(GmodError::NotASubgroup)
        ));
    }

    #[test]
    fn degree_zero_matches_plain_subquotient_oracle() {
        // over C2 trivial on Z: oracle subquotient(2Z, Z)
        let oracle = subquotient(
            &Lattice::from_rows(1, &[RatVector::from_i64s(&[2])]),
            &Lattice::standard(1),
        )
        .unwrap();
        let m = GModule::trivial(c2(), 1);
        let h0 = tate_cohomology(&m, &[0, 1], 0).unwrap();
        assert_eq!(h0.invariant_factors(), oracle.invariant_factors());
    }
}
