//! Free permutation bases (witnessing that a module is induced from the
//! trivial subgroup) and equivariant lifting through surjections with
//! induced kernel.

use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::exactlin::{smith_normal_form, solve_integer_rational, Rat, RatMatrix, RatVector};

use super::module::{GMap, GModule};
use super::GmodError;

/// An explicit isomorphism with `Z[G]^k`: base vectors whose translates
/// `g v_i` form a basis of the module's lattice.
#[derive(Clone, Debug)]
pub struct InducedWitness {
    pub base: Vec<RatVector>,
}

const SEARCH_RANK_CAP: usize = 12;

// Do the translates of `base` form a Z-basis of the ambient lattice?
fn verify_orbit_basis(m: &GModule, base: &[RatVector]) -> bool {
    let n = m.group().order();
    let r = m.rank();
    if base.len() * n != r {
        return false;
    }
    let mut translates = Vec::with_capacity(r);
    for v in base {
        for g in 0..n {
            translates.push(m.action(g).mul_vec(v));
        }
    }
    let Some(coords) = m.ambient().coords_of_many(&translates) else {
        return false;
    };
    // coords is rank x rank; a basis iff unimodular
    if coords.rows() != r || coords.cols() != r {
        return false;
    }
    let s = smith_normal_form(&coords);
    s.rank == r && (0..r).all(|i| s.diag(i).is_one())
}

/// Verify a caller-supplied orbit base.
pub fn induced_witness_with_hint(
    m: &GModule,
    hint: &[RatVector],
) -> Result<Option<InducedWitness>, GmodError> {
    if !m.is_torsion_free() {
        return Err(GmodError::TorsionFreeRequired);
    }
    Ok(verify_orbit_basis(m, hint).then(|| InducedWitness {
        base: hint.to_vec(),
    }))
}

/// Search for an orbit base among subsets of the lattice basis, in
/// lexicographic order of index sets; first success wins. Absent when no
/// subset works (the module may still be induced in a basis the search does
/// not reach; combine with [`super::cohomological_obstruction`] for a
/// disproof certificate).
pub fn induced_witness(m: &GModule) -> Result<Option<InducedWitness>, GmodError> {
    if !m.is_torsion_free() {
        return Err(GmodError::TorsionFreeRequired);
    }
    let n = m.group().order();
    let r = m.rank();
    if !r.is_multiple_of(n) {
        return Ok(None);
    }
    if r > SEARCH_RANK_CAP {
        return Err(GmodError::RankTooLargeForSearch { rank: r });
    }
    let k = r / n;
    let basis = m.ambient().basis_vectors();
    let mut indices: Vec<usize> = (0..k).collect();
    loop {
        let candidate: Vec<RatVector> = indices.iter().map(|&i| basis[i].clone()).collect();
        if verify_orbit_basis(m, &candidate) {
            return Ok(Some(InducedWitness { base: candidate }));
        }
        // next k-subset of 0..r in lexicographic order
        let mut pos = k;
        loop {
            if pos == 0 {
                return Ok(None);
            }
            pos -= 1;
            indices[pos] += 1;
            if indices[pos] <= r - (k - pos) {
                for j in pos + 1..k {
                    indices[j] = indices[j - 1] + 1;
                }
                break;
            }
        }
    }
}

impl InducedWitness {
    /// The isomorphism `Z[G]^k -> M` as a matrix: slot `(i, g)` at column
    /// `i |G| + g` goes to `g base_i`.
    pub fn as_matrix(&self, m: &GModule) -> RatMatrix {
        let n = m.group().order();
        let mut out = RatMatrix::zero(m.dim(), self.base.len() * n);
        for (i, v) in self.base.iter().enumerate() {
            for g in 0..n {
                out.set_col(i * n + g, &m.action(g).mul_vec(v));
            }
        }
        out
    }
}

/// Lift `f` through `p`: given equivariant `f : X -> Q` and a surjection
/// `p : P -> Q` whose kernel admits a free permutation basis, produce
/// equivariant `l : X -> P` with `p l = f`. The plain linear lift is
/// corrected by solving the resulting coboundary equation over the integers;
/// solvability is guaranteed by the kernel being induced.
pub fn equivariant_lift(f: &GMap, p: &GMap) -> Result<GMap, GmodError> {
    let kernel = p.kernel_module();
    let induced = induced_witness(&kernel).or_else(|e| match e {
        GmodError::RankTooLargeForSearch { .. } => Ok(None),
        other => Err(other),
    })?;
    if induced.is_none() {
        return Err(GmodError::KernelNotInduced);
    }
    lift_through(f, p, &kernel)
}

/// Same as [`equivariant_lift`], but the kernel's free permutation basis is
/// supplied instead of searched for (needed past the search rank cap).
pub fn equivariant_lift_with_kernel_hint(
    f: &GMap,
    p: &GMap,
    kernel_hint: &[RatVector],
) -> Result<GMap, GmodError> {
    let kernel = p.kernel_module();
    if induced_witness_with_hint(&kernel, kernel_hint)?.is_none() {
        return Err(GmodError::KernelNotInduced);
    }
    lift_through(f, p, &kernel)
}

fn lift_through(f: &GMap, p: &GMap, kernel: &GModule) -> Result<GMap, GmodError> {
    if f.target().ambient() != p.target().ambient()
        || f.target().sublattice() != p.target().sublattice()
    {
        return Err(GmodError::GroupMismatch);
    }
    if !f.source().is_torsion_free() {
        return Err(GmodError::TorsionFreeRequired);
    }
    if !p.is_surjective() {
        return Err(GmodError::NotSurjective);
    }
    let kernel_basis = kernel.ambient().basis_vectors();

    let x = f.source();
    let pp = p.source();
    let group = x.group();
    let n = group.order();
    let x_basis = x.ambient().basis_vectors();
    let p_basis = pp.ambient().basis_vectors();
    let q_sub_basis = p.target().sublattice().basis_vectors();

    // Plain lift: for each source basis vector b, find u in P's lattice with
    // p(u) = f(b) modulo the target sublattice.
    let cols_p = p_basis.len();
    let cols_s = q_sub_basis.len();
    let qdim = p.target().dim();
    let mut sys = RatMatrix::zero(qdim, cols_p + cols_s);
    for (j, b) in p_basis.iter().enumerate() {
        sys.set_col(j, &p.matrix().mul_vec(b));
    }
    for (j, s) in q_sub_basis.iter().enumerate() {
        sys.set_col(cols_p + j, &s.neg());
    }
    let mut l0 = RatMatrix::zero(pp.dim(), x.rank());
    for (j, b) in x_basis.iter().enumerate() {
        let rhs = f.apply(b);
        let sol = solve_integer_rational(&sys, &rhs).ok_or(GmodError::NotSurjective)?;
        let mut u = RatVector::zero(pp.dim());
        for (c, coeff) in sol.iter().take(cols_p).enumerate() {
            u = u.add(&p_basis[c].scale(&Rat::from_integer(coeff.clone())));
        }
        l0.set_col(j, &u);
    }

    // Correction: find u : X -> ker p with u(b_j) - g u(g^{-1} b_j) = c_g(b_j)
    // where c_g = l0 - A_P(g) l0 A_X(g)^{-1} is the failure cocycle. Unknowns
    // are the kernel-basis coordinates of u on each X-basis vector.
    let kdim = kernel_basis.len();
    let xr = x_basis.len();
    let x_basis_action = x.basis_action();
    // failure cocycle evaluated on basis vectors, as coordinates in ker p
    // plus target-sub slack handled by kernel lattice membership
    let unknowns = kdim * xr;
    let mut rows: Vec<RatVector> = Vec::new();
    let mut rhs_all: Vec<Rat> = Vec::new();
    for g in 0..n {
        let ginv = group.inverse(g);
        // c_g on basis: l0 (A_X(g^{-1}) b_j) ... arranged as matrix equation
        // c_g = l0 - A_P(g) l0 B_X(g^{-1}) on basis coordinates
        let bx = x_basis_action[ginv].to_rat();
        let cg_mat = l0.sub(&pp.action(g).mul(&l0).mul(&bx));
        // write c_g(b_j) in kernel coordinates; p l0 = f modulo the target
        // sublattice and f is equivariant, so the failure lands in the kernel
        let cg_cols: Vec<RatVector> = (0..xr).map(|j| cg_mat.col_vector(j)).collect();
        let cg_coords = kernel
            .ambient()
            .coords_of_many(&cg_cols)
            .expect("failure cocycle lands in the kernel lattice");
        // unknown u has kernel coords U (kdim x xr); equation per (g, j):
        // U e_j - K^{-1} A_P(g) K U B_X(g^{-1}) e_j = cg_coords e_j, where
        // K is the kernel basis matrix; precompute the kernel basis action.
        let k_imgs: Vec<RatVector> = kernel_basis
            .iter()
            .map(|v| pp.action(g).mul_vec(v))
            .collect();
        let k_act = kernel
            .ambient()
            .coords_of_many(&k_imgs)
            .expect("kernel is action-stable")
            .to_rat();
        for j in 0..xr {
            for i in 0..kdim {
                // row for unknown entries U_{i', j'}
                let mut row = RatVector::zero(unknowns);
                row[i * xr + j] = row[i * xr + j].clone() + Rat::one();
                for ip in 0..kdim {
                    for jp in 0..xr {
                        let coeff = &k_act[(i, ip)] * &bx[(jp, j)];
                        row[ip * xr + jp] = row[ip * xr + jp].clone() - coeff;
                    }
                }
                rows.push(row);
                rhs_all.push(Rat::from_integer(cg_coords[(i, j)].clone()));
            }
        }
    }
    let sys2 = RatMatrix::from_fn(rows.len(), unknowns, |r, c| rows[r][c].clone());
    let rhs2 = RatVector::from(rhs_all);
    let sol = solve_integer_rational(&sys2, &rhs2).ok_or(GmodError::KernelNotInduced)?;

    // assemble l = l0 - u (then p l = p l0 = f and equivariance holds)
    let mut correction = RatMatrix::zero(pp.dim(), xr);
    for j in 0..xr {
        let mut v = RatVector::zero(pp.dim());
        for i in 0..kdim {
            v = v.add(&kernel_basis[i].scale(&Rat::from_integer(sol[i * xr + j].clone())));
        }
        correction.set_col(j, &v);
    }
    let l_on_basis = l0.sub(&correction);

    // convert from X-basis columns to ambient coordinates: columns give the
    // images of the lattice basis; extend to the ambient space by solving
    // L B^T = l_on_basis with B the basis matrix.
    let bmat = x.ambient().basis_matrix();
    let lift_matrix = extend_from_basis(&l_on_basis, &bmat);
    GMap::new(x.clone(), pp.clone(), lift_matrix)
}

// Solve L * basis^T = images for L, picking any rational solution;
// off-span behavior is immaterial and lattice checks happen in GMap::new.
pub(crate) fn extend_from_basis(images: &RatMatrix, basis: &RatMatrix) -> RatMatrix {
    // equivalent row-system: basis * L^T = images^T
    solve_rational_matrix(basis, &images.transpose()).transpose()
}

// Gaussian elimination over Q solving a x = b for each column of b; the
// system is consistent by construction. Free variables are set to zero.
fn solve_rational_matrix(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    let rows = a.rows();
    let cols = a.cols();
    let width = b.cols();
    let mut m = RatMatrix::zero(rows, cols + width);
    for r in 0..rows {
        for c in 0..cols {
            m[(r, c)] = a[(r, c)].clone();
        }
        for w in 0..width {
            m[(r, cols + w)] = b[(r, w)].clone();
        }
    }
    let mut pivot_cols = Vec::new();
    let mut pr = 0;
    for c in 0..cols {
        let Some(p) = (pr..rows).find(|&r| !m[(r, c)].is_zero()) else {
            continue;
        };
        for cc in 0..cols + width {
            let tmp = m[(p, cc)].clone();
            m[(p, cc)] = m[(pr, cc)].clone();
            m[(pr, cc)] = tmp;
        }
        let inv = Rat::one() / m[(pr, c)].clone();
        for cc in 0..cols + width {
            m[(pr, cc)] = m[(pr, cc)].clone() * inv.clone();
        }
        for r in 0..rows {
            if r != pr && !m[(r, c)].is_zero() {
                let factor = m[(r, c)].clone();
                for cc in 0..cols + width {
                    let v = m[(r, cc)].clone() - factor.clone() * m[(pr, cc)].clone();
                    m[(r, cc)] = v;
                }
            }
        }
        pivot_cols.push(c);
        pr += 1;
        if pr == rows {
            break;
        }
    }
    let mut x = RatMatrix::zero(cols, width);
    for (r, &c) in pivot_cols.iter().enumerate() {
        for w in 0..width {
            x[(c, w)] = m[(r, cols + w)].clone();
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::sync::Arc;
    use crate::exactlin::Lattice;
    use crate::gmod::cohomology::{cohomological_obstruction, tate_cohomology};
    use crate::gmod::group::FiniteGroup;

    fn c2() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(2))
    }

    #[test]
    fn regular_module_witnesses_itself() {
        let m = GModule::regular(c2());
        let w = induced_witness(&m).unwrap().expect("regular is induced");
        assert_eq!(w.base.len(), 1);
        // first basis vector in lexicographic search order
        assert_eq!(w.base[0], RatVector::from_i64s(&[1, 0]));
        let iso = w.as_matrix(&m);
        assert_eq!(iso, RatMatrix::identity(2));
    }

    #[test]
    fn sign_module_is_not_induced() {
        let m = GModule::one_dimensional(c2(), &[1, -1]).unwrap();
        assert!(induced_witness(&m).unwrap().is_none());
        // certificate: a nonvanishing Tate group
        let cert = cohomological_obstruction(&m).unwrap();
        let (sub, degree, ty) = cert.expect("sign module has nonzero cohomology");
        assert_eq!(sub, alloc::vec![0, 1]);
        assert_eq!(degree, -1);
        assert_eq!(ty.1, alloc::vec![crate::exactlin::int(2)]);
    }

    #[test]
    fn rank_cap_forces_hints() {
        let c1 = Arc::new(FiniteGroup::cyclic(1));
        let m = GModule::trivial(c1, 13);
        assert!(matches!(
            induced_witness(&m),
            Err(GmodError::RankTooLargeForSearch { rank: 13 })
        ));
        let hint: Vec<RatVector> = (0..13)
            .map(|i| {
                let mut v = RatVector::zero(13);
                v[i] = Rat::one();
                v
            })
            .collect();
        assert!(induced_witness_with_hint(&m, &hint).unwrap().is_some());
    }

    #[test]
    fn hint_rejects_non_bases() {
        let m = GModule::regular(c2());
        // orbit of (1, 1) is {(1,1)} doubled: not a basis
        let bad = alloc::vec![RatVector::from_i64s(&[1, 1])];
        assert!(induced_witness_with_hint(&m, &bad).unwrap().is_none());
        // orbit of (2, 0) spans an index-4 sublattice
        let bad2 = alloc::vec![RatVector::from_i64s(&[2, 0])];
        assert!(induced_witness_with_hint(&m, &bad2).unwrap().is_none());
    }

    #[test]
    fn induced_witness_on_rank_two_base() {
        let m = GModule::induced(c2(), 2);
        let w = induced_witness(&m).unwrap().expect("induced by construction");
        assert_eq!(w.base.len(), 2);
        assert!(verify_orbit_basis(&m, &w.base));
    }

    #[test]
    fn lift_through_sum_map() {
        // p : Z[C2] -> Z (trivial), the sum map; its kernel Z(1,-1) carries
        // the sign action, which is not induced, so lifting is refused
        let g = c2();
        let reg = Arc::new(GModule::regular(g.clone()));
        let triv = Arc::new(GModule::trivial(g.clone(), 1));
        let p = GMap::new(reg, triv.clone(), RatMatrix::from_i64s(&[&[1, 1]])).unwrap();
        let f = GMap::identity(triv);
        assert!(matches!(
            equivariant_lift(&f, &p),
            Err(GmodError::KernelNotInduced)
        ));
    }

    #[test]
    fn lift_through_projection_with_regular_kernel() {
        // P = Z[C2] (+) Z (trivial), p = projection to the trivial summand.
        // Kernel = Z[C2], induced, so every equivariant f lifts.
        let g = c2();
        let id2 = RatMatrix::identity(3);
        let swap_plus_fix = {
            let mut m = RatMatrix::zero(3, 3);
            m[(0, 1)] = Rat::one();
            m[(1, 0)] = Rat::one();
            m[(2, 2)] = Rat::one();
            m
        };
        let p_mod = Arc::new(
            GModule::torsion_free(
                g.clone(),
                Lattice::standard(3),
                alloc::vec![id2, swap_plus_fix],
            )
            .unwrap(),
        );
        let triv = Arc::new(GModule::trivial(g.clone(), 1));
        let proj = GMap::new(
            p_mod.clone(),
            triv.clone(),
            RatMatrix::from_i64s(&[&[0, 0, 1]]),
        )
        .unwrap();
        let f = GMap::identity(triv.clone());
        let lift = equivariant_lift(&f, &proj).unwrap();
        let composite = proj.compose(&lift).unwrap();
        assert_eq!(composite.matrix(), f.matrix());
        // lifting 3 f works too and scales
        let f3 = GMap::new(triv.clone(), triv, RatMatrix::from_i64s(&[&[3]])).unwrap();
        let lift3 = equivariant_lift(&f3, &proj).unwrap();
        assert_eq!(proj.compose(&lift3).unwrap().matrix(), f3.matrix());
    }

    #[test]
    fn lift_of_zero_is_zero_composite() {
        let g = c2();
        let reg = Arc::new(GModule::regular(g.clone()));
        let triv = Arc::new(GModule::trivial(g.clone(), 1));
        let idp = GMap::identity(reg.clone());
        let zero = GMap::new(triv.clone(), reg.clone(), RatMatrix::zero(2, 1)).unwrap();
        let lifted = equivariant_lift(&zero, &idp).unwrap();
        assert!(idp.compose(&lifted).unwrap().matrix().is_zero());
    }

    #[test]
    fn induced_modules_pass_the_shapiro_checks() {
        let m = GModule::induced(c2(), 1);
        for sub in m.group().subgroups() {
            for d in [-1, 0, 1] {
                assert!(tate_cohomology(&m, &sub, d).unwrap().is_trivial());
            }
        }
    }
}
