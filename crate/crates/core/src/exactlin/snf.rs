//! Smith and Hermite normal forms over `BigInt`, with transform tracking.

use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::mat::{Int, IntMatrix, Rat, RatMatrix, RatVector};

/// `u * a * v = d` with `u`, `v` unimodular and `d` diagonal satisfying the
/// divisibility chain `d_1 | d_2 | ...`, all entries nonnegative. `rank` is
/// the number of nonzero diagonal entries.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl SmithDecomposition {
    /// Diagonal entry `i` of `d`, zero past the diagonal.
    pub fn diag(&self, i: usize) -> Int {
        if i < self.d.rows() && i < self.d.cols() {
            self.d[(i, i)].clone()
        } else {
            Int::zero()
        }
    }
}

struct SmithState {
    work: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl SmithState {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.work.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.work.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    fn negate_row(&mut self, r: usize) {
        self.work.negate_row(r);
        self.u.negate_row(r);
        self.u_inv.negate_col(r);
    }

    /// work_row dst += k * work_row src
    fn add_row(&mut self, dst: usize, src: usize, k: &Int) {
        self.work.add_row_multiple(dst, src, k);
        self.u.add_row_multiple(dst, src, k);
        let neg = -k.clone();
        self.u_inv.add_col_multiple(src, dst, &neg);
    }

    /// work_col dst += k * work_col src
    fn add_col(&mut self, dst: usize, src: usize, k: &Int) {
        self.work.add_col_multiple(dst, src, k);
        self.v.add_col_multiple(dst, src, k);
        let neg = -k.clone();
        self.v_inv.add_row_multiple(src, dst, &neg);
    }

    /// Smallest nonzero |entry| in the submatrix at or past `(t, t)`.
    fn find_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for r in t..self.work.rows() {
            for c in t..self.work.cols() {
                let x = &self.work[(r, c)];
                if x.is_zero() {
                    continue;
                }
                match best {
                    None => best = Some((r, c)),
                    Some((br, bc)) => {
                        if x.abs() < self.work[(br, bc)].abs() {
                            best = Some((r, c));
                        }
                    }
                }
            }
        }
        best
    }

    /// Smith-reduce the 2x2 diagonal block at `(t, t)`, `(t+1, t+1)`,
    /// assuming the rest of rows/cols `t`, `t+1` is zero. Leaves the block
    /// `diag(gcd, lcm)` up to sign normalization.
    fn fix_pair(&mut self, t: usize) {
        self.add_col(t, t + 1, &Int::one());
        loop {
            // Local Euclid confined to the block; row/col ops between t and
            // t+1 cannot leak outside because both rows and both columns are
            // zero elsewhere.
            loop {
                let mut best: Option<(usize, usize)> = None;
                for r in t..=t + 1 {
                    for c in t..=t + 1 {
                        if self.work[(r, c)].is_zero() {
                            continue;
                        }
                        match best {
                            None => best = Some((r, c)),
                            Some(b) => {
                                if self.work[(r, c)].abs() < self.work[b].abs() {
                                    best = Some((r, c));
                                }
                            }
                        }
                    }
                }
                let Some((pr, pc)) = best else {
                    return;
                };
                self.swap_rows(t, pr);
                self.swap_cols(t, pc);
                let mut dirty = false;
                if !self.work[(t + 1, t)].is_zero() {
                    let q = self.work[(t + 1, t)].div_floor(&self.work[(t, t)]);
                    self.add_row(t + 1, t, &-q);
                    dirty |= !self.work[(t + 1, t)].is_zero();
                }
                if !self.work[(t, t + 1)].is_zero() {
                    let q = self.work[(t, t + 1)].div_floor(&self.work[(t, t)]);
                    self.add_col(t + 1, t, &-q);
                    dirty |= !self.work[(t, t + 1)].is_zero();
                }
                if !dirty {
                    break;
                }
            }
            if self.work[(t, t)].is_negative() {
                self.negate_row(t);
            }
            if self.work[(t + 1, t + 1)].is_negative() {
                self.negate_row(t + 1);
            }
            let p = self.work[(t, t)].clone();
            let q = self.work[(t + 1, t + 1)].clone();
            if p.is_zero() || (&q % &p).is_zero() {
                return;
            }
            self.add_row(t, t + 1, &Int::one());
        }
    }

    /// Clear row and column `t` past the pivot at `(t, t)`, keeping the pivot
    /// the gcd of everything it touches.
    fn clear_cross(&mut self, t: usize) {
        loop {
            let Some((pr, pc)) = self.find_pivot(t) else {
                return;
            };
            self.swap_rows(t, pr);
            self.swap_cols(t, pc);
            let mut dirty = false;
            for r in t + 1..self.work.rows() {
                if !self.work[(r, t)].is_zero() {
                    let q = self.work[(r, t)].div_floor(&self.work[(t, t)]);
                    self.add_row(r, t, &-q);
                    if !self.work[(r, t)].is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            for c in t + 1..self.work.cols() {
                if !self.work[(t, c)].is_zero() {
                    let q = self.work[(t, c)].div_floor(&self.work[(t, t)]);
                    self.add_col(c, t, &-q);
                    if !self.work[(t, c)].is_zero() {
                        dirty = true;
                    }
                }
            }
            if !dirty {
                return;
            }
        }
    }
}

/// Smith normal form of `a`.
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut st = SmithState {
        work: a.clone(),
        u: IntMatrix::identity(m),
        u_inv: IntMatrix::identity(m),
        v: IntMatrix::identity(n),
        v_inv: IntMatrix::identity(n),
    };

    let bound = m.min(n);
    let mut rank = 0;
    for t in 0..bound {
        if st.find_pivot(t).is_none() {
            break;
        }
        st.clear_cross(t);
        if st.work[(t, t)].is_negative() {
            st.negate_row(t);
        }
        rank = t + 1;
    }

    // Enforce the divisibility chain d_t | d_{t+1} by Smith-reducing 2x2
    // diagonal blocks: each fix replaces the pair by (gcd, lcm), so the
    // leading entry strictly shrinks and the passes terminate.
    loop {
        let mut fixed = true;
        for t in 0..rank.saturating_sub(1) {
            let a_t = st.work[(t, t)].clone();
            let b = st.work[(t + 1, t + 1)].clone();
            if !(&b % &a_t).is_zero() {
                st.fix_pair(t);
                fixed = false;
            }
        }
        if fixed {
            break;
        }
    }

    SmithDecomposition {
        u: st.u,
        u_inv: st.u_inv,
        d: st.work,
        v: st.v,
        v_inv: st.v_inv,
        rank,
    }
}

/// Row-style Hermite normal form: `u * a = h` with `u` unimodular, the
/// nonzero rows of `h` in echelon shape with positive pivots and the entries
/// above each pivot reduced into `[0, pivot)`.
pub struct HermiteForm {
    pub h: IntMatrix,
    pub u: IntMatrix,
    /// Pivot column of each nonzero row, strictly increasing.
    pub pivots: Vec<usize>,
}

impl HermiteForm {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// The nonzero rows of `h`.
    pub fn basis_rows(&self) -> IntMatrix {
        IntMatrix::from_fn(self.pivots.len(), self.h.cols(), |r, c| {
            self.h[(r, c)].clone()
        })
    }
}

pub fn row_hermite(a: &IntMatrix) -> HermiteForm {
    let (m, n) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut pivots = Vec::new();
    let mut r = 0;

    for c in 0..n {
        if r == m {
            break;
        }
        // Euclid on the entries of column c in rows r..
        loop {
            let mut best: Option<usize> = None;
            for i in r..m {
                if h[(i, c)].is_zero() {
                    continue;
                }
                match best {
                    None => best = Some(i),
                    Some(b) => {
                        if h[(i, c)].abs() < h[(b, c)].abs() {
                            best = Some(i);
                        }
                    }
                }
            }
            let Some(b) = best else {
                break;
            };
            h.swap_rows(r, b);
            u.swap_rows(r, b);
            let mut done = true;
            for i in r + 1..m {
                if !h[(i, c)].is_zero() {
                    let q = h[(i, c)].div_floor(&h[(r, c)]);
                    let neg = -q;
                    h.add_row_multiple(i, r, &neg);
                    u.add_row_multiple(i, r, &neg);
                    if !h[(i, c)].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        // Reduce entries above the pivot into [0, pivot).
        for i in 0..r {
            let q = h[(i, c)].div_floor(&h[(r, c)]);
            let neg = -q;
            h.add_row_multiple(i, r, &neg);
            u.add_row_multiple(i, r, &neg);
        }
        pivots.push(c);
        r += 1;
    }

    HermiteForm { h, u, pivots }
}

/// One integral solution of `a x = b`, if any.
pub fn solve_integer(a: &IntMatrix, b: &[Int]) -> Option<Vec<Int>> {
    assert_eq!(a.rows(), b.len(), "rhs length mismatch");
    let s = smith_normal_form(a);
    let c = s.u.mul_vec(b);
    let n = a.cols();
    let mut y = alloc::vec![Int::zero(); n];
    for (i, ci) in c.iter().enumerate() {
        let d = s.diag(i);
        if d.is_zero() {
            if !ci.is_zero() {
                return None;
            }
        } else {
            let (q, r) = ci.div_rem(&d);
            if !r.is_zero() {
                return None;
            }
            if i < n {
                y[i] = q;
            }
        }
    }
    Some(s.v.mul_vec(&y))
}

/// Integral solutions of `a x = b` for every column `b` at once, sharing a
/// single Smith pass. `None` when any column is unsolvable.
pub fn solve_integer_matrix(a: &IntMatrix, b: &IntMatrix) -> Option<IntMatrix> {
    assert_eq!(a.rows(), b.rows(), "rhs row count mismatch");
    let s = smith_normal_form(a);
    let c = s.u.mul(b);
    let n = a.cols();
    let mut y = IntMatrix::zero(n, b.cols());
    for j in 0..b.cols() {
        for i in 0..c.rows() {
            let ci = &c[(i, j)];
            let d = s.diag(i);
            if d.is_zero() {
                if !ci.is_zero() {
                    return None;
                }
            } else {
                let (q, r) = ci.div_rem(&d);
                if !r.is_zero() {
                    return None;
                }
                if i < n {
                    y[(i, j)] = q;
                }
            }
        }
    }
    Some(s.v.mul(&y))
}

/// One integral solution of `a x = b` with rational coefficients: each row is
/// scaled by its denominator lcm and the integral system is solved.
pub fn solve_integer_rational(a: &RatMatrix, b: &RatVector) -> Option<Vec<Int>> {
    assert_eq!(a.rows(), b.len(), "rhs length mismatch");
    let mut ai = IntMatrix::zero(a.rows(), a.cols());
    let mut bi = alloc::vec![Int::zero(); b.len()];
    for r in 0..a.rows() {
        let mut m = b[r].denom().clone();
        for c in 0..a.cols() {
            m = m.lcm(a[(r, c)].denom());
        }
        for c in 0..a.cols() {
            let x = &a[(r, c)] * Rat::from_integer(m.clone());
            ai[(r, c)] = x.to_integer();
        }
        bi[r] = (&b[r] * Rat::from_integer(m.clone())).to_integer();
    }
    solve_integer(&ai, &bi)
}

/// One rational solution of `a x = b`, or `None` when the system is
/// inconsistent. Denominators are cleared and the integral Smith form solves
/// the diagonal system over `Q`.
pub fn solve_rational(a: &RatMatrix, b: &RatVector) -> Option<RatVector> {
    assert_eq!(a.rows(), b.len(), "rhs length mismatch");
    // one global scale keeps the augmented system equivalent over Q
    let aug = a.hstack(&RatMatrix::from_fn(a.rows(), 1, |r, _| b[r].clone()));
    let (aug_i, _) = aug.clear_denominators();
    let ai = IntMatrix::from_fn(a.rows(), a.cols(), |r, c| aug_i[(r, c)].clone());
    let bi: Vec<Int> = (0..a.rows()).map(|r| aug_i[(r, a.cols())].clone()).collect();
    let s = smith_normal_form(&ai);
    let c = s.u.mul_vec(&bi);
    let n = a.cols();
    let mut y = alloc::vec![Rat::zero(); n];
    for (i, ci) in c.iter().enumerate() {
        let d = s.diag(i);
        if d.is_zero() {
            if !ci.is_zero() {
                return None;
            }
        } else if i < n {
            y[i] = Rat::new(ci.clone(), d);
        }
    }
    Some(s.v.to_rat().mul_vec(&RatVector::from(y)))
}

/// Basis of `{x in Z^n : a x = 0}`, returned as the rows of a matrix in
/// Hermite normal form (canonical).
pub fn integer_kernel(a: &IntMatrix) -> IntMatrix {
    let s = smith_normal_form(a);
    let n = a.cols();
    let mut free_cols = Vec::new();
    for i in 0..n {
        if s.diag(i).is_zero() {
            free_cols.push(i);
        }
    }
    let raw = IntMatrix::from_fn(free_cols.len(), n, |r, c| s.v[(c, free_cols[r])].clone());
    row_hermite(&raw).basis_rows()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::mat::int;

    fn check_snf_contract(a: &IntMatrix) {
        let s = smith_normal_form(a);
        // u a v = d
        assert_eq!(s.u.mul(a).mul(&s.v), s.d);
        // tracked inverses really are inverses
        assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(a.rows()));
        assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(a.cols()));
        // diagonal, nonnegative, divisibility chain
        for r in 0..s.d.rows() {
            for c in 0..s.d.cols() {
                if r != c {
                    assert!(s.d[(r, c)].is_zero(), "off-diagonal entry");
                }
            }
        }
        let mut prev: Option<Int> = None;
        for i in 0..a.rows().min(a.cols()) {
            let di = s.diag(i);
            assert!(!di.is_negative());
            if let Some(p) = &prev {
                if !p.is_zero() {
                    assert!((&di % p).is_zero(), "divisibility chain broken");
                } else {
                    assert!(di.is_zero(), "nonzero after zero in chain");
                }
            }
            prev = Some(di);
        }
    }

    #[test]
    fn snf_of_documented_matrix() {
        let a = IntMatrix::from_i64s(&[&[2, 4], &[6, 8]]);
        let s = smith_normal_form(&a);
        check_snf_contract(&a);
        assert_eq!(s.diag(0), int(2));
        assert_eq!(s.diag(1), int(4));
        assert_eq!(s.rank, 2);
    }

    #[test]
    fn snf_of_identity_and_zero() {
        let id = IntMatrix::identity(2);
        let s = smith_normal_form(&id);
        assert_eq!(s.d, id);
        let z = IntMatrix::zero(3, 2);
        let s = smith_normal_form(&z);
        assert_eq!(s.rank, 0);
        assert!(s.d.is_zero());
        check_snf_contract(&z);
    }

    #[test]
    fn snf_of_empty_shapes() {
        for (m, n) in [(0, 0), (0, 3), (3, 0)] {
            check_snf_contract(&IntMatrix::zero(m, n));
        }
    }

    #[test]
    fn hermite_is_canonical_under_row_mixing() {
        let a = IntMatrix::from_i64s(&[&[2, 1, 0], &[4, 0, 1]]);
        let b = IntMatrix::from_i64s(&[&[6, 1, 1], &[4, 0, 1]]); // row0+row1, row1
        let ha = row_hermite(&a);
        let hb = row_hermite(&b);
        assert_eq!(ha.basis_rows(), hb.basis_rows());
        assert_eq!(ha.u.mul(&a), ha.h);
    }

    #[test]
    fn solve_and_kernel() {
        let a = IntMatrix::from_i64s(&[&[2, 0, 2], &[0, 3, 3]]);
        let x = solve_integer(&a, &[int(4), int(6)]).unwrap();
        assert_eq!(a.mul_vec(&x), alloc::vec![int(4), int(6)]);
        assert!(solve_integer(&a, &[int(1), int(0)]).is_none());
        let k = integer_kernel(&a);
        assert_eq!(k.rows(), 1);
        assert!(a.mul(&k.transpose()).is_zero());
    }

    #[test]
    fn rational_solve_reaches_non_integral_solutions() {
        use crate::exactlin::mat::rat;
        // 2x = 1 has no integer solution but x = 1/2 works
        let a = RatMatrix::from_i64s(&[&[2]]);
        let b = RatVector::from_i64s(&[1]);
        assert!(solve_integer_rational(&a, &b).is_none());
        let x = solve_rational(&a, &b).unwrap();
        assert_eq!(x.entries(), &[rat(1, 2)]);
        // underdetermined consistent system
        let a = RatMatrix::from_i64s(&[&[3, 6], &[1, 2]]);
        let b = RatVector::from_i64s(&[5, 0]);
        assert!(solve_rational(&a, &b).is_none()); // rows conflict
        let b = RatVector::from(alloc::vec![rat(5, 1), rat(5, 3)]);
        let x = solve_rational(&a, &b).unwrap();
        assert_eq!(a.mul_vec(&x), b);
        // rational coefficients
        let a = RatMatrix::from_fn(2, 2, |r, c| rat(1, (r + c + 1) as i64));
        let b = RatVector::from(alloc::vec![rat(1, 6), rat(7, 12)]);
        let x = solve_rational(&a, &b).unwrap();
        assert_eq!(a.mul_vec(&x), b);
    }
}
