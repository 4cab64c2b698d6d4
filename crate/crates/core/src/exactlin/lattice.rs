//! Lattices in `Q^n` with canonical (Hermite-reduced) bases.

use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::mat::{Int, IntMatrix, Rat, RatMatrix, RatVector};
use super::snf::{integer_kernel, row_hermite, solve_integer, solve_integer_matrix};

/// A finitely generated subgroup of `Q^n`, stored as `(1/den) * rowspan(basis)`
/// with `basis` in Hermite normal form and `den` minimal positive. The stored
/// form is canonical, so lattice equality is structural equality.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Lattice {
    dim: usize,
    den: Int,
    basis: IntMatrix,
}

impl Lattice {
    pub fn zero(dim: usize) -> Self {
        Lattice {
            dim,
            den: Int::one(),
            basis: IntMatrix::zero(0, dim),
        }
    }

    /// The standard integer lattice `Z^n`.
    pub fn standard(dim: usize) -> Self {
        Lattice {
            dim,
            den: Int::one(),
            basis: IntMatrix::identity(dim),
        }
    }

    /// `(1/d) Z^n`.
    pub fn scaled_standard(dim: usize, d: &Int) -> Self {
        assert!(d.is_positive(), "scale must be positive");
        Lattice {
            dim,
            den: d.clone(),
            basis: IntMatrix::identity(dim),
        }
    }

    /// Lattice generated by the given vectors (not required to be
    /// independent); the stored basis is the Hermite-reduced one.
    pub fn from_rows(dim: usize, rows: &[RatVector]) -> Self {
        assert!(rows.iter().all(|r| r.len() == dim), "generator dim mismatch");
        let mat = RatMatrix::from_fn(rows.len(), dim, |r, c| rows[r][c].clone());
        Self::from_rat_rows(&mat)
    }

    /// Same as [`Lattice::from_rows`] with the generators as matrix rows.
    pub fn from_rat_rows(mat: &RatMatrix) -> Self {
        let dim = mat.cols();
        let (m, den) = mat.clear_denominators();
        let h = row_hermite(&m).basis_rows();
        let mut g = den.clone();
        for r in 0..h.rows() {
            for c in 0..h.cols() {
                g = g.gcd(&h[(r, c)]);
                if g.is_one() {
                    break;
                }
            }
        }
        if g.is_one() || h.rows() == 0 {
            let den = if h.rows() == 0 { Int::one() } else { den };
            return Lattice { dim, den, basis: h };
        }
        let basis = IntMatrix::from_fn(h.rows(), h.cols(), |r, c| &h[(r, c)] / &g);
        Lattice {
            dim,
            den: den / g,
            basis,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    pub fn basis_vectors(&self) -> Vec<RatVector> {
        let den = Rat::from_integer(self.den.clone());
        (0..self.basis.rows())
            .map(|r| {
                RatVector::from(
                    self.basis
                        .row(r)
                        .iter()
                        .map(|x| Rat::from_integer(x.clone()) / den.clone())
                        .collect::<Vec<_>>(),
                )
            })
            .collect()
    }

    /// Basis vectors as the rows of a rational matrix.
    pub fn basis_matrix(&self) -> RatMatrix {
        let den = Rat::from_integer(self.den.clone());
        RatMatrix::from_fn(self.basis.rows(), self.dim, |r, c| {
            Rat::from_integer(self.basis[(r, c)].clone()) / den.clone()
        })
    }

    /// Integer coordinates of `v` in the stored basis, if `v` is a member.
    pub fn coords_of(&self, v: &RatVector) -> Option<Vec<Int>> {
        assert_eq!(v.len(), self.dim, "vector dim mismatch");
        // v = x^T (basis/den)  <=>  basis^T x = den*v, x integral.
        let scaled = v.scale(&Rat::from_integer(self.den.clone()));
        let extra = scaled.denominator_lcm();
        if !extra.is_one() {
            return None;
        }
        let rhs: Vec<Int> = scaled.entries().iter().map(Rat::to_integer).collect();
        solve_integer(&self.basis.transpose(), &rhs)
    }

    /// Coordinates of many members at once (one Smith pass); columns of the
    /// result correspond to the inputs. `None` when any input is not a member.
    pub fn coords_of_many(&self, vs: &[RatVector]) -> Option<IntMatrix> {
        let mut rhs = IntMatrix::zero(self.dim, vs.len());
        for (j, v) in vs.iter().enumerate() {
            assert_eq!(v.len(), self.dim, "vector dim mismatch");
            let scaled = v.scale(&Rat::from_integer(self.den.clone()));
            if !scaled.denominator_lcm().is_one() {
                return None;
            }
            for (i, x) in scaled.entries().iter().enumerate() {
                rhs[(i, j)] = x.to_integer();
            }
        }
        solve_integer_matrix(&self.basis.transpose(), &rhs)
    }

    pub fn contains(&self, v: &RatVector) -> bool {
        self.coords_of(v).is_some()
    }

    /// Block-diagonal direct sum: ambient dimensions concatenate and each
    /// summand's basis embeds into its own coordinate block.
    pub fn direct_sum(parts: &[&Lattice]) -> Lattice {
        let dim: usize = parts.iter().map(|l| l.dim()).sum();
        let mut rows = Vec::new();
        let mut offset = 0;
        for part in parts {
            for b in part.basis_vectors() {
                let mut row = alloc::vec![Rat::zero(); dim];
                for (i, x) in b.entries().iter().enumerate() {
                    row[offset + i] = x.clone();
                }
                rows.push(RatVector::from(row));
            }
            offset += part.dim();
        }
        Lattice::from_rows(dim, &rows)
    }

    /// The same lattice repeated `n` times block-diagonally.
    pub fn direct_power(&self, n: usize) -> Lattice {
        let parts: Vec<&Lattice> = (0..n).map(|_| self).collect();
        Lattice::direct_sum(&parts)
    }

    pub fn is_sublattice_of(&self, other: &Lattice) -> bool {
        self.basis_vectors().iter().all(|v| other.contains(v))
    }

    /// Lattice sum `self + other`.
    pub fn sum(&self, other: &Lattice) -> Lattice {
        assert_eq!(self.dim, other.dim, "lattice dim mismatch");
        let mut rows = self.basis_vectors();
        rows.extend(other.basis_vectors());
        Lattice::from_rows(self.dim, &rows)
    }

    /// Lattice intersection.
    pub fn intersect(&self, other: &Lattice) -> Lattice {
        assert_eq!(self.dim, other.dim, "lattice dim mismatch");
        // Put both on a common denominator D, so membership in both means
        // a^T A = b^T B with integral a, b; the kernel projects onto a.
        let d = self.den.lcm(&other.den);
        let fa = &d / &self.den;
        let fb = &d / &other.den;
        let a = IntMatrix::from_fn(self.basis.rows(), self.dim, |r, c| &self.basis[(r, c)] * &fa);
        let b = IntMatrix::from_fn(other.basis.rows(), other.dim, |r, c| {
            &other.basis[(r, c)] * &fb
        });
        // Solve (a^T | -b^T) (x; y) = 0.
        let sys = a.transpose().hstack(&b.transpose().mul(&neg_identity(b.rows())));
        let ker = integer_kernel(&sys);
        let ra = a.rows();
        let den_rat = Rat::from_integer(d);
        let rows: Vec<RatVector> = (0..ker.rows())
            .map(|k| {
                RatVector::from(
                    (0..self.dim)
                        .map(|c| {
                            let mut acc = Int::zero();
                            for i in 0..ra {
                                acc += &ker[(k, i)] * &a[(i, c)];
                            }
                            Rat::from_integer(acc) / den_rat.clone()
                        })
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        Lattice::from_rows(self.dim, &rows)
    }

    /// Image lattice `t(self)`; `t` maps `Q^dim` to `Q^{t.rows()}`.
    pub fn image(&self, t: &RatMatrix) -> Lattice {
        assert_eq!(t.cols(), self.dim, "map dim mismatch");
        let rows: Vec<RatVector> = self.basis_vectors().iter().map(|v| t.mul_vec(v)).collect();
        Lattice::from_rows(t.rows(), &rows)
    }

    /// `{x in self : t x in target}`.
    pub fn preimage(&self, t: &RatMatrix, target: &Lattice) -> Lattice {
        assert_eq!(t.cols(), self.dim, "map dim mismatch");
        assert_eq!(t.rows(), target.dim, "target dim mismatch");
        // x = sum a_i s_i with T x = sum b_j t_j: kernel of (T S^T | -B^T).
        let ts = t.mul(&self.basis_matrix().transpose());
        let sys_rat = ts.hstack(&target.basis_matrix().transpose().scale(&-Rat::one()));
        let (sys, _) = sys_rat.clear_denominators();
        let ker = integer_kernel(&sys);
        let basis = self.basis_vectors();
        let rows: Vec<RatVector> = (0..ker.rows())
            .map(|k| {
                let mut acc = RatVector::zero(self.dim);
                for (i, s) in basis.iter().enumerate() {
                    acc = acc.add(&s.scale(&Rat::from_integer(ker[(k, i)].clone())));
                }
                acc
            })
            .collect();
        Lattice::from_rows(self.dim, &rows)
    }

    /// Kernel of `t` restricted to `self`.
    pub fn map_kernel(&self, t: &RatMatrix) -> Lattice {
        self.preimage(t, &Lattice::zero(t.rows()))
    }

    /// Saturation: all points of the rational span of `self` lying in
    /// `(1/den) Z^n`, i.e. the largest lattice with the same span in which
    /// `self` has finite index and whose quotient by `self` is the torsion
    /// part of `(1/den)Z^n / self` restricted to the span.
    pub fn saturate(&self) -> Lattice {
        if self.rank() == 0 {
            return self.clone();
        }
        let sat_int = integer_kernel(&integer_kernel(&self.basis));
        let den = Rat::from_integer(self.den.clone());
        let rows: Vec<RatVector> = (0..sat_int.rows())
            .map(|r| {
                RatVector::from(
                    sat_int
                        .row(r)
                        .iter()
                        .map(|x| Rat::from_integer(x.clone()) / den.clone())
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        Lattice::from_rows(self.dim, &rows)
    }

    /// Canonical representative of `v + self`: reduce pivot coordinates of
    /// `v` modulo the Hermite basis. Deterministic; two vectors are congruent
    /// modulo `self` iff their reductions agree (when their difference lies
    /// in the span; coordinates off the span are untouched).
    pub fn mod_reduce(&self, v: &RatVector) -> RatVector {
        assert_eq!(v.len(), self.dim, "vector dim mismatch");
        let mut w = v.clone();
        let den = Rat::from_integer(self.den.clone());
        for r in 0..self.basis.rows() {
            let pivot_col = (0..self.dim)
                .find(|&c| !self.basis[(r, c)].is_zero())
                .expect("nonzero basis row");
            let pivot = Rat::from_integer(self.basis[(r, pivot_col)].clone()) / den.clone();
            let q = (&w[pivot_col] / &pivot).floor();
            if q.is_zero() {
                continue;
            }
            for c in 0..self.dim {
                let step = Rat::from_integer(self.basis[(r, c)].clone()) / den.clone();
                let sub = &q * step;
                w[c] = &w[c] - &sub;
            }
        }
        w
    }
}

fn neg_identity(n: usize) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    for i in 0..n {
        let v = -m[(i, i)].clone();
        m[(i, i)] = v;
    }
    m
}

/// The lattice `{x in (1/d) Z^dim : a_eq x = 0 and b_int x integral}`,
/// computed by clearing denominators to one integer system and taking a
/// Hermite-form kernel. The returned basis is the Hermite-reduced one.
pub fn condition_lattice(dim: usize, d: &Int, a_eq: &RatMatrix, b_int: &RatMatrix) -> Lattice {
    assert!(d.is_positive(), "d must be positive");
    assert_eq!(a_eq.cols(), dim, "a_eq column mismatch");
    assert_eq!(b_int.cols(), dim, "b_int column mismatch");
    // Substitute x = y/d with y integral.
    let (ai, _) = a_eq.clear_denominators();
    let (bi, bden) = b_int.clear_denominators();
    let m_eq = ai.rows();
    let m_int = bi.rows();
    // System over (y, t): ai y = 0 and bi y = (bden * d) t.
    let modulus = &bden * d;
    let top = ai.hstack(&IntMatrix::zero(m_eq, m_int));
    let bottom = bi.hstack(&IntMatrix::from_fn(m_int, m_int, |r, c| {
        if r == c {
            -modulus.clone()
        } else {
            Int::zero()
        }
    }));
    let ker = integer_kernel(&top.vstack(&bottom));
    let d_rat = Rat::from_integer(d.clone());
    let rows: Vec<RatVector> = (0..ker.rows())
        .map(|k| {
            RatVector::from(
                (0..dim)
                    .map(|c| Rat::from_integer(ker[(k, c)].clone()) / d_rat.clone())
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    Lattice::from_rows(dim, &rows)
}
