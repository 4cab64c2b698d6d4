//! Dense matrices and vectors over `BigInt` / `BigRational`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

/// Shorthand for a small integer constant.
pub fn int(n: i64) -> Int {
    Int::from(n)
}

/// Shorthand for a small rational constant `n/d`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

/// Row-major matrix over `BigInt`.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![Int::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Int::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Int) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        IntMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<Int>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.iter().flat_map(|row| row.iter().cloned()).collect(),
        }
    }

    pub fn from_i64s(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        IntMatrix::from_fn(r, c, |i, j| Int::from(rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[Int] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<Int> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        IntMatrix::from_fn(self.rows, other.cols, |r, c| {
            let mut acc = Int::zero();
            for k in 0..self.cols {
                acc += &self[(r, k)] * &other[(k, c)];
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in mul_vec");
        (0..self.rows)
            .map(|r| {
                let mut acc = Int::zero();
                for k in 0..self.cols {
                    acc += &self[(r, k)] * &v[k];
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn to_rat(&self) -> RatMatrix {
        RatMatrix::from_fn(self.rows, self.cols, |r, c| {
            Rat::from_integer(self[(r, c)].clone())
        })
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    pub fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self[(r, c)].clone();
            self[(r, c)] = v;
        }
    }

    pub fn negate_col(&mut self, c: usize) {
        for r in 0..self.rows {
            let v = -self[(r, c)].clone();
            self[(r, c)] = v;
        }
    }

    /// row_dst += k * row_src
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, k: &Int) {
        if k.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let add = k * &self[(src, c)];
            self[(dst, c)] += add;
        }
    }

    /// col_dst += k * col_src
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, k: &Int) {
        if k.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let add = k * &self[(r, src)];
            self[(r, dst)] += add;
        }
    }

    /// Vertical stack: `self` on top of `other`.
    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        IntMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Horizontal stack: `self` left of `other`.
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        IntMatrix::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self[(r, c)].clone()
            } else {
                other[(r, c - self.cols)].clone()
            }
        })
    }

    pub fn max_abs(&self) -> Int {
        self.data
            .iter()
            .map(Signed::abs)
            .max()
            .unwrap_or_else(Int::zero)
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = Int;
    fn index(&self, (r, c): (usize, usize)) -> &Int {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Int {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  [")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(r, c)])?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Row-major matrix over `BigRational`.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        RatMatrix { rows, cols, data }
    }

    pub fn from_i64s(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        RatMatrix::from_fn(r, c, |i, j| Rat::from_integer(Int::from(rows[i][j])))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn transpose(&self) -> RatMatrix {
        RatMatrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        RatMatrix::from_fn(self.rows, other.cols, |r, c| {
            let mut acc = Rat::zero();
            for k in 0..self.cols {
                acc += &self[(r, k)] * &other[(k, c)];
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &RatVector) -> RatVector {
        assert_eq!(self.cols, v.len(), "dimension mismatch in mul_vec");
        RatVector::from(
            (0..self.rows)
                .map(|r| {
                    let mut acc = Rat::zero();
                    for k in 0..self.cols {
                        acc += &self[(r, k)] * &v[k];
                    }
                    acc
                })
                .collect::<Vec<_>>(),
        )
    }

    pub fn add(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RatMatrix::from_fn(self.rows, self.cols, |r, c| {
            &self[(r, c)] + &other[(r, c)]
        })
    }

    pub fn sub(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RatMatrix::from_fn(self.rows, self.cols, |r, c| {
            &self[(r, c)] - &other[(r, c)]
        })
    }

    pub fn scale(&self, k: &Rat) -> RatMatrix {
        RatMatrix::from_fn(self.rows, self.cols, |r, c| &self[(r, c)] * k)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn row_vector(&self, r: usize) -> RatVector {
        RatVector::from(self.data[r * self.cols..(r + 1) * self.cols].to_vec())
    }

    pub fn col_vector(&self, c: usize) -> RatVector {
        RatVector::from(
            (0..self.rows)
                .map(|r| self[(r, c)].clone())
                .collect::<Vec<_>>(),
        )
    }

    pub fn set_col(&mut self, c: usize, v: &RatVector) {
        assert_eq!(v.len(), self.rows);
        for r in 0..self.rows {
            self[(r, c)] = v[r].clone();
        }
    }

    pub fn hstack(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        RatMatrix::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self[(r, c)].clone()
            } else {
                other[(r, c - self.cols)].clone()
            }
        })
    }

    pub fn vstack(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        RatMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Kronecker product: block `(i, j)` of the result is `self[(i, j)] * other`.
    pub fn kronecker(&self, other: &RatMatrix) -> RatMatrix {
        RatMatrix::from_fn(self.rows * other.rows, self.cols * other.cols, |r, c| {
            &self[(r / other.rows, c / other.cols)] * &other[(r % other.rows, c % other.cols)]
        })
    }

    /// Least positive `d` with `d * self` integral, together with the integral matrix.
    pub fn clear_denominators(&self) -> (IntMatrix, Int) {
        let mut den = Int::one();
        for x in &self.data {
            den = num_integer::lcm(den, x.denom().clone());
        }
        let m = IntMatrix::from_fn(self.rows, self.cols, |r, c| {
            let scaled = &self[(r, c)] * Rat::from_integer(den.clone());
            debug_assert!(scaled.is_integer());
            scaled.to_integer()
        });
        (m, den)
    }

    pub fn to_int(&self) -> Option<IntMatrix> {
        if self.data.iter().all(Rat::is_integer) {
            Some(IntMatrix::from_fn(self.rows, self.cols, |r, c| {
                self[(r, c)].to_integer()
            }))
        } else {
            None
        }
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Rat;
    fn index(&self, (r, c): (usize, usize)) -> &Rat {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rat {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  [")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(r, c)])?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Vector over `BigRational`, stored reduced with positive denominators.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct RatVector {
    entries: Vec<Rat>,
}

impl RatVector {
    pub fn zero(n: usize) -> Self {
        RatVector {
            entries: vec![Rat::zero(); n],
        }
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = RatVector::zero(n);
        v.entries[i] = Rat::one();
        v
    }

    pub fn from_ints(v: &[Int]) -> Self {
        RatVector {
            entries: v.iter().map(|x| Rat::from_integer(x.clone())).collect(),
        }
    }

    pub fn from_i64s(v: &[i64]) -> Self {
        RatVector {
            entries: v.iter().map(|&x| Rat::from_integer(Int::from(x))).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn entries(&self) -> &[Rat] {
        &self.entries
    }

    pub fn add(&self, other: &RatVector) -> RatVector {
        assert_eq!(self.len(), other.len());
        RatVector {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &RatVector) -> RatVector {
        assert_eq!(self.len(), other.len());
        RatVector {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, k: &Rat) -> RatVector {
        RatVector {
            entries: self.entries.iter().map(|a| a * k).collect(),
        }
    }

    pub fn neg(&self) -> RatVector {
        RatVector {
            entries: self.entries.iter().map(|a| -a.clone()).collect(),
        }
    }

    pub fn dot(&self, other: &RatVector) -> Rat {
        assert_eq!(self.len(), other.len());
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn sum(&self) -> Rat {
        self.entries.iter().fold(Rat::zero(), |acc, a| acc + a)
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(Rat::is_integer)
    }

    pub fn to_ints(&self) -> Option<Vec<Int>> {
        if self.is_integral() {
            Some(self.entries.iter().map(Rat::to_integer).collect())
        } else {
            None
        }
    }

    /// Least positive `d` with `d * self` integral.
    pub fn denominator_lcm(&self) -> Int {
        self.entries
            .iter()
            .fold(Int::one(), |acc, x| num_integer::lcm(acc, x.denom().clone()))
    }

    pub fn concat(&self, other: &RatVector) -> RatVector {
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        RatVector { entries }
    }
}

impl From<Vec<Rat>> for RatVector {
    fn from(entries: Vec<Rat>) -> Self {
        RatVector { entries }
    }
}

impl Index<usize> for RatVector {
    type Output = Rat;
    fn index(&self, i: usize) -> &Rat {
        &self.entries[i]
    }
}

impl IndexMut<usize> for RatVector {
    fn index_mut(&mut self, i: usize) -> &mut Rat {
        &mut self.entries[i]
    }
}

impl fmt::Debug for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_mul_and_transpose() {
        let a = IntMatrix::from_i64s(&[&[1, 2], &[3, 4]]);
        let b = IntMatrix::from_i64s(&[&[0, 1], &[1, 0]]);
        assert_eq!(a.mul(&b), IntMatrix::from_i64s(&[&[2, 1], &[4, 3]]));
        assert_eq!(a.transpose(), IntMatrix::from_i64s(&[&[1, 3], &[2, 4]]));
    }

    #[test]
    fn clear_denominators_finds_lcm() {
        let m = RatMatrix::from_fn(1, 2, |_, c| if c == 0 { rat(1, 2) } else { rat(1, 3) });
        let (i, d) = m.clear_denominators();
        assert_eq!(d, int(6));
        assert_eq!(i, IntMatrix::from_i64s(&[&[3, 2]]));
    }

    #[test]
    fn kronecker_blocks_and_mixed_product() {
        let a = RatMatrix::from_i64s(&[&[1, 2], &[0, 3]]);
        let b = RatMatrix::from_i64s(&[&[1, 0], &[1, 1]]);
        let k = a.kronecker(&b);
        assert_eq!(
            k,
            RatMatrix::from_i64s(&[&[1, 0, 2, 0], &[1, 1, 2, 2], &[0, 0, 3, 0], &[0, 0, 3, 3]])
        );
        // (a (x) b)(c (x) d) = ac (x) bd
        let c = RatMatrix::from_i64s(&[&[2, 1], &[1, 1]]);
        let d = RatMatrix::from_i64s(&[&[0, 1], &[1, 2]]);
        assert_eq!(k.mul(&c.kronecker(&d)), a.mul(&c).kronecker(&b.mul(&d)));
    }

    #[test]
    fn empty_matrix_is_fine() {
        let a = IntMatrix::zero(0, 3);
        let b = IntMatrix::zero(3, 0);
        assert_eq!(a.mul(&IntMatrix::zero(3, 2)).rows(), 0);
        assert_eq!(b.transpose().rows(), 0);
    }
}
