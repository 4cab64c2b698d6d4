//! Randomized invariants for the exact linear-algebra layer.

use galmod_core::exactlin::{
    int, integer_kernel, rat, row_hermite, smith_normal_form, solve_integer, Int, IntMatrix,
    Lattice, Rat, RatVector,
};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn int_matrix_strategy(max_dim: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        proptest::collection::vec(-bound..=bound, r * c)
            .prop_map(move |data| IntMatrix::from_fn(r, c, |i, j| int(data[i * c + j])))
    })
}

fn assert_snf_contract(a: &IntMatrix) {
    let s = smith_normal_form(a);
    let m = a.rows();
    let n = a.cols();

    // u * a * v = d
    assert_eq!(s.u.mul(&a.mul(&s.v)), s.d);
    // tracked inverses are genuine two-sided inverses
    assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(m));
    assert_eq!(s.u_inv.mul(&s.u), IntMatrix::identity(m));
    assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(n));
    assert_eq!(s.v_inv.mul(&s.v), IntMatrix::identity(n));

    // d is diagonal, nonnegative, divisibility chain, zeros exactly past rank
    for i in 0..m {
        for j in 0..n {
            if i != j {
                assert!(s.d[(i, j)].is_zero(), "off-diagonal at ({i}, {j})");
            }
        }
    }
    let k = m.min(n);
    for i in 0..k {
        assert!(!s.d[(i, i)].is_negative());
        assert_eq!(s.d[(i, i)].is_zero(), i >= s.rank);
        if i + 1 < k && !s.d[(i + 1, i + 1)].is_zero() {
            assert!(
                (&s.d[(i + 1, i + 1)] % &s.d[(i, i)]).is_zero(),
                "divisibility broken at slot {i}"
            );
        }
    }
}

fn rat_vec(dim: usize, nums: &[i64], den: i64) -> RatVector {
    RatVector::from((0..dim).map(|i| rat(nums[i], den)).collect::<Vec<Rat>>())
}

fn lattice_strategy(dim: usize) -> impl Strategy<Value = Lattice> {
    let rows = proptest::collection::vec(
        (proptest::collection::vec(-6i64..=6, dim), 1i64..=4),
        1..=dim + 1,
    );
    rows.prop_map(move |rows| {
        let vecs: Vec<RatVector> = rows
            .iter()
            .map(|(nums, den)| rat_vec(dim, nums, *den))
            .collect();
        Lattice::from_rows(dim, &vecs)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn snf_contract_holds(a in int_matrix_strategy(8, 50)) {
        assert_snf_contract(&a);
    }

    #[test]
    fn hermite_depends_only_on_row_span(
        a in int_matrix_strategy(6, 20),
        perm_seed in 0usize..720,
        k in -3i64..=3,
    ) {
        let h1 = row_hermite(&a);
        // mix rows: permute via seed, negate one row, add a multiple of
        // another row; the span is unchanged so the form must match
        let mut b = a.clone();
        if b.rows() >= 2 {
            let i = perm_seed % b.rows();
            let j = (perm_seed / b.rows()) % b.rows();
            if i != j {
                b.swap_rows(i, j);
                b.add_row_multiple(i, j, &int(k));
            }
            b.negate_row(i);
        }
        let h2 = row_hermite(&b);
        prop_assert_eq!(h1.h, h2.h);
        prop_assert_eq!(h1.pivots, h2.pivots);
    }

    #[test]
    fn solve_recovers_constructed_solutions(
        a in int_matrix_strategy(6, 10),
        xs in proptest::collection::vec(-5i64..=5, 6),
    ) {
        let x0: Vec<Int> = (0..a.cols()).map(|i| int(xs[i])).collect();
        let b = a.mul_vec(&x0);
        let x = solve_integer(&a, &b).expect("constructed system must be solvable");
        prop_assert_eq!(a.mul_vec(&x), b);
    }

    #[test]
    fn kernel_rows_annihilate_and_span_fully(a in int_matrix_strategy(6, 10)) {
        let k = integer_kernel(&a);
        for r in 0..k.rows() {
            let row: Vec<Int> = (0..k.cols()).map(|c| k[(r, c)].clone()).collect();
            prop_assert!(a.mul_vec(&row).iter().all(Zero::is_zero));
        }
        let rank = smith_normal_form(&a).rank;
        prop_assert_eq!(k.rows(), a.cols() - rank);
    }

    #[test]
    fn lattice_sum_and_intersection_bracket(
        l1 in lattice_strategy(3),
        l2 in lattice_strategy(3),
    ) {
        let s = l1.sum(&l2);
        let i = l1.intersect(&l2);
        prop_assert!(l1.is_sublattice_of(&s));
        prop_assert!(l2.is_sublattice_of(&s));
        prop_assert!(i.is_sublattice_of(&l1));
        prop_assert!(i.is_sublattice_of(&l2));
        prop_assert!(i.is_sublattice_of(&s));
        // commutativity through canonical forms
        prop_assert_eq!(&s, &l2.sum(&l1));
        prop_assert_eq!(&i, &l2.intersect(&l1));
    }

    #[test]
    fn lattice_coords_round_trip(
        l in lattice_strategy(3),
        cs in proptest::collection::vec(-4i64..=4, 4),
    ) {
        let basis = l.basis_vectors();
        let mut v = RatVector::zero(3);
        for (idx, b) in basis.iter().enumerate() {
            v = v.add(&b.scale(&Rat::from_integer(int(cs[idx]))));
        }
        prop_assert!(l.contains(&v));
        let coords = l.coords_of(&v).expect("member must have coordinates");
        prop_assert_eq!(coords.len(), basis.len());
        let mut back = RatVector::zero(3);
        for (c, b) in coords.iter().zip(&basis) {
            back = back.add(&b.scale(&Rat::from_integer(c.clone())));
        }
        prop_assert_eq!(back, v);
    }

    #[test]
    fn saturation_is_idempotent_and_contains(l in lattice_strategy(3)) {
        let sat = l.saturate();
        prop_assert!(l.is_sublattice_of(&sat));
        prop_assert_eq!(&sat.saturate(), &sat);
        // saturation preserves rank and spans the same Q-subspace
        prop_assert_eq!(sat.rank(), l.rank());
        for b in l.basis_vectors() {
            prop_assert!(sat.contains(&b));
        }
    }

    #[test]
    fn mod_reduce_is_a_coset_normal_form(
        l in lattice_strategy(3),
        nums in proptest::collection::vec(-8i64..=8, 3),
        den in 1i64..=3,
        cs in proptest::collection::vec(-3i64..=3, 4),
    ) {
        let v = rat_vec(3, &nums, den);
        let r = l.mod_reduce(&v);
        // difference lands in the lattice
        prop_assert!(l.contains(&v.sub(&r)));
        // shifting by a lattice member does not change the normal form
        let basis = l.basis_vectors();
        let mut shift = RatVector::zero(3);
        for (idx, b) in basis.iter().enumerate() {
            shift = shift.add(&b.scale(&Rat::from_integer(int(cs[idx]))));
        }
        prop_assert_eq!(l.mod_reduce(&v.add(&shift)), r);
    }
}

#[test]
fn snf_exercises_documented_edge_shapes() {
    for (r, c) in [(1, 1), (1, 8), (8, 1), (2, 7), (7, 2)] {
        let a = IntMatrix::from_fn(r, c, |i, j| int(((i * c + j) as i64 % 5) - 2));
        assert_snf_contract(&a);
    }
    assert_snf_contract(&IntMatrix::zero(4, 4));
    let mut big = IntMatrix::zero(3, 3);
    big[(0, 0)] = Int::from(1_u8) << 64;
    big[(1, 1)] = int(12);
    big[(2, 2)] = int(18);
    big[(0, 1)] = int(6);
    assert_snf_contract(&big);
    let _ = Int::one();
}
