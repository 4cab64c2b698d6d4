//! Rational-limit families spread over the places of a site: membership
//! tests for the three levels, the boundary class of a rigidified family,
//! and middle lifts of class-level families.

use alloc::vec::Vec;

use crate::exactlin::{solve_rational, Rat, RatMatrix, RatVector};
use crate::gmod::{augmentation_lattice, norm_matrix};
use crate::sites::GlobalSite;

use super::torus::{default_certificate, y_rig_reduce, RigClass, TorusData};
use super::TnError;

/// A family of per-place rational coefficient blocks at one of the three
/// levels: classes alone, classes with middle witnesses, or rigidified
/// classes.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SemiAdelicFamily {
    /// One class block per place.
    Iso { lambdas: Vec<RatVector> },
    /// Class blocks with middle witnesses balancing them.
    Mid {
        lambdas: Vec<RatVector>,
        mus: Vec<RatVector>,
    },
    /// Class blocks rigidified place by place.
    Rig { lambdas: Vec<RatVector> },
}

fn check_shape(t: &TorusData, site: &GlobalSite, blocks: &[RatVector]) -> Result<(), TnError> {
    if blocks.len() != site.places().len() || blocks.iter().any(|b| b.len() != t.rank()) {
        return Err(TnError::PlaceMismatch);
    }
    Ok(())
}

fn block_sum(blocks: &[RatVector], rank: usize) -> RatVector {
    blocks
        .iter()
        .fold(RatVector::zero(rank), |acc, b| acc.add(b))
}

fn place_norms(t: &TorusData, site: &GlobalSite) -> Vec<RatMatrix> {
    (0..site.places().len())
        .map(|v| norm_matrix(t.module(), &site.place(v).subgroup))
        .collect()
}

/// Decide membership of `family` over `site`.
///
/// Class families need the total norm of the block sum to vanish. Middle
/// witnesses must stay in the subtorus span, sum to zero, and share each
/// block's decomposition-group norm. Rigidified families need every block
/// in the rational span of the local augmentation and an integral sum.
pub fn semiadelic_membership(
    t: &TorusData,
    site: &GlobalSite,
    family: &SemiAdelicFamily,
) -> Result<bool, TnError> {
    assert_eq!(t.group(), site.group(), "coefficients carry the site group");
    match family {
        SemiAdelicFamily::Iso { lambdas } => {
            check_shape(t, site, lambdas)?;
            Ok(t.norm().mul_vec(&block_sum(lambdas, t.rank())).is_zero())
        }
        SemiAdelicFamily::Mid { lambdas, mus } => {
            check_shape(t, site, lambdas)?;
            check_shape(t, site, mus)?;
            let class_level = t.norm().mul_vec(&block_sum(lambdas, t.rank())).is_zero();
            let balanced = block_sum(mus, t.rank()).is_zero();
            let norms = place_norms(t, site);
            let matched = lambdas
                .iter()
                .zip(mus)
                .zip(&norms)
                .all(|((l, m), n)| n.mul_vec(&l.sub(m)).is_zero());
            let typed = mus.iter().all(|m| t.in_subtorus_span(m));
            Ok(class_level && balanced && matched && typed)
        }
        SemiAdelicFamily::Rig { lambdas } => {
            check_shape(t, site, lambdas)?;
            let rigid = (0..lambdas.len()).all(|v| {
                let aug = augmentation_lattice(t.module(), &site.place(v).subgroup);
                solve_rational(&aug.basis_matrix().transpose(), &lambdas[v]).is_some()
            });
            Ok(rigid && block_sum(lambdas, t.rank()).is_integral())
        }
    }
}

/// Boundary class of a rigidified family: the block sum taken in the
/// torsion classes modulo the augmentation.
pub fn iota(t: &TorusData, site: &GlobalSite, lambdas: &[RatVector]) -> Result<RigClass, TnError> {
    let family = SemiAdelicFamily::Rig {
        lambdas: lambdas.to_vec(),
    };
    if !semiadelic_membership(t, site, &family)? {
        return Err(TnError::OutsideLattice);
    }
    let total = block_sum(lambdas, t.rank());
    y_rig_reduce(t, &total, &default_certificate(t, &total))
}

/// Find middle witnesses for a class family, or report that none exist.
/// The witnesses are solved inside the subtorus span when one is fixed.
pub fn mid_sa_lift(
    t: &TorusData,
    site: &GlobalSite,
    lambdas: &[RatVector],
) -> Result<Option<Vec<RatVector>>, TnError> {
    let family = SemiAdelicFamily::Iso {
        lambdas: lambdas.to_vec(),
    };
    if !semiadelic_membership(t, site, &family)? {
        return Err(TnError::OutsideLattice);
    }
    let r = t.rank();
    let pl = site.places().len();
    let coeffs = match t.subtorus() {
        Some(z) => z.basis_matrix().transpose(),
        None => RatMatrix::identity(r),
    };
    let k = coeffs.cols();
    let norms = place_norms(t, site);
    let normed: Vec<RatMatrix> = norms.iter().map(|n| n.mul(&coeffs)).collect();

    // per-place norm conditions over the coefficient span, then the
    // balancing condition
    let system = RatMatrix::from_fn(pl * r + r, pl * k, |row, col| {
        let v = col / k;
        if row < pl * r {
            if row / r == v {
                normed[v][(row % r, col % k)].clone()
            } else {
                Rat::zero()
            }
        } else {
            coeffs[(row - pl * r, col % k)].clone()
        }
    });
    let mut rhs = RatVector::zero(0);
    for (n, l) in norms.iter().zip(lambdas) {
        rhs = rhs.concat(&n.mul_vec(l));
    }
    rhs = rhs.concat(&RatVector::zero(r));

    Ok(solve_rational(&system, &rhs).map(|c| {
        (0..pl)
            .map(|v| {
                let block = RatVector::from(
                    (0..k).map(|j| c[v * k + j].clone()).collect::<Vec<_>>(),
                );
                coeffs.mul_vec(&block)
            })
            .collect()
    }))
}
