//! Level changes along a tower: inflation of the three global modules
//! from the lower site to the upper one, the integral second factor of
//! inflation on the zero-sum submodule, the support-dotting operators at
//! both levels with the fiber-sum and pullback maps between them, and the
//! compatibility of inflation with localization at a shared place.

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::cmpmod::global::{localize, point_action_matrix, zero_sum_point_lattice, GlobalLevel};
use crate::cmpmod::local::inflate_local;
use crate::exactlin::{rat, Rat, RatMatrix};
use crate::gmod::{GMap, GModule, GroupHom};
use crate::sites::Tower;

use super::CmpError;

/// Inflation of a global level along a tower: pair functions compose with
/// the group surjection on shared places and vanish on new ones, point
/// functions pull back with the subgroup index of their place as weight.
#[derive(Clone, Debug)]
pub struct GlobalInflation {
    degrees: Vec<usize>,
    iso: GMap,
    mid: GMap,
    rig: GMap,
}

/// Inflate `lower` to `upper` along `tower`. Requires the levels to sit on
/// the tower's own sites and, at every shared place, the upper subgroup to
/// surject onto the lower one; partial images would break integrality of
/// the inflated column sums.
pub fn inflate_global(
    tower: &Tower,
    lower: &GlobalLevel,
    upper: &GlobalLevel,
) -> Result<GlobalInflation, CmpError> {
    if lower.site().as_ref() != tower.lower() || upper.site().as_ref() != tower.upper() {
        return Err(CmpError::TowerMismatch);
    }
    let mut degrees = Vec::new();
    for (i, low) in tower.lower().places().iter().enumerate() {
        let up = tower.upper().place(tower.upper_place_of(i));
        if tower.hom().image_of(&up.subgroup) != low.subgroup {
            return Err(CmpError::TowerMismatch);
        }
        degrees.push(up.subgroup.len() / low.subgroup.len());
    }

    let up_group = tower.upper().group().clone();
    let pulled_iso = Arc::new(
        lower
            .m_iso()
            .pullback(up_group.clone(), tower.hom())
            .expect("the tower hom matches both groups"),
    );
    let pulled_mid = Arc::new(
        lower
            .m_mid()
            .pullback(up_group.clone(), tower.hom())
            .expect("the tower hom matches both groups"),
    );
    let pulled_rig = Arc::new(
        lower
            .m_rig()
            .pullback(up_group.clone(), tower.hom())
            .expect("the tower hom matches both groups"),
    );

    let pts_up = tower.upper().point_count();
    let pts_low = tower.lower().point_count();
    let iso_matrix = RatMatrix::from_fn(pts_up, pts_low, |u, x| {
        // weight by the subgroup index so zero sums stay zero
        match tower.point_image(u) {
            Some(i) if i == x => {
                let place = tower.lower().place_of_point(x);
                rat(degrees[place] as i64, 1)
            }
            _ => Rat::zero(),
        }
    });
    let pl_up = tower.upper().places().len();
    let pl_low = tower.lower().places().len();
    let mid_matrix = RatMatrix::from_fn(upper.m_mid().dim(), lower.m_mid().dim(), |r, c| {
        match tower.lower_place_of(r % pl_up) {
            Some(v) if c == tower.hom().apply(r / pl_up) * pl_low + v => Rat::one(),
            _ => Rat::zero(),
        }
    });

    let iso = GMap::new(pulled_iso, upper.m_iso().clone(), iso_matrix)
        .expect("weighted pullback keeps integer zero-sum point functions");
    let mid = GMap::new(pulled_mid, upper.m_mid().clone(), mid_matrix.clone())
        .expect("composition with the surjection keeps row and column sums");
    let rig = GMap::new(pulled_rig, upper.m_rig().clone(), mid_matrix)
        .expect("composition with the surjection keeps fractional functions");
    Ok(GlobalInflation { degrees, iso, mid, rig })
}

impl GlobalInflation {
    /// Subgroup index at each lower place.
    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Inflation of the zero-sum point functions.
    pub fn iso(&self) -> &GMap {
        &self.iso
    }

    /// Inflation of the middle pair functions.
    pub fn mid(&self) -> &GMap {
        &self.mid
    }

    /// Inflation of the finite quotients.
    pub fn rig(&self) -> &GMap {
        &self.rig
    }

    /// Both comparison squares against the level maps, as matrix identities.
    pub fn squares_commute(&self, lower: &GlobalLevel, upper: &GlobalLevel) -> bool {
        let iso_square = upper.c_iso().matrix().mul(self.mid.matrix())
            == self.iso.matrix().mul(lower.c_iso().matrix());
        let rig_square = upper.c_rig().matrix().mul(self.mid.matrix())
            == self.rig.matrix().mul(lower.c_rig().matrix());
        iso_square && rig_square
    }
}

/// Divide the middle inflation by the group-order ratio and check that the
/// result still carries the lower zero-sum submodule into the upper one.
/// Exhibiting this integral second factor shows the restricted inflation
/// is divisible by the ratio.
pub fn zero_sum_inflation_factor(
    inflation: &GlobalInflation,
    lower: &GlobalLevel,
    upper: &GlobalLevel,
) -> RatMatrix {
    let ratio = upper.site().group().order() / lower.site().group().order();
    let second = inflation.mid().matrix().scale(&rat(1, ratio as i64));
    let target = upper.zero_sum_submodule();
    for b in lower.zero_sum_submodule().ambient().basis_vectors() {
        // column sums vanish on the source, so dividing keeps integrality
        assert!(target.ambient().contains(&second.mul_vec(&b)));
    }
    second
}

/// Support-dotting operators at both levels of a tower, acting on point
/// functions valued in a lower-group module, with the fiber-sum and
/// weighted pullback maps connecting the levels.
#[derive(Clone, Debug)]
pub struct TowerDotting {
    degree: usize,
    lower: RatMatrix,
    upper_first: RatMatrix,
    upper_second: RatMatrix,
    fiber_sum: RatMatrix,
    pullback: RatMatrix,
}

// block x keeps its value, minus a copy deposited at the dotted point
fn difference_operator(pts: usize, dy: usize, x: usize, deposit: usize) -> RatMatrix {
    RatMatrix::from_fn(pts * dy, pts * dy, |r, c| {
        if c / dy == x && r % dy == c % dy {
            if r / dy == x {
                Rat::one()
            } else if r / dy == deposit {
                -Rat::one()
            } else {
                Rat::zero()
            }
        } else {
            Rat::zero()
        }
    })
}

/// Build the dotting operators for `tower` with coefficients in the
/// torsion-free lower-group module `y`. The lower operator clears every
/// non-dotted point; the two upper passes first clear the points with a
/// non-dotted image, using the same elements as below, then clear the
/// remaining non-dotted points using kernel elements only, so the fiber
/// sum intertwines the operators exactly.
pub fn tower_dotting(tower: &Tower, y: &GModule) -> Result<TowerDotting, CmpError> {
    assert!(y.is_torsion_free(), "coefficients must be torsion free");
    assert_eq!(y.group(), tower.lower().group(), "coefficients must carry the lower group");
    let lower_site = tower.lower();
    let upper_site = tower.upper();
    let n_up = upper_site.group().order();
    let dy = y.dim();
    let pts_low = lower_site.point_count();
    let pts_up = upper_site.point_count();
    let y_up = y
        .pullback(upper_site.group().clone(), tower.hom())
        .expect("the tower hom matches both groups");

    let mut lower = RatMatrix::identity(pts_low * dy);
    let mut upper_first = RatMatrix::identity(pts_up * dy);
    for x in 0..pts_low {
        if lower_site.is_dotted(x) {
            continue;
        }
        // pick the translating element upstairs so both levels agree
        let r0 = (0..n_up)
            .find(|&r| lower_site.is_dotted(lower_site.act(tower.hom().apply(r), x)))
            .expect("cosets reach their dotted point");
        let sigma = tower.hom().apply(r0);
        let deposit = lower_site
            .dotted_points()
            .iter()
            .copied()
            .find(|&d| {
                lower_site
                    .place(lower_site.place_of_point(d))
                    .subgroup
                    .contains(&sigma)
            })
            .ok_or(CmpError::CoverConditionFails { witness: sigma })?;
        let moved = point_action_matrix(lower_site, y, sigma);
        let step = moved
            .sub(&RatMatrix::identity(pts_low * dy))
            .mul(&difference_operator(pts_low, dy, x, deposit));
        lower = lower.add(&step);

        let up_deposit =
            upper_site.dotted_point(tower.upper_place_of(lower_site.place_of_point(deposit)));
        let moved_up = point_action_matrix(upper_site, &y_up, r0);
        for u in 0..pts_up {
            if tower.point_image(u) != Some(x) {
                continue;
            }
            let step = moved_up
                .sub(&RatMatrix::identity(pts_up * dy))
                .mul(&difference_operator(pts_up, dy, u, up_deposit));
            upper_first = upper_first.add(&step);
        }
    }

    let kernel = tower.hom().kernel(lower_site.group().identity());
    let mut upper_second = RatMatrix::identity(pts_up * dy);
    for u in 0..pts_up {
        if upper_site.is_dotted(u) {
            continue;
        }
        let image_dotted = tower
            .point_image(u)
            .is_some_and(|x| lower_site.is_dotted(x));
        if !image_dotted {
            continue;
        }
        // only kernel elements keep the fiber sum unchanged
        let r1 = kernel
            .iter()
            .copied()
            .find(|&r| upper_site.is_dotted(upper_site.act(r, u)))
            .ok_or(CmpError::TowerMismatch)?;
        let deposit = upper_site
            .dotted_points()
            .iter()
            .copied()
            .find(|&d| {
                upper_site
                    .place(upper_site.place_of_point(d))
                    .subgroup
                    .contains(&r1)
            })
            .ok_or(CmpError::CoverConditionFails { witness: r1 })?;
        let step = point_action_matrix(upper_site, &y_up, r1)
            .sub(&RatMatrix::identity(pts_up * dy))
            .mul(&difference_operator(pts_up, dy, u, deposit));
        upper_second = upper_second.add(&step);
    }

    let fiber_sum = RatMatrix::from_fn(pts_low * dy, pts_up * dy, |r, c| {
        if tower.point_image(c / dy) == Some(r / dy) && r % dy == c % dy {
            Rat::one()
        } else {
            Rat::zero()
        }
    });
    let pullback = RatMatrix::from_fn(pts_up * dy, pts_low * dy, |r, c| {
        let u = r / dy;
        if tower.point_image(u) == Some(c / dy) && r % dy == c % dy {
            let place = upper_site.place_of_point(u);
            let weight = upper_site.place(place).subgroup.len()
                / tower
                    .lower_place_of(place)
                    .map(|i| lower_site.place(i).subgroup.len())
                    .expect("a point with an image sits over a shared place");
            rat(weight as i64, 1)
        } else {
            Rat::zero()
        }
    });
    Ok(TowerDotting {
        degree: n_up / lower_site.group().order(),
        lower,
        upper_first,
        upper_second,
        fiber_sum,
        pullback,
    })
}

impl TowerDotting {
    /// Order ratio of the tower, the size of the hom's kernel.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Dotting operator on lower point functions.
    pub fn lower(&self) -> &RatMatrix {
        &self.lower
    }

    /// First upper pass, clearing points with a non-dotted image.
    pub fn upper_first(&self) -> &RatMatrix {
        &self.upper_first
    }

    /// Second upper pass, clearing the remaining non-dotted points.
    pub fn upper_second(&self) -> &RatMatrix {
        &self.upper_second
    }

    /// Composite dotting operator on upper point functions.
    pub fn upper(&self) -> RatMatrix {
        self.upper_second.mul(&self.upper_first)
    }

    /// Sum over the fibers of the point map, block by block.
    pub fn fiber_sum(&self) -> &RatMatrix {
        &self.fiber_sum
    }

    /// Pullback of point functions, weighted by the subgroup index.
    pub fn pullback(&self) -> &RatMatrix {
        &self.pullback
    }

    /// The fiber sum intertwines the two dotting operators exactly.
    pub fn fiber_sum_commutes(&self) -> bool {
        self.fiber_sum.mul(&self.upper()) == self.lower.mul(&self.fiber_sum)
    }

    /// Fiber sum after pullback multiplies by the degree.
    pub fn degree_identity(&self) -> bool {
        self.fiber_sum.mul(&self.pullback)
            == RatMatrix::identity(self.pullback.cols()).scale(&rat(self.degree as i64, 1))
    }
}

/// Check that dotting a pulled-back zero-sum function agrees with pulling
/// back the dotted one: on every basis vector, the upper composite applied
/// to the pullback is the degree times the lower result at each dotted
/// point, and zero at every other point.
pub fn pullback_split_identity(dotting: &TowerDotting, tower: &Tower, y: &GModule) -> bool {
    let dy = y.dim();
    let upper_site = tower.upper();
    let pi1 = dotting.upper();
    let degree = rat(dotting.degree() as i64, 1);
    for b in zero_sum_point_lattice(tower.lower(), y).basis_vectors() {
        let lifted = pi1.mul_vec(&dotting.pullback().mul_vec(&b));
        let pushed = dotting.lower().mul_vec(&b);
        for u in 0..upper_site.point_count() {
            for i in 0..dy {
                let expected = match tower.point_image(u) {
                    Some(x) if upper_site.is_dotted(u) => &pushed[x * dy + i] * &degree,
                    _ => Rat::zero(),
                };
                if lifted[u * dy + i] != expected {
                    return false;
                }
            }
        }
    }
    true
}

/// Check that inflating and then restricting at a shared place agrees with
/// restricting and then inflating locally, on all three modules.
pub fn localization_square_commutes(
    tower: &Tower,
    lower: &GlobalLevel,
    upper: &GlobalLevel,
    inflation: &GlobalInflation,
    lower_place: usize,
) -> Result<bool, CmpError> {
    let low_at = localize(lower, tower.lower().dotted_point(lower_place))?;
    let upper_place = tower.upper_place_of(lower_place);
    let up_at = localize(upper, tower.upper().dotted_point(upper_place))?;

    let up_sub = &tower.upper().place(upper_place).subgroup;
    let low_sub = &tower.lower().place(lower_place).subgroup;
    let restricted: Vec<usize> = up_sub
        .iter()
        .map(|&h| {
            let image = tower.hom().apply(h);
            low_sub
                .iter()
                .position(|&s| s == image)
                .expect("inflation already checked the image fills the subgroup")
        })
        .collect();
    let p = GroupHom::new(
        up_at.local().group(),
        low_at.local().group(),
        restricted,
    )
    .expect("restricting a homomorphism keeps it one");
    let local_inflation = inflate_local(low_at.local(), up_at.local(), &p)?;

    let iso_square = up_at.iso().matrix().mul(inflation.iso().matrix())
        == local_inflation.iso().matrix().mul(low_at.iso().matrix());
    let mid_square = up_at.mid().matrix().mul(inflation.mid().matrix())
        == local_inflation.mid().matrix().mul(low_at.mid().matrix());
    let rig_square = up_at.rig().matrix().mul(inflation.rig().matrix())
        == local_inflation.rig().matrix().mul(low_at.rig().matrix());
    Ok(iso_square && mid_square && rig_square)
}
