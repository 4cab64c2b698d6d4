//! Finite-level site data: a group with one decomposition subgroup per
//! place, the coset realization of the place set upstairs, towers of such
//! data, and the cover condition with its search problems.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use core::fmt;

use crate::gmod::{FiniteGroup, GroupHom};

/// Errors from site construction and tower validation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SitesError {
    NotASubgroup { place: String },
    UnknownGroupElement { place: String },
    EmptyPlaceSet,
    DuplicatePlaceName { place: String },
    TowerNotSurjective,
    /// A lower place name has no counterpart in the upper site.
    TowerPlaceMissing { place: String },
    /// `p` does not carry the upper decomposition subgroup into the lower.
    TowerIncompatible { place: String },
    /// A subgroup list handed to the lift search is not closed under
    /// conjugation.
    ClassNotConjugationClosed { place_index: usize },
}

impl fmt::Display for SitesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SitesError::NotASubgroup { place } => {
                write!(f, "place {place}: element set is not a subgroup")
            }
            SitesError::UnknownGroupElement { place } => {
                write!(f, "place {place}: unknown group element")
            }
            SitesError::EmptyPlaceSet => write!(f, "a site needs at least one place"),
            SitesError::DuplicatePlaceName { place } => {
                write!(f, "duplicate place name {place}")
            }
            SitesError::TowerNotSurjective => write!(f, "tower map is not surjective"),
            SitesError::TowerPlaceMissing { place } => {
                write!(f, "lower place {place} is missing upstairs")
            }
            SitesError::TowerIncompatible { place } => {
                write!(f, "place {place}: image of the upper subgroup leaves the lower one")
            }
            SitesError::ClassNotConjugationClosed { place_index } => {
                write!(f, "subgroup list for place {place_index} is not conjugation-closed")
            }
        }
    }
}

/// A named place with its decomposition subgroup (sorted element indices).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Place {
    pub name: String,
    pub subgroup: Vec<usize>,
}

/// A group together with one decomposition subgroup per place, realized as
/// the disjoint union of coset spaces with the left action.
///
/// Points are indexed place by place in config order, cosets ordered by
/// least element; every downstream matrix uses this ordering.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GlobalSite {
    group: Arc<FiniteGroup>,
    places: Vec<Place>,
    // For each point: owning place, sorted coset elements.
    points: Vec<(usize, Vec<usize>)>,
    // action[g][point] = image point
    action: Vec<Vec<usize>>,
    // point index of the identity coset of each place
    dotted: Vec<usize>,
}

pub fn build_site(
    group: Arc<FiniteGroup>,
    places: Vec<Place>,
) -> Result<GlobalSite, SitesError> {
    if places.is_empty() {
        return Err(SitesError::EmptyPlaceSet);
    }
    for (i, p) in places.iter().enumerate() {
        if places[..i].iter().any(|q| q.name == p.name) {
            return Err(SitesError::DuplicatePlaceName {
                place: p.name.clone(),
            });
        }
        if p.subgroup.iter().any(|&x| x >= group.order()) {
            return Err(SitesError::UnknownGroupElement {
                place: p.name.clone(),
            });
        }
        let mut sorted = p.subgroup.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted != p.subgroup || !group.is_subgroup(&sorted) {
            return Err(SitesError::NotASubgroup {
                place: p.name.clone(),
            });
        }
    }

    let mut points = Vec::new();
    let mut dotted = Vec::new();
    for (pi, p) in places.iter().enumerate() {
        let cosets = group.left_cosets(&p.subgroup);
        let base = points.len();
        let dot = cosets
            .iter()
            .position(|c| c.contains(&group.identity()))
            .expect("some coset contains the identity");
        dotted.push(base + dot);
        for c in cosets {
            points.push((pi, c));
        }
    }
    let action: Vec<Vec<usize>> = (0..group.order())
        .map(|g| {
            points
                .iter()
                .map(|(pi, coset)| {
                    let moved = group.mul(g, coset[0]);
                    points
                        .iter()
                        .position(|(qi, c)| qi == pi && c.contains(&moved))
                        .expect("cosets partition the group")
                })
                .collect()
        })
        .collect();

    // the stabilizer of each dotted point must be exactly its subgroup
    for (pi, p) in places.iter().enumerate() {
        let stab: Vec<usize> = (0..group.order())
            .filter(|&g| action[g][dotted[pi]] == dotted[pi])
            .collect();
        debug_assert_eq!(stab, p.subgroup, "stabilizer mismatch at {}", p.name);
    }

    Ok(GlobalSite {
        group,
        places,
        points,
        action,
        dotted,
    })
}

impl GlobalSite {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn places(&self) -> &[Place] {
        &self.places
    }

    pub fn place(&self, i: usize) -> &Place {
        &self.places[i]
    }

    /// Number of points of the full place set upstairs.
    pub fn point_count(&self) -> usize {
        self.points.len()
    }

    pub fn place_of_point(&self, point: usize) -> usize {
        self.points[point].0
    }

    /// Sorted elements of the coset realizing this point.
    pub fn coset(&self, point: usize) -> &[usize] {
        &self.points[point].1
    }

    /// Least element of the coset: the canonical representative.
    pub fn representative(&self, point: usize) -> usize {
        self.points[point].1[0]
    }

    /// Image of the point under the left action of `g`.
    pub fn act(&self, g: usize, point: usize) -> usize {
        self.action[g][point]
    }

    /// One permutation of the points per group element.
    pub fn action_permutations(&self) -> &[Vec<usize>] {
        &self.action
    }

    /// The distinguished (identity-coset) point of each place.
    pub fn dotted_points(&self) -> &[usize] {
        &self.dotted
    }

    pub fn dotted_point(&self, place: usize) -> usize {
        self.dotted[place]
    }

    pub fn is_dotted(&self, point: usize) -> bool {
        self.dotted.contains(&point)
    }

    /// `place:representative` label for reports.
    pub fn point_label(&self, point: usize) -> String {
        let (pi, coset) = &self.points[point];
        alloc::format!(
            "{}:{}",
            self.places[*pi].name,
            self.group.label(coset[0])
        )
    }

    /// Points belonging to one place, in order.
    pub fn points_of_place(&self, place: usize) -> Vec<usize> {
        (0..self.points.len())
            .filter(|&w| self.points[w].0 == place)
            .collect()
    }
}

/// Outcome of the cover condition: does every group element fix some dotted
/// point (equivalently, lie in some decomposition subgroup)?
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoverCheck {
    pub covered: bool,
    /// Least-index uncovered element when not covered.
    pub witness: Option<usize>,
}

pub fn check_cover(site: &GlobalSite) -> CoverCheck {
    let n = site.group().order();
    let witness = (0..n).find(|&g| {
        !site
            .places()
            .iter()
            .any(|p| p.subgroup.contains(&g))
    });
    CoverCheck {
        covered: witness.is_none(),
        witness,
    }
}

/// Two site levels joined by a surjection of groups, with per-place
/// compatibility. The upper site may have extra places; every lower place
/// must appear upstairs under the same name.
#[derive(Clone, Debug)]
pub struct Tower {
    lower: GlobalSite,
    upper: GlobalSite,
    hom: GroupHom,
    // upper place index of each lower place
    lower_to_upper: Vec<usize>,
}

impl Tower {
    /// `hom` maps the upper group onto the lower one.
    pub fn new(lower: GlobalSite, upper: GlobalSite, hom: GroupHom) -> Result<Self, SitesError> {
        if hom.source_order() != upper.group().order()
            || hom.target_order() != lower.group().order()
            || !hom.is_surjective()
        {
            return Err(SitesError::TowerNotSurjective);
        }
        let mut lower_to_upper = Vec::with_capacity(lower.places().len());
        for p in lower.places() {
            let up = upper
                .places()
                .iter()
                .position(|q| q.name == p.name)
                .ok_or(SitesError::TowerPlaceMissing {
                    place: p.name.clone(),
                })?;
            let image = hom.image_of(&upper.places()[up].subgroup);
            if !image.iter().all(|x| p.subgroup.contains(x)) {
                return Err(SitesError::TowerIncompatible {
                    place: p.name.clone(),
                });
            }
            lower_to_upper.push(up);
        }
        Ok(Tower {
            lower,
            upper,
            hom,
            lower_to_upper,
        })
    }

    pub fn lower(&self) -> &GlobalSite {
        &self.lower
    }

    pub fn upper(&self) -> &GlobalSite {
        &self.upper
    }

    pub fn hom(&self) -> &GroupHom {
        &self.hom
    }

    pub fn upper_place_of(&self, lower_place: usize) -> usize {
        self.lower_to_upper[lower_place]
    }

    /// Lower place index of an upper place, when the place exists downstairs.
    pub fn lower_place_of(&self, upper_place: usize) -> Option<usize> {
        self.lower_to_upper.iter().position(|&u| u == upper_place)
    }

    /// The induced map of points `S_K -> S_E`: the coset of `σ` upstairs
    /// goes to the coset of `p(σ)` at the matching place. `None` for points
    /// over places absent downstairs.
    pub fn point_image(&self, upper_point: usize) -> Option<usize> {
        let up = self.upper.place_of_point(upper_point);
        let lp = self.lower_place_of(up)?;
        let rep = self.upper.representative(upper_point);
        let image_rep = self.hom.apply(rep);
        Some(
            self.lower
                .act(image_rep, self.lower.dotted_point(lp)),
        )
    }
}

/// Result of the exhaustive lift search: per-place subgroup choices whose
/// union covers the group, or a proof of impossibility.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LiftSearch {
    Sat(Vec<Vec<usize>>),
    Unsat,
}

/// Choose one subgroup per place from the given conjugation-closed lists so
/// the union covers the whole group. Exhaustive backtracking in
/// lexicographic order of choice indices: `Unsat` is a proof that no choice
/// works, and the `Sat` assignment is the lexicographically first.
pub fn search_lifts(
    group: &FiniteGroup,
    classes: &[Vec<Vec<usize>>],
) -> Result<LiftSearch, SitesError> {
    for (place_index, class) in classes.iter().enumerate() {
        for h in class {
            if !group.is_subgroup(h) {
                return Err(SitesError::ClassNotConjugationClosed { place_index });
            }
            for g in 0..group.order() {
                if !class.contains(&group.conjugate_subgroup(g, h)) {
                    return Err(SitesError::ClassNotConjugationClosed { place_index });
                }
            }
        }
    }
    let mut picked: Vec<Vec<usize>> = Vec::new();
    fn descend(
        group: &FiniteGroup,
        classes: &[Vec<Vec<usize>>],
        picked: &mut Vec<Vec<usize>>,
        depth: usize,
    ) -> bool {
        if depth == classes.len() {
            let mut covered = alloc::vec![false; group.order()];
            for h in picked.iter() {
                for &x in h {
                    covered[x] = true;
                }
            }
            return covered.iter().all(|&b| b);
        }
        for h in &classes[depth] {
            picked.push(h.clone());
            if descend(group, classes, picked, depth + 1) {
                return true;
            }
            picked.pop();
        }
        false
    }
    if descend(group, classes, &mut picked, 0) {
        Ok(LiftSearch::Sat(picked))
    } else {
        Ok(LiftSearch::Unsat)
    }
}

/// Does one group element conjugate every decomposition subgroup of `a`
/// onto the same-named subgroup of `b` simultaneously? Exhaustive.
pub fn simultaneous_conjugator(a: &GlobalSite, b: &GlobalSite) -> Option<usize> {
    if a.group() != b.group() || a.places().len() != b.places().len() {
        return None;
    }
    let group = a.group();
    (0..group.order()).find(|&g| {
        a.places().iter().all(|p| {
            b.places()
                .iter()
                .find(|q| q.name == p.name)
                .is_some_and(|q| group.conjugate_subgroup(g, &p.subgroup) == q.subgroup)
        })
    })
}
