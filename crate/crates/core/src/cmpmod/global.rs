//! Global levels over a site: pair functions on (group element, place),
//! with one coordinate allowed at each translated dotted point. The three
//! modules are the zero-sum integer point functions, the fractional pair
//! functions with zero row sums and integral column sums, and the finite
//! quotient of the fractional pair functions by the integral ones. The
//! column-sum map and the negated reduction compare them, support
//! normalization moves point functions onto the dotted points, averaging
//! splits the column-sum map under the cover condition, and restriction
//! to a decomposition subgroup localizes the whole family at a dotted
//! point.

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::cmpmod::local::{build_local, fractional_part, LocalLevel};
use crate::exactlin::{condition_lattice, int, rat, Lattice, Rat, RatMatrix, RatVector};
use crate::gmod::{FiniteGroup, GMap, GModule, GroupHom};
use crate::sites::{check_cover, CoverCheck, GlobalSite};

use super::CmpError;

/// One global level: the three modules over the site group and the two
/// comparison maps out of the middle one. The column-sum map `c_iso` lands
/// in the zero-sum point functions, the negated reduction `c_rig` in the
/// finite quotient. The cover check is recorded, not required.
#[derive(Clone, Debug)]
pub struct GlobalLevel {
    site: Arc<GlobalSite>,
    cover: CoverCheck,
    m_iso: Arc<GModule>,
    m_mid: Arc<GModule>,
    m_rig: Arc<GModule>,
    c_iso: GMap,
    c_rig: GMap,
}

/// Build the global level over `site`, with denominator the group order.
pub fn build_global(site: Arc<GlobalSite>) -> GlobalLevel {
    let n = site.group().order();
    let pl = site.places().len();
    let pts = site.point_count();
    let dim = n * pl;

    // one row per group element, summing its coordinates over the places
    let row_sums = RatMatrix::from_fn(n, dim, |s, c| {
        if c / pl == s {
            Rat::one()
        } else {
            Rat::zero()
        }
    });
    // one row per point, summing the coordinates allowed there
    let col_sums = RatMatrix::from_fn(pts, dim, |w, c| {
        if site.act(c / pl, site.dotted_point(c % pl)) == w {
            Rat::one()
        } else {
            Rat::zero()
        }
    });

    let point_module =
        GModule::from_permutation_action(site.group().clone(), pts, site.action_permutations())
            .expect("site actions are permutations");
    let ones = RatMatrix::from_fn(1, pts, |_, _| Rat::one());
    let zero_sum = condition_lattice(pts, &int(1), &ones, &RatMatrix::zero(0, pts));
    let m_iso = Arc::new(
        point_module
            .with_lattices(zero_sum, Lattice::zero(pts))
            .expect("permutations preserve zero-sum integer functions"),
    );
    assert_eq!(m_iso.rank(), pts - 1, "zero-sum point functions");

    // the group permutes pairs through its left factor, fixing the place
    let pair_perms: Vec<Vec<usize>> = (0..n)
        .map(|g| {
            (0..dim)
                .map(|c| site.group().mul(g, c / pl) * pl + c % pl)
                .collect()
        })
        .collect();
    let pair_module = GModule::from_permutation_action(site.group().clone(), dim, &pair_perms)
        .expect("pair translations are permutations");

    let den = int(n as i64);
    let mid = condition_lattice(dim, &den, &row_sums, &col_sums);
    let m_mid = Arc::new(
        pair_module
            .with_lattices(mid, Lattice::zero(dim))
            .expect("translation preserves row and column sums"),
    );
    assert_eq!(m_mid.rank(), n * (pl - 1), "middle pair functions");

    let rig_amb = condition_lattice(
        dim,
        &den,
        &RatMatrix::zero(0, dim),
        &row_sums.vstack(&col_sums),
    );
    let m_rig = Arc::new(
        pair_module
            .with_lattices(rig_amb, Lattice::standard(dim))
            .expect("translation preserves integrality of row and column sums"),
    );

    let c_iso = GMap::new(m_mid.clone(), m_iso.clone(), col_sums)
        .expect("column sums of a middle function are an integral zero-sum point function");
    let c_rig = GMap::new(
        m_mid.clone(),
        m_rig.clone(),
        RatMatrix::identity(dim).scale(&rat(-1, 1)),
    )
    .expect("negation carries the middle lattice into the fractional one");
    assert!(c_rig.is_surjective(), "every fractional class has a middle representative");

    GlobalLevel {
        cover: check_cover(&site),
        site,
        m_iso,
        m_mid,
        m_rig,
        c_iso,
        c_rig,
    }
}

impl GlobalLevel {
    /// The underlying site.
    pub fn site(&self) -> &Arc<GlobalSite> {
        &self.site
    }

    /// Result of the cover check recorded at build time.
    pub fn cover(&self) -> &CoverCheck {
        &self.cover
    }

    /// Zero-sum integer point functions.
    pub fn m_iso(&self) -> &Arc<GModule> {
        &self.m_iso
    }

    /// Fractional pair functions with zero row sums and integral column sums.
    pub fn m_mid(&self) -> &Arc<GModule> {
        &self.m_mid
    }

    /// Quotient of the fractional pair functions by the integral ones.
    pub fn m_rig(&self) -> &Arc<GModule> {
        &self.m_rig
    }

    /// Column-sum map onto point functions.
    pub fn c_iso(&self) -> &GMap {
        &self.c_iso
    }

    /// Negated reduction onto the finite quotient.
    pub fn c_rig(&self) -> &GMap {
        &self.c_rig
    }

    /// Column index of the pair (group element, place).
    pub fn pair_coordinate(&self, g: usize, place: usize) -> usize {
        g * self.site.places().len() + place
    }

    /// The point where the pair (group element, place) may be nonzero.
    pub fn allowed_point(&self, g: usize, place: usize) -> usize {
        self.site.act(g, self.site.dotted_point(place))
    }

    /// Kernel of the column-sum map as a module.
    pub fn zero_sum_submodule(&self) -> GModule {
        self.c_iso.kernel_module()
    }

    /// Lift a class of the finite quotient to a middle function with the
    /// same image under the negated reduction. Off one balancing place per
    /// group element the entries are the fractional parts of the negated
    /// representative, so they lie in `[0, 1)`.
    pub fn lift_crig(&self, rig_rep: &RatVector) -> RatVector {
        assert!(
            self.m_rig.ambient().contains(rig_rep),
            "representative must be a fractional pair function"
        );
        let pl = self.site.places().len();
        let mut out = alloc::vec![Rat::zero(); self.m_mid.dim()];
        for s in 0..self.site.group().order() {
            // balance each row at the place with the least allowed point
            let v_min = (0..pl)
                .min_by_key(|&v| self.allowed_point(s, v))
                .expect("a site has at least one place");
            let mut balance = Rat::zero();
            for v in 0..pl {
                if v == v_min {
                    continue;
                }
                let q = fractional_part(&(-&rig_rep[s * pl + v]));
                balance -= &q;
                out[s * pl + v] = q;
            }
            out[s * pl + v_min] = balance;
        }
        let out = RatVector::from(out);
        debug_assert!(self.m_mid.ambient().contains(&out));
        out
    }
}

/// Lattice of point functions valued in the ambient lattice of `y` whose
/// blocks sum to zero. Coordinates are point-major: point `w`, value
/// coordinate `i` sits at `w * y.dim() + i`.
pub fn zero_sum_point_lattice(site: &GlobalSite, y: &GModule) -> Lattice {
    let dy = y.dim();
    let pts = site.point_count();
    let block_sum = RatMatrix::from_fn(dy, pts * dy, |i, c| {
        if c % dy == i {
            Rat::one()
        } else {
            Rat::zero()
        }
    });
    y.ambient().direct_power(pts).map_kernel(&block_sum)
}

/// Matrix of a group element on point functions: permute the points and
/// act on the values.
pub fn point_action_matrix(site: &GlobalSite, y: &GModule, g: usize) -> RatMatrix {
    let dy = y.dim();
    let pts = site.point_count();
    RatMatrix::from_fn(pts * dy, pts * dy, |r, c| {
        if site.act(g, c / dy) == r / dy {
            y.action(g)[(r % dy, c % dy)].clone()
        } else {
            Rat::zero()
        }
    })
}

/// Zero-sum point functions valued in a torsion-free module, as a module
/// over the site group.
pub fn point_function_module(site: &GlobalSite, y: &GModule) -> GModule {
    assert!(y.is_torsion_free(), "coefficients must be torsion free");
    assert_eq!(y.group(), site.group(), "coefficients must carry the site group");
    let actions: Vec<RatMatrix> = (0..site.group().order())
        .map(|g| point_action_matrix(site, y, g))
        .collect();
    GModule::torsion_free(site.group().clone(), zero_sum_point_lattice(site, y), actions)
        .expect("permuting points preserves the zero-sum condition")
}

/// One support-moving step: the group element applied and the two-point
/// difference it acted on.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SupportCorrection {
    /// Element translating the stray point onto its dotted coset.
    pub element: usize,
    /// Difference between the stray block and its copy at the deposit point.
    pub term: RatVector,
}

/// A point function rewritten to be supported on the dotted points,
/// together with the steps taken.
#[derive(Clone, Debug)]
pub struct NormalizedSupport {
    /// The rewritten function, supported on the dotted points.
    pub normalized: RatVector,
    /// Steps applied, each shifting the original by a translated-minus-original term.
    pub corrections: Vec<SupportCorrection>,
}

fn point_block(f: &RatVector, w: usize, dy: usize) -> RatVector {
    RatVector::from((0..dy).map(|i| f[w * dy + i].clone()).collect::<Vec<_>>())
}

/// Rewrite a zero-sum point function so its support lies in the dotted
/// points, changing it only by differences of translates. Requires the
/// cover condition; each stray block is translated onto its dotted coset
/// point and the balancing mass deposited at a dotted point fixed by the
/// translating element.
pub fn normalize_support(
    y: &GModule,
    f: &RatVector,
    site: &GlobalSite,
) -> Result<NormalizedSupport, CmpError> {
    assert_eq!(y.group(), site.group(), "coefficients must carry the site group");
    let dy = y.dim();
    let pts = site.point_count();
    assert!(
        zero_sum_point_lattice(site, y).contains(f),
        "input must be an ambient-valued zero-sum point function"
    );
    let cover = check_cover(site);
    if !cover.covered {
        return Err(CmpError::CoverConditionFails {
            witness: cover.witness.expect("failed checks carry a witness"),
        });
    }

    let mut normalized = f.clone();
    let mut corrections = Vec::new();
    for w in 0..pts {
        if site.is_dotted(w) {
            continue;
        }
        let fw = point_block(f, w, dy);
        if fw.entries().iter().all(Zero::is_zero) {
            continue;
        }
        let element = (0..site.group().order())
            .find(|&g| site.is_dotted(site.act(g, w)))
            .expect("a coset point is moved to its dotted point by some element");
        let deposit = site
            .dotted_points()
            .iter()
            .copied()
            .find(|&d| site.place(site.place_of_point(d)).subgroup.contains(&element))
            .expect("the cover condition places every element in a dotted stabilizer");
        let mut term = alloc::vec![Rat::zero(); pts * dy];
        for i in 0..dy {
            term[w * dy + i] = fw[i].clone();
            term[deposit * dy + i] = -&fw[i];
        }
        let term = RatVector::from(term);
        let moved = point_action_matrix(site, y, element).mul_vec(&term);
        for k in 0..pts * dy {
            normalized[k] = &normalized[k] + &moved[k] - &term[k];
        }
        corrections.push(SupportCorrection { element, term });
    }

    for w in 0..pts {
        // the translate lands on the dotted coset point, the deposit stays put
        debug_assert!(
            site.is_dotted(w)
                || point_block(&normalized, w, dy).entries().iter().all(Zero::is_zero)
        );
    }
    debug_assert!(zero_sum_point_lattice(site, y).contains(&normalized));
    Ok(NormalizedSupport {
        normalized,
        corrections,
    })
}

/// Split the column-sum map by averaging: view the point coordinates of
/// the source basis as a function valued in the dual of the source, move
/// its support onto the dotted points, and spread each dotted block over
/// the group orbit with weight one over the group order. Requires the
/// cover condition.
pub fn s_iso_global(level: &GlobalLevel) -> Result<GMap, CmpError> {
    if !level.cover().covered {
        return Err(CmpError::CoverConditionFails {
            witness: level.cover().witness.expect("failed checks carry a witness"),
        });
    }
    let site = level.site().as_ref();
    let n = site.group().order();
    let pl = site.places().len();
    let pts = site.point_count();

    let y = level
        .m_iso()
        .dual()
        .expect("zero-sum point functions are torsion free");
    let basis = level.m_iso().ambient().basis_matrix();
    let dy = basis.rows();
    // coordinates of the basis along the points, one dual-valued block per point
    let mut coords = alloc::vec![Rat::zero(); pts * dy];
    for w in 0..pts {
        for k in 0..dy {
            coords[w * dy + k] = basis[(k, w)].clone();
        }
    }
    let framed = normalize_support(&y, &RatVector::from(coords), site)?;

    let inv_n = rat(1, n as i64);
    let mut images = RatMatrix::zero(n * pl, dy);
    for v in 0..pl {
        let dotted = point_block(&framed.normalized, site.dotted_point(v), dy);
        for s in 0..n {
            let moved = y.action(s).mul_vec(&dotted);
            for k in 0..dy {
                images[(s * pl + v, k)] = &moved[k] * &inv_n;
            }
        }
    }
    let matrix = crate::gmod::induced::extend_from_basis(&images, &basis);
    let map = GMap::new(level.m_iso().clone(), level.m_mid().clone(), matrix)
        .expect("the averaged section is integral and equivariant");
    let composite = level.c_iso().compose(&map).expect("maps share the middle module");
    for k in 0..dy {
        let b = basis.row_vector(k);
        assert_eq!(composite.apply(&b), b, "column sums must return the basis");
    }
    Ok(map)
}

/// A global level restricted to the decomposition subgroup at a dotted
/// point, with the three restriction maps onto a local level whose
/// denominator is the global group order.
#[derive(Clone, Debug)]
pub struct Localization {
    place: usize,
    point: usize,
    local: LocalLevel,
    iso: GMap,
    mid: GMap,
    rig: GMap,
}

/// Restrict a global level at a dotted point: the decomposition subgroup
/// becomes the local group, and each module maps onto its local
/// counterpart by reading off the coordinates at that point.
pub fn localize(level: &GlobalLevel, point: usize) -> Result<Localization, CmpError> {
    let site = level.site().as_ref();
    if !site.is_dotted(point) {
        return Err(CmpError::PlaceNotInDottedSet { point });
    }
    let place = site.place_of_point(point);
    let sub = site.place(place).subgroup.clone();
    let group: Arc<FiniteGroup> = Arc::new(
        site.group()
            .subgroup_as_group(&sub)
            .expect("places carry subgroups"),
    );
    let inclusion = GroupHom::new(&group, site.group(), sub.clone())
        .expect("a subgroup includes homomorphically");
    let local = build_local(group.clone(), site.group().order());

    let pulled_iso = Arc::new(
        level
            .m_iso()
            .pullback(group.clone(), &inclusion)
            .expect("restriction keeps the lattices"),
    );
    let pulled_mid = Arc::new(
        level
            .m_mid()
            .pullback(group.clone(), &inclusion)
            .expect("restriction keeps the lattices"),
    );
    let pulled_rig = Arc::new(
        level
            .m_rig()
            .pullback(group.clone(), &inclusion)
            .expect("restriction keeps the lattices"),
    );

    let pts = site.point_count();
    let iso_matrix = RatMatrix::from_fn(1, pts, |_, w| {
        if w == point {
            Rat::one()
        } else {
            Rat::zero()
        }
    });
    let pl = site.places().len();
    // pairs allowed at the point are exactly (subgroup element, its place)
    let pick = RatMatrix::from_fn(sub.len(), level.m_mid().dim(), |t, c| {
        if c == sub[t] * pl + place {
            Rat::one()
        } else {
            Rat::zero()
        }
    });
    let iso = GMap::new(pulled_iso, local.m_iso().clone(), iso_matrix)
        .expect("evaluation at a fixed point is equivariant");
    let mid = GMap::new(pulled_mid, local.m_mid().clone(), pick.clone())
        .expect("the column sum at the point is the local total sum");
    let rig = GMap::new(pulled_rig, local.m_rig().clone(), pick)
        .expect("integral functions restrict to integral functions");
    Ok(Localization {
        place,
        point,
        local,
        iso,
        mid,
        rig,
    })
}

impl Localization {
    /// Index of the place owning the chosen point.
    pub fn place(&self) -> usize {
        self.place
    }

    /// The chosen dotted point.
    pub fn point(&self) -> usize {
        self.point
    }

    /// The local level over the decomposition subgroup.
    pub fn local(&self) -> &LocalLevel {
        &self.local
    }

    /// Restriction of the zero-sum point functions.
    pub fn iso(&self) -> &GMap {
        &self.iso
    }

    /// Restriction of the middle pair functions.
    pub fn mid(&self) -> &GMap {
        &self.mid
    }

    /// Restriction of the finite quotients.
    pub fn rig(&self) -> &GMap {
        &self.rig
    }

    /// Both comparison squares against the global maps, as matrix identities.
    pub fn squares_commute(&self, level: &GlobalLevel) -> bool {
        let iso_square = self.local.c_iso().matrix().mul(self.mid.matrix())
            == self.iso.matrix().mul(level.c_iso().matrix());
        let rig_square = self.local.c_rig().matrix().mul(self.mid.matrix())
            == self.rig.matrix().mul(level.c_rig().matrix());
        iso_square && rig_square
    }
}
