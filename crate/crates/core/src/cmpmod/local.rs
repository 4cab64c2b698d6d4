//! Local levels: over a finite group, the trivial rank-one module, the
//! middle lattice of `(1/N)`-valued functions with integral total sum, and
//! the finite quotient of the middle lattice by the integer functions, with
//! the total-sum and negated-reduction comparison maps, their splitting and
//! lifting, and inflation along group surjections.

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::One;

use crate::exactlin::{condition_lattice, int, rat, Lattice, Rat, RatMatrix, RatVector};
use crate::gmod::{GMap, GModule, GroupHom};

use super::CmpError;

/// One local level: the three modules and the two comparison maps out of
/// the middle one. The total-sum map `c_iso` lands in the rank-one module,
/// the negated reduction `c_rig` in the finite quotient.
#[derive(Clone, Debug)]
pub struct LocalLevel {
    group: Arc<crate::gmod::FiniteGroup>,
    modulus: usize,
    m_iso: Arc<GModule>,
    m_mid: Arc<GModule>,
    m_rig: Arc<GModule>,
    c_iso: GMap,
    c_rig: GMap,
}

/// Build the local level over `group` with denominator `modulus`.
pub fn build_local(group: Arc<crate::gmod::FiniteGroup>, modulus: usize) -> LocalLevel {
    assert!(modulus >= 1, "denominator must be positive");
    let n = group.order();
    let regular = GModule::regular(group.clone());
    let ones = RatMatrix::from_fn(1, n, |_, _| Rat::one());
    let mid = condition_lattice(n, &int(modulus as i64), &RatMatrix::zero(0, n), &ones);
    let m_iso = Arc::new(GModule::trivial(group.clone(), 1));
    let m_mid = Arc::new(
        regular
            .with_lattices(mid.clone(), Lattice::zero(n))
            .expect("total-sum condition is translation-stable"),
    );
    let m_rig = Arc::new(
        regular
            .with_lattices(mid, Lattice::standard(n))
            .expect("integer functions are translation-stable"),
    );
    let c_iso = GMap::new(m_mid.clone(), m_iso.clone(), ones)
        .expect("total sum is integral and equivariant");
    let c_rig = GMap::new(
        m_mid.clone(),
        m_rig.clone(),
        RatMatrix::identity(n).scale(&rat(-1, 1)),
    )
    .expect("negated inclusion is equivariant");
    // both comparison maps are onto at every level
    assert!(c_iso.is_surjective());
    assert!(c_rig.is_surjective());
    LocalLevel {
        group,
        modulus,
        m_iso,
        m_mid,
        m_rig,
        c_iso,
        c_rig,
    }
}

impl LocalLevel {
    pub fn group(&self) -> &Arc<crate::gmod::FiniteGroup> {
        &self.group
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn m_iso(&self) -> &Arc<GModule> {
        &self.m_iso
    }

    pub fn m_mid(&self) -> &Arc<GModule> {
        &self.m_mid
    }

    pub fn m_rig(&self) -> &Arc<GModule> {
        &self.m_rig
    }

    pub fn c_iso(&self) -> &GMap {
        &self.c_iso
    }

    pub fn c_rig(&self) -> &GMap {
        &self.c_rig
    }

    /// Kernel of the total-sum map, as a module of zero-sum middle vectors.
    pub fn zero_sum_submodule(&self) -> GModule {
        self.c_iso.kernel_module()
    }

    /// Constructive preimage under `c_rig` of the class of `rig_rep`: the
    /// coordinatewise representative of the negated class in `[0, 1)`. The
    /// result always lies in the middle lattice.
    pub fn lift_crig(&self, rig_rep: &RatVector) -> RatVector {
        assert!(
            self.m_rig.ambient().contains(rig_rep),
            "representative must lie in the covering lattice of the quotient"
        );
        let lifted: Vec<Rat> = rig_rep
            .entries()
            .iter()
            .map(|q| fractional_part(&(-q)))
            .collect();
        let lifted = RatVector::from(lifted);
        // integral total sum is inherited from the representative
        debug_assert!(self.m_mid.ambient().contains(&lifted));
        lifted
    }
}

/// Representative of `q` modulo one in `[0, 1)`.
pub(crate) fn fractional_part(q: &Rat) -> Rat {
    q - q.floor()
}

/// Constant-averaging splitting of the total-sum map. Needs the group order
/// to divide the denominator; its image is the invariant part of the middle
/// lattice.
pub fn s_iso_local(level: &LocalLevel) -> Result<GMap, CmpError> {
    let n = level.group.order();
    if !level.modulus.is_multiple_of(n) {
        return Err(CmpError::DivisibilityRequired {
            factor: n,
            value: level.modulus,
        });
    }
    let column = RatMatrix::from_fn(n, 1, |_, _| rat(1, n as i64));
    Ok(GMap::new(level.m_iso.clone(), level.m_mid.clone(), column)
        .expect("constant section is integral and equivariant"))
}

/// The three pullback maps from a lower level into an upper one along a
/// surjection `p` of the upper group onto the lower. Sources are the lower
/// modules viewed through `p`, so each map is a morphism over the upper
/// group: the rank-one member is multiplication by the kernel size, the
/// other two are composition with `p`.
#[derive(Clone, Debug)]
pub struct LocalInflation {
    iso: GMap,
    mid: GMap,
    rig: GMap,
}

/// Build the local inflation maps. Requires `p` to be a surjection of the
/// upper level's group onto the lower level's, and the lower denominator to
/// divide the upper one.
pub fn inflate_local(
    lower: &LocalLevel,
    upper: &LocalLevel,
    p: &GroupHom,
) -> Result<LocalInflation, CmpError> {
    if p.source_order() != upper.group.order()
        || p.target_order() != lower.group.order()
        || !p.is_surjective()
    {
        return Err(CmpError::TowerMismatch);
    }
    if !upper.modulus.is_multiple_of(lower.modulus) {
        return Err(CmpError::DivisibilityRequired {
            factor: lower.modulus,
            value: upper.modulus,
        });
    }
    let kernel_size = upper.group.order() / lower.group.order();
    let pull = |m: &Arc<GModule>| {
        Arc::new(
            m.pullback(upper.group.clone(), p)
                .expect("orders were checked"),
        )
    };
    let composition = RatMatrix::from_fn(upper.group.order(), lower.group.order(), |t, s| {
        if p.apply(t) == s {
            Rat::one()
        } else {
            Rat::from_integer(int(0))
        }
    });
    let iso = GMap::new(
        pull(&lower.m_iso),
        upper.m_iso.clone(),
        RatMatrix::identity(1).scale(&rat(kernel_size as i64, 1)),
    )
    .expect("scaling the trivial module is equivariant");
    let mid = GMap::new(pull(&lower.m_mid), upper.m_mid.clone(), composition.clone())
        .expect("composition with a surjection preserves the middle conditions");
    let rig = GMap::new(pull(&lower.m_rig), upper.m_rig.clone(), composition)
        .expect("composition with a surjection descends to the quotients");
    Ok(LocalInflation { iso, mid, rig })
}

impl LocalInflation {
    pub fn iso(&self) -> &GMap {
        &self.iso
    }

    pub fn mid(&self) -> &GMap {
        &self.mid
    }

    pub fn rig(&self) -> &GMap {
        &self.rig
    }

    /// Both comparison squares commute strictly on the ambient spaces.
    pub fn squares_commute(&self, lower: &LocalLevel, upper: &LocalLevel) -> bool {
        let iso_square = upper.c_iso.matrix().mul(self.mid.matrix())
            == self.iso.matrix().mul(lower.c_iso.matrix());
        let rig_square = upper.c_rig.matrix().mul(self.mid.matrix())
            == self.rig.matrix().mul(lower.c_rig.matrix());
        iso_square && rig_square
    }
}

/// On zero-sum middle vectors the denominator-raising inclusion factors as
/// multiplication by the group order followed by division by it; returns
/// that second factor after checking it maps lattice into lattice. Needs
/// the order times the lower denominator to divide the upper denominator.
pub fn zero_sum_scaling_factor(
    lower: &LocalLevel,
    upper: &LocalLevel,
) -> Result<RatMatrix, CmpError> {
    if lower.group != upper.group {
        return Err(CmpError::TowerMismatch);
    }
    let n = lower.group.order();
    if !upper.modulus.is_multiple_of(n * lower.modulus) {
        return Err(CmpError::DivisibilityRequired {
            factor: n * lower.modulus,
            value: upper.modulus,
        });
    }
    let second = RatMatrix::identity(n).scale(&rat(1, n as i64));
    let target = upper.zero_sum_submodule();
    for b in lower.zero_sum_submodule().ambient().basis_vectors() {
        // division by the order keeps zero-sum vectors in the upper lattice
        assert!(target.ambient().contains(&second.mul_vec(&b)));
    }
    Ok(second)
}
