//! Coefficient data for the Tate–Nakayama layer: a torsion-free module with
//! its norm and augmentation structure, and certified torsion classes in
//! the rational quotient by the augmentation sublattice.

use alloc::sync::Arc;

use num_integer::Integer;
use num_traits::Signed;

use crate::exactlin::{subquotient, Int, Lattice, Rat, RatMatrix, RatVector, Subquotient};
use crate::gmod::{canonical_submodules, CanonicalSubmodules, FiniteGroup, GModule};

use super::TnError;

/// A torsion-free module on the standard lattice, bundled with its norm,
/// augmentation sublattice and coinvariants, and optionally a saturated
/// stable sublattice cutting out a subtorus.
pub struct TorusData {
    y: Arc<GModule>,
    canon: CanonicalSubmodules,
    subtorus: Option<Lattice>,
}

impl TorusData {
    /// Wrap a torsion-free module whose ambient lattice is the standard one.
    pub fn new(y: Arc<GModule>) -> Result<Self, TnError> {
        if !y.is_torsion_free() || y.ambient() != &Lattice::standard(y.dim()) {
            return Err(TnError::NotAFreeLattice);
        }
        let canon = canonical_submodules(&y);
        Ok(TorusData {
            y,
            canon,
            subtorus: None,
        })
    }

    /// Wrap a module together with a subtorus lattice, which must be
    /// integral, saturated and stable under the action.
    pub fn with_subtorus(y: Arc<GModule>, z: Lattice) -> Result<Self, TnError> {
        let mut t = TorusData::new(y)?;
        if !z.is_sublattice_of(t.y.ambient()) {
            return Err(TnError::OutsideLattice);
        }
        if z.saturate() != z {
            return Err(TnError::SubtorusNotSaturated);
        }
        for g in 0..t.group().order() {
            if z.image(t.y.action(g)) != z {
                return Err(TnError::SubtorusNotStable);
            }
        }
        t.subtorus = Some(z);
        Ok(t)
    }

    /// The wrapped module.
    pub fn module(&self) -> &Arc<GModule> {
        &self.y
    }

    /// The acting group.
    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.y.group()
    }

    /// Rank of the coefficient lattice.
    pub fn rank(&self) -> usize {
        self.y.dim()
    }

    /// Matrix of the full norm, the sum over the group action.
    pub fn norm(&self) -> &RatMatrix {
        self.canon.norm.matrix()
    }

    /// Matrix of the norm divided by the group order, idempotent over `Q`.
    pub fn normalized_norm(&self) -> &RatMatrix {
        &self.canon.normalized_norm
    }

    /// The augmentation sublattice, spanned by all `(g - 1)` images.
    pub fn augmentation(&self) -> &Lattice {
        &self.canon.augmentation_submodule
    }

    /// The invariant sublattice.
    pub fn invariants(&self) -> &Lattice {
        &self.canon.invariants
    }

    /// The coinvariants, as a subquotient with class arithmetic.
    pub fn coinvariants(&self) -> &Subquotient {
        &self.canon.coinvariants
    }

    /// The subtorus lattice, when one is fixed.
    pub fn subtorus(&self) -> Option<&Lattice> {
        self.subtorus.as_ref()
    }

    /// Whether `v` lies in the rational span of the subtorus lattice.
    /// Always true when no subtorus is fixed.
    pub fn in_subtorus_span(&self, v: &RatVector) -> bool {
        match &self.subtorus {
            None => true,
            // saturation turns span membership into lattice membership
            Some(z) => z.contains(&v.scale(&Rat::from_integer(v.denominator_lcm()))),
        }
    }
}

/// A certified torsion class in `(Y (x) Q) / I*Y`: a canonical coset
/// representative together with a positive integer multiplying it into the
/// augmentation sublattice.
#[derive(Clone, Debug)]
pub struct RigClass {
    representative: RatVector,
    certificate: Int,
}

impl RigClass {
    /// The canonical coset representative.
    pub fn representative(&self) -> &RatVector {
        &self.representative
    }

    /// A positive integer multiplying the representative into the
    /// augmentation sublattice.
    pub fn certificate(&self) -> &Int {
        &self.certificate
    }

    /// Whether this is the zero class.
    pub fn is_zero(&self) -> bool {
        self.representative.is_zero()
    }
}

impl PartialEq for RigClass {
    // representatives are canonical, so classes agree iff they do
    fn eq(&self, other: &Self) -> bool {
        self.representative == other.representative
    }
}

impl Eq for RigClass {}

/// Reduce `mu` to its canonical representative modulo the augmentation
/// sublattice, after checking that `certificate * mu` lands in it.
pub fn y_rig_reduce(t: &TorusData, mu: &RatVector, certificate: &Int) -> Result<RigClass, TnError> {
    assert_eq!(mu.len(), t.rank(), "coefficient dimension mismatch");
    let scaled = mu.scale(&Rat::from_integer(certificate.clone()));
    if !certificate.is_positive() || !t.augmentation().contains(&scaled) {
        return Err(TnError::NotTorsion);
    }
    Ok(RigClass {
        representative: t.augmentation().mod_reduce(mu),
        certificate: certificate.clone(),
    })
}

/// A certificate valid for every genuine torsion class: the group order
/// times the denominator lcm of the vector.
pub fn default_certificate(t: &TorusData, mu: &RatVector) -> Int {
    Int::from(t.group().order()) * mu.denominator_lcm()
}

/// Sum of two classes.
pub fn rig_add(t: &TorusData, a: &RigClass, b: &RigClass) -> RigClass {
    RigClass {
        representative: t
            .augmentation()
            .mod_reduce(&a.representative.add(&b.representative)),
        certificate: a.certificate.lcm(&b.certificate),
    }
}

/// Negation of a class.
pub fn rig_neg(t: &TorusData, a: &RigClass) -> RigClass {
    RigClass {
        representative: t.augmentation().mod_reduce(&a.representative.neg()),
        certificate: a.certificate.clone(),
    }
}

/// Difference of two classes.
pub fn rig_sub(t: &TorusData, a: &RigClass, b: &RigClass) -> RigClass {
    rig_add(t, a, &rig_neg(t, b))
}

/// Order of the class in the finite quotient.
pub fn rig_order(t: &TorusData, a: &RigClass) -> Int {
    let span = Lattice::from_rows(t.rank(), &[a.representative.clone()]);
    let amb = t.augmentation().sum(&span);
    let sq = subquotient(t.augmentation(), &amb)
        .expect("the augmentation sublattice sits inside the enlarged lattice");
    sq.class_order(&a.representative)
        .expect("the representative spans the enlargement")
        .expect("certified classes have finite order")
}
