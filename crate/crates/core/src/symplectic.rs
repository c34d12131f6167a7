//! The phase space `A × Â`, its symplectic bicharacter, and the
//! classification of phase-space subgroups by triples `(H, K, φ)`.
//!
//! A subgroup `G` of `A × Â` is `{(x, ξ) : x ∈ H, ξ ∈ φ(x) + K}` for a unique
//! `H ⊆ A`, `K ⊆ Â` and homomorphism `φ: H → Â/K`. `G` is isotropic iff
//! `K ⊆ H⊥` and `φ` is symmetric, and maximal isotropic iff in addition
//! `K = H⊥`, iff its measure is exactly 1.

use std::fmt;

use crate::error::{Error, Result};
use crate::group::{
    annihilator, enumerate_subgroups, enumerate_subgroups_bounded, enumerate_symmetric_homs,
    Bits, GroupElement, GroupSpec, Homomorphism, SubgroupHandle,
};
use crate::phase::{Rational, UnitPhase};

/// Maximum `|A|` accepted by [`enumerate_maximal_isotropic`].
pub const DEFAULT_ATLAS_ORDER_BOUND: usize = 64;
/// Maximum number of triples produced by [`enumerate_maximal_isotropic`].
pub const DEFAULT_ATLAS_COUNT_CAP: usize = 250_000;

/// `A × Â`, realised as the group with cyclic factors `orders ++ orders`.
/// A point `(x, ξ)` has index `index(x)·|A| + index(ξ)`.
#[derive(Clone, PartialEq, Eq)]
pub struct PhaseSpace {
    base: GroupSpec,
    product: GroupSpec,
}

impl PhaseSpace {
    pub fn new(base: &GroupSpec) -> Self {
        PhaseSpace {
            base: base.clone(),
            product: base.product(base),
        }
    }

    pub fn base(&self) -> &GroupSpec {
        &self.base
    }

    /// The product group `A × Â`.
    pub fn group(&self) -> &GroupSpec {
        &self.product
    }

    /// Number of points, `|A|²`.
    pub fn len(&self) -> usize {
        self.product.order()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Haar weight of one point, `1/|A|`.
    pub fn measure_weight(&self) -> Rational {
        self.base.haar_weight_primal() * self.base.haar_weight_dual()
    }

    pub fn measure_of(&self, count: usize) -> Rational {
        Rational::from(count as i64) * self.measure_weight()
    }

    #[inline]
    pub fn point_idx(&self, x: usize, xi: usize) -> usize {
        x * self.base.order() + xi
    }

    #[inline]
    pub fn split_idx(&self, z: usize) -> (usize, usize) {
        (z / self.base.order(), z % self.base.order())
    }

    pub fn point(&self, x: &GroupElement, xi: &GroupElement) -> GroupElement {
        let mut c = x.0.clone();
        c.extend_from_slice(&xi.0);
        GroupElement(c)
    }

    pub fn split(&self, z: &GroupElement) -> (GroupElement, GroupElement) {
        let r = self.base.rank();
        (
            GroupElement(z.0[..r].to_vec()),
            GroupElement(z.0[r..].to_vec()),
        )
    }

    /// Numerator over `exponent(A)` of `σ(z, w)`.
    #[inline]
    pub fn sigma_num_idx(&self, z: usize, w: usize) -> u64 {
        let (x, xi) = self.split_idx(z);
        let (y, eta) = self.split_idx(w);
        let e = self.base.exponent();
        (self.base.pair_num_idx(y, xi) + e - self.base.pair_num_idx(x, eta)) % e
    }
}

impl fmt::Debug for PhaseSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PhaseSpace({})", self.base)
    }
}

/// `σ((x,ξ),(y,η)) = ⟨y,ξ⟩·conj⟨x,η⟩`.
pub fn symplectic_pairing(
    space: &PhaseSpace,
    z: &GroupElement,
    w: &GroupElement,
) -> Result<UnitPhase> {
    space.group().check(z)?;
    space.group().check(w)?;
    let g = space.group();
    Ok(UnitPhase::new(
        space.sigma_num_idx(g.index(z), g.index(w)) as i64,
        space.base().exponent(),
    ))
}

/// The triple `(H, K, φ)` of a phase-space subgroup. `φ` is stored by lifts
/// into `Â`, normalised to the smallest representative of each coset of `K`.
#[derive(Clone)]
pub struct IsotropicTriple {
    space: PhaseSpace,
    h: SubgroupHandle,
    k: SubgroupHandle,
    phi: Homomorphism,
    is_symmetric: bool,
    is_maximal: bool,
}

impl IsotropicTriple {
    pub fn new(
        space: &PhaseSpace,
        h: SubgroupHandle,
        k: SubgroupHandle,
        phi: Homomorphism,
    ) -> Result<Self> {
        let a = space.base();
        if h.parent() != a || k.parent() != a || phi.target() != a || phi.source() != &h {
            return Err(Error::IllDefined("triple components live in different groups".into()));
        }
        if !phi.is_well_defined(Some(&k)) {
            return Err(Error::IllDefined(
                "φ does not descend to a homomorphism H → Â/K".into(),
            ));
        }
        let phi = phi.normalized_mod(&k);
        let perp = annihilator(&h);
        let is_symmetric = k.is_subgroup_of(&perp) && phi.is_symmetric();
        let is_maximal = is_symmetric && k == perp;
        Ok(IsotropicTriple {
            space: space.clone(),
            h,
            k,
            phi,
            is_symmetric,
            is_maximal,
        })
    }

    pub fn space(&self) -> &PhaseSpace {
        &self.space
    }

    pub fn h(&self) -> &SubgroupHandle {
        &self.h
    }

    pub fn k(&self) -> &SubgroupHandle {
        &self.k
    }

    pub fn phi(&self) -> &Homomorphism {
        &self.phi
    }

    /// `K ⊆ H⊥` and `φ` symmetric, i.e. the subgroup is isotropic.
    pub fn is_symmetric(&self) -> bool {
        self.is_symmetric
    }

    pub fn is_maximal(&self) -> bool {
        self.is_maximal
    }

    /// `|H|·|K|` in the product Haar measure.
    pub fn measure(&self) -> Rational {
        Rational::from(self.h.order() as i64) * self.k.dual_measure()
    }

    pub fn subgroup(&self) -> SubgroupHandle {
        subgroup_from_triple(self)
    }
}

impl fmt::Debug for IsotropicTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IsotropicTriple")
            .field("H", &self.h)
            .field("K", &self.k)
            .field("phi", &self.phi)
            .field("maximal", &self.is_maximal)
            .finish()
    }
}

/// Projects `G` to `H = π₁(G)`, takes `K = G ∩ Â`, and reads `φ` off lifts of
/// the canonical generators of `H`.
pub fn triple_from_subgroup(space: &PhaseSpace, g: &SubgroupHandle) -> Result<IsotropicTriple> {
    if g.parent() != space.group() {
        return Err(Error::GroupMismatch {
            left: g.parent().to_string(),
            right: space.group().to_string(),
        });
    }
    let a = space.base();
    let n = a.order();
    let mut h_mask = Bits::new(n);
    let mut k_mask = Bits::new(n);
    let mut lift = vec![usize::MAX; n];
    for &z in g.members() {
        let (x, xi) = space.split_idx(z);
        h_mask.insert(x);
        if x == 0 {
            k_mask.insert(xi);
        }
        if lift[x] == usize::MAX {
            lift[x] = xi;
        }
    }
    let h = SubgroupHandle::from_mask(a, &h_mask);
    let k = SubgroupHandle::from_mask(a, &k_mask);
    let images = h
        .canonical_basis()
        .iter()
        .map(|(e, _)| a.element_at(lift[a.index(e)]))
        .collect();
    let phi = Homomorphism::new(h.clone(), a.clone(), images)?;
    IsotropicTriple::new(space, h, k, phi)
}

/// `G = {(x, ξ) : x ∈ H, ξ ∈ φ(x) + K}`.
pub fn subgroup_from_triple(t: &IsotropicTriple) -> SubgroupHandle {
    let space = &t.space;
    let a = space.base();
    let mut mask = Bits::new(space.len());
    for &x in t.h.members() {
        let l = t.phi.eval_idx(x);
        for &k in t.k.members() {
            mask.insert(space.point_idx(x, a.add_idx(l, k)));
        }
    }
    SubgroupHandle::from_mask(space.group(), &mask)
}

/// Isotropy through the triple criterion: `K ⊆ H⊥` and `φ` symmetric.
pub fn is_isotropic(space: &PhaseSpace, g: &SubgroupHandle) -> Result<bool> {
    Ok(triple_from_subgroup(space, g)?.is_symmetric())
}

/// Isotropy by evaluating `σ` on pairs of canonical generators.
pub fn is_isotropic_direct(space: &PhaseSpace, g: &SubgroupHandle) -> bool {
    let gens: Vec<usize> = g
        .canonical_basis()
        .iter()
        .map(|(e, _)| space.group().index(e))
        .collect();
    gens.iter()
        .all(|&z| gens.iter().all(|&w| space.sigma_num_idx(z, w) == 0))
}

/// Maximality of an isotropic subgroup: measure 1, equivalently `K = H⊥`.
pub fn is_maximal_isotropic(space: &PhaseSpace, g: &SubgroupHandle) -> Result<bool> {
    let t = triple_from_subgroup(space, g)?;
    if !t.is_symmetric() {
        return Err(Error::NotIsotropic);
    }
    let by_measure = t.measure() == Rational::from(1);
    debug_assert_eq!(by_measure, t.is_maximal());
    Ok(by_measure && t.is_maximal())
}

/// Whether some isotropic subgroup among `candidates` strictly contains
/// `g`. Quadratic scan, meant for cross-checking [`is_maximal_isotropic`].
pub fn has_isotropic_extension(
    space: &PhaseSpace,
    g: &SubgroupHandle,
    candidates: &[SubgroupHandle],
) -> bool {
    candidates.iter().any(|c| {
        c.order() > g.order() && g.is_subgroup_of(c) && is_isotropic_direct(space, c)
    })
}

/// Enlarges an isotropic subgroup to a maximal one by keeping `H` and `φ`
/// and replacing `K` by `H⊥`.
pub fn saturate(space: &PhaseSpace, g: &SubgroupHandle) -> Result<SubgroupHandle> {
    let t = triple_from_subgroup(space, g)?;
    if !t.is_symmetric() {
        return Err(Error::NotIsotropic);
    }
    let perp = annihilator(&t.h);
    let sat = IsotropicTriple::new(space, t.h.clone(), perp, t.phi.clone())?;
    debug_assert!(sat.is_maximal());
    Ok(subgroup_from_triple(&sat))
}

pub fn enumerate_maximal_isotropic(a: &GroupSpec) -> Result<Vec<IsotropicTriple>> {
    enumerate_maximal_isotropic_bounded(a, DEFAULT_ATLAS_ORDER_BOUND, DEFAULT_ATLAS_COUNT_CAP)
}

/// Every maximal isotropic subgroup of `A × Â`, as triples `(H, H⊥, φ)` over
/// all subgroups `H` (in [`enumerate_subgroups`] order) and all symmetric
/// `φ: H → Ĥ` (in lexicographic order of lifts).
pub fn enumerate_maximal_isotropic_bounded(
    a: &GroupSpec,
    order_bound: usize,
    count_cap: usize,
) -> Result<Vec<IsotropicTriple>> {
    if a.order() > order_bound {
        return Err(Error::BoundExceeded {
            order: a.order(),
            bound: order_bound,
        });
    }
    let space = PhaseSpace::new(a);
    let mut out = Vec::new();
    for h in enumerate_subgroups_bounded(a, order_bound)? {
        let perp = annihilator(&h);
        for phi in enumerate_symmetric_homs(&h)? {
            out.push(IsotropicTriple::new(&space, h.clone(), perp.clone(), phi)?);
            if out.len() > count_cap {
                return Err(Error::BoundExceeded {
                    order: out.len(),
                    bound: count_cap,
                });
            }
        }
    }
    Ok(out)
}

/// Maximal isotropic subgroups found by filtering the full subgroup lattice
/// of `A × Â`: isotropic and of cardinality `|A|`.
pub fn brute_force_maximal_isotropic(a: &GroupSpec) -> Result<Vec<SubgroupHandle>> {
    let space = PhaseSpace::new(a);
    Ok(enumerate_subgroups(space.group())?
        .into_iter()
        .filter(|g| g.order() == a.order() && is_isotropic_direct(&space, g))
        .collect())
}

/// `φ′: G → Ĝ` with `⟨(x,ξ), φ′(y,η)⟩ = conj⟨x,η⟩`; the dual of `A × Â` uses
/// the same coordinates, so `φ′(y,η) = (−η, 0)`.
pub fn induced_phi_prime(space: &PhaseSpace, g: &SubgroupHandle) -> Result<Homomorphism> {
    if !is_maximal_isotropic(space, g)? {
        return Err(Error::InvalidParameter(
            "induced φ′ needs a maximal isotropic subgroup".into(),
        ));
    }
    let a = space.base();
    let images = g
        .canonical_basis()
        .iter()
        .map(|(z, _)| {
            let (_, eta) = space.split(z);
            space.point(&a.neg(&eta), &a.zero())
        })
        .collect();
    Homomorphism::new(g.clone(), space.group().clone(), images)
}
