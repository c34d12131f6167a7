use std::collections::HashSet;
use std::fmt;

use super::smith::canonical_basis;
use super::{ensure_same, Bits, GroupElement, GroupSpec};
use crate::error::{Error, Result};
use crate::phase::Rational;

/// Default cap on the order of a group whose subgroup lattice is enumerated.
pub const DEFAULT_ENUMERATION_BOUND: usize = 1024;

/// A subgroup, stored with its element set and an invariant-factor basis.
#[derive(Clone)]
pub struct SubgroupHandle {
    parent: GroupSpec,
    generators: Vec<GroupElement>,
    basis: Vec<(GroupElement, u64)>,
    members: Vec<usize>,
    // canonical-basis coefficients of members[i]
    coeffs: Vec<Vec<u64>>,
    mask: Bits,
}

impl SubgroupHandle {
    /// The subgroup generated by `gens`.
    pub fn generated(parent: &GroupSpec, gens: &[GroupElement]) -> Result<Self> {
        for g in gens {
            parent.check(g)?;
        }
        Ok(Self::build(parent, gens.to_vec()))
    }

    pub fn trivial(parent: &GroupSpec) -> Self {
        Self::build(parent, Vec::new())
    }

    pub fn whole(parent: &GroupSpec) -> Self {
        let gens = (0..parent.rank())
            .map(|i| {
                let mut c = vec![0i64; parent.rank()];
                c[i] = 1;
                parent.element(&c)
            })
            .collect();
        Self::build(parent, gens)
    }

    /// Builds a handle from an element set already known to be a subgroup.
    pub(crate) fn from_mask(parent: &GroupSpec, mask: &Bits) -> Self {
        let mut span = Bits::from_indices(parent.order(), [0]);
        let mut gens = Vec::new();
        for i in mask.iter() {
            if !span.contains(i) {
                span = join_cyclic(parent, &span, i);
                gens.push(parent.element_at(i));
            }
        }
        debug_assert_eq!(&span, mask, "mask is not a subgroup");
        Self::build(parent, gens)
    }

    /// Builds from a list of indices; returns `None` unless they form a
    /// subgroup.
    pub fn from_members(parent: &GroupSpec, members: &[usize]) -> Option<Self> {
        let mask = Bits::from_indices(parent.order(), members.iter().copied());
        if !mask.contains(0) || mask.count() != members.len() {
            return None;
        }
        for a in mask.iter() {
            for b in mask.iter() {
                if !mask.contains(parent.add_idx(a, b)) {
                    return None;
                }
            }
        }
        Some(Self::from_mask(parent, &mask))
    }

    fn build(parent: &GroupSpec, generators: Vec<GroupElement>) -> Self {
        let basis = canonical_basis(parent, &generators);
        let mut pairs: Vec<(usize, Vec<u64>)> = vec![(0, vec![0; basis.len()])];
        for (i, (g, d)) in basis.iter().enumerate() {
            let gi = parent.index(g);
            let mut next = Vec::with_capacity(pairs.len() * *d as usize);
            for (idx, c) in &pairs {
                let mut cur = *idx;
                for k in 0..*d {
                    let mut cc = c.clone();
                    cc[i] = k;
                    next.push((cur, cc));
                    cur = parent.add_idx(cur, gi);
                }
            }
            pairs = next;
        }
        pairs.sort_by_key(|p| p.0);
        let mask = Bits::from_indices(parent.order(), pairs.iter().map(|p| p.0));
        let (members, coeffs) = pairs.into_iter().unzip();
        SubgroupHandle {
            parent: parent.clone(),
            generators,
            basis,
            members,
            coeffs,
            mask,
        }
    }

    pub fn parent(&self) -> &GroupSpec {
        &self.parent
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn canonical_basis(&self) -> &[(GroupElement, u64)] {
        &self.basis
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    /// Invariant factors `d_1 | d_2 | …` (all greater than one).
    pub fn invariant_factors(&self) -> Vec<u64> {
        self.basis.iter().map(|b| b.1).collect()
    }

    /// Sorted element indices.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        self.members.iter().map(|&i| self.parent.element_at(i))
    }

    #[inline]
    pub fn contains_idx(&self, idx: usize) -> bool {
        self.mask.contains(idx)
    }

    pub fn contains(&self, e: &GroupElement) -> bool {
        self.parent.contains(e) && self.contains_idx(self.parent.index(e))
    }

    /// Coefficients of a member with respect to the canonical basis.
    pub fn coefficients(&self, idx: usize) -> Option<&[u64]> {
        self.members
            .binary_search(&idx)
            .ok()
            .map(|p| self.coeffs[p].as_slice())
    }

    pub fn is_subgroup_of(&self, other: &SubgroupHandle) -> bool {
        self.parent == other.parent && self.mask.is_subset(&other.mask)
    }

    /// Haar measure of the subgroup when it lives in a dual group
    /// (counting / |A|).
    pub fn dual_measure(&self) -> Rational {
        Rational::new(self.order() as i64, self.parent.order() as i64)
    }

    /// Smallest member of the coset `idx + self`.
    pub fn coset_min(&self, idx: usize) -> usize {
        self.members
            .iter()
            .map(|&m| self.parent.add_idx(idx, m))
            .min()
            .expect("subgroup is nonempty")
    }

    pub fn same_cosets(&self, a: usize, b: usize) -> bool {
        self.contains_idx(self.parent.sub_idx(a, b))
    }
}

impl PartialEq for SubgroupHandle {
    fn eq(&self, other: &Self) -> bool {
        self.parent == other.parent && self.members == other.members
    }
}

impl Eq for SubgroupHandle {}

impl fmt::Debug for SubgroupHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let els: Vec<String> = self.elements().map(|e| e.to_string()).collect();
        write!(f, "Subgroup[{}]{{{}}}", self.parent, els.join(","))
    }
}

fn join_cyclic(parent: &GroupSpec, span: &Bits, g: usize) -> Bits {
    let mut out = span.clone();
    let mut shift = g;
    while shift != 0 && !span.contains(shift) {
        for s in span.iter() {
            out.insert(parent.add_idx(s, shift));
        }
        shift = parent.add_idx(shift, g);
    }
    out
}

/// `H⊥ = {ξ : ⟨x, ξ⟩ = 1 for all x ∈ H}` as a subgroup of the dual group
/// (same coordinates as `A`).
pub fn annihilator(h: &SubgroupHandle) -> SubgroupHandle {
    let a = h.parent();
    let gens: Vec<usize> = h.canonical_basis().iter().map(|(g, _)| a.index(g)).collect();
    let members: Vec<usize> = (0..a.order())
        .filter(|&xi| gens.iter().all(|&g| a.pair_num_idx(g, xi) == 0))
        .collect();
    let mask = Bits::from_indices(a.order(), members);
    SubgroupHandle::from_mask(a, &mask)
}

/// One representative per coset of `s` in its parent group, the
/// lexicographically smallest of each coset, in ascending order.
pub fn transversal(parent: &GroupSpec, s: &SubgroupHandle) -> Result<Vec<GroupElement>> {
    ensure_same(parent, s.parent())?;
    Ok(transversal_idx(s)
        .into_iter()
        .map(|i| parent.element_at(i))
        .collect())
}

pub(crate) fn transversal_idx(s: &SubgroupHandle) -> Vec<usize> {
    let parent = s.parent();
    let mut covered = Bits::new(parent.order());
    let mut reps = Vec::with_capacity(parent.order() / s.order());
    for i in 0..parent.order() {
        if covered.contains(i) {
            continue;
        }
        reps.push(i);
        for &m in s.members() {
            covered.insert(parent.add_idx(i, m));
        }
    }
    reps
}

pub fn enumerate_subgroups(a: &GroupSpec) -> Result<Vec<SubgroupHandle>> {
    enumerate_subgroups_bounded(a, DEFAULT_ENUMERATION_BOUND)
}

/// All subgroups of `a`, each once, sorted by order and then by element list.
pub fn enumerate_subgroups_bounded(a: &GroupSpec, bound: usize) -> Result<Vec<SubgroupHandle>> {
    if a.order() > bound {
        return Err(Error::BoundExceeded {
            order: a.order(),
            bound,
        });
    }
    let n = a.order();
    let trivial = Bits::from_indices(n, [0]);

    let mut cyclic: Vec<(usize, Bits)> = Vec::new();
    let mut seen_cyclic = HashSet::new();
    for g in 1..n {
        let c = join_cyclic(a, &trivial, g);
        if seen_cyclic.insert(c.clone()) {
            cyclic.push((g, c));
        }
    }

    let mut seen: HashSet<Bits> = HashSet::new();
    seen.insert(trivial.clone());
    let mut all = vec![trivial];
    let mut head = 0;
    while head < all.len() {
        let s = all[head].clone();
        head += 1;
        for (g, c) in &cyclic {
            if c.is_subset(&s) {
                continue;
            }
            let j = join_cyclic(a, &s, *g);
            if seen.insert(j.clone()) {
                all.push(j);
            }
        }
    }

    let mut lists: Vec<(Vec<usize>, Bits)> = all
        .into_iter()
        .map(|b| (b.iter().collect::<Vec<_>>(), b))
        .collect();
    lists.sort_by(|x, y| x.0.len().cmp(&y.0.len()).then_with(|| x.0.cmp(&y.0)));
    Ok(lists
        .into_iter()
        .map(|(_, b)| SubgroupHandle::from_mask(a, &b))
        .collect())
}
