use std::fmt;

use super::subgroup::transversal_idx;
use super::{annihilator, GroupElement, GroupSpec, SubgroupHandle};
use crate::error::{Error, Result};

/// A homomorphism out of a subgroup, given by the images of the source's
/// canonical basis. For maps into a quotient `Â/K` the images are lifts.
#[derive(Clone)]
pub struct Homomorphism {
    source: SubgroupHandle,
    target: GroupSpec,
    images: Vec<GroupElement>,
}

impl Homomorphism {
    pub fn new(
        source: SubgroupHandle,
        target: GroupSpec,
        images: Vec<GroupElement>,
    ) -> Result<Self> {
        if images.len() != source.canonical_basis().len() {
            return Err(Error::IllDefined(format!(
                "expected {} images, got {}",
                source.canonical_basis().len(),
                images.len()
            )));
        }
        for im in &images {
            target.check(im)?;
        }
        Ok(Homomorphism {
            source,
            target,
            images,
        })
    }

    pub fn zero(source: SubgroupHandle, target: GroupSpec) -> Self {
        let images = vec![target.zero(); source.canonical_basis().len()];
        Homomorphism {
            source,
            target,
            images,
        }
    }

    pub fn source(&self) -> &SubgroupHandle {
        &self.source
    }

    pub fn target(&self) -> &GroupSpec {
        &self.target
    }

    pub fn images(&self) -> &[GroupElement] {
        &self.images
    }

    /// Image (lift) of a source member, by index. Panics if `x` is not in
    /// the source.
    pub fn eval_idx(&self, x: usize) -> usize {
        let c = self
            .source
            .coefficients(x)
            .expect("argument outside the homomorphism's source");
        let mut acc = 0usize;
        for (k, im) in c.iter().zip(&self.images) {
            if *k != 0 {
                acc = self
                    .target
                    .add_idx(acc, self.target.mul_idx(*k as i64, self.target.index(im)));
            }
        }
        acc
    }

    pub fn eval(&self, x: &GroupElement) -> Option<GroupElement> {
        if !self.source.contains(x) {
            return None;
        }
        let p = self.source.parent();
        Some(self.target.element_at(self.eval_idx(p.index(x))))
    }

    /// `d_i·image_i ∈ modulo` for each basis generator of order `d_i`
    /// (`modulo = None` means the images must be killed outright).
    pub fn is_well_defined(&self, modulo: Option<&SubgroupHandle>) -> bool {
        self.source
            .canonical_basis()
            .iter()
            .zip(&self.images)
            .all(|((_, d), im)| {
                let v = self.target.mul_idx(*d as i64, self.target.index(im));
                match modulo {
                    Some(k) => k.contains_idx(v),
                    None => v == 0,
                }
            })
    }

    /// `⟨x, φ(y)⟩ = ⟨y, φ(x)⟩` on all pairs of basis generators, with the
    /// target identified with the dual of the source's parent group.
    pub fn is_symmetric(&self) -> bool {
        let g = self.source.parent();
        if *g != self.target {
            return false;
        }
        let basis = self.source.canonical_basis();
        for (i, (ei, _)) in basis.iter().enumerate() {
            for (j, (ej, _)) in basis.iter().enumerate().skip(i + 1) {
                if g.pair_num(ei, &self.images[j]) != g.pair_num(ej, &self.images[i]) {
                    return false;
                }
            }
        }
        true
    }

    /// Pairing phase numerator of `⟨x, φ(y)⟩` over the parent exponent.
    pub fn bilinear_num(&self, x: usize, y: usize) -> u64 {
        self.source.parent().pair_num_idx(x, self.eval_idx(y))
    }

    /// Replaces every image by the smallest element of its coset mod `k`.
    pub fn normalized_mod(&self, k: &SubgroupHandle) -> Homomorphism {
        let images = self
            .images
            .iter()
            .map(|im| self.target.element_at(k.coset_min(self.target.index(im))))
            .collect();
        Homomorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            images,
        }
    }

    /// Equality of the induced maps into `target / k`.
    pub fn equal_mod(&self, other: &Homomorphism, k: &SubgroupHandle) -> bool {
        self.source == other.source
            && self
                .images
                .iter()
                .zip(&other.images)
                .all(|(a, b)| k.same_cosets(self.target.index(a), self.target.index(b)))
    }
}

impl fmt::Debug for Homomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .source
            .canonical_basis()
            .iter()
            .zip(&self.images)
            .map(|((g, _), im)| format!("{g}->{im}"))
            .collect();
        write!(f, "Hom[{}]", parts.join(", "))
    }
}

/// Every symmetric homomorphism `H → Ĥ`, images given as the smallest lifts
/// in `Â` modulo `H⊥`, in lexicographic order of the image tuples.
pub fn enumerate_symmetric_homs(h: &SubgroupHandle) -> Result<Vec<Homomorphism>> {
    let a = h.parent();
    if h.order() > super::DEFAULT_ENUMERATION_BOUND {
        return Err(Error::BoundExceeded {
            order: h.order(),
            bound: super::DEFAULT_ENUMERATION_BOUND,
        });
    }
    let perp = annihilator(h);
    let reps = transversal_idx(&perp);
    let basis: Vec<(usize, u64)> = h
        .canonical_basis()
        .iter()
        .map(|(g, d)| (a.index(g), *d))
        .collect();

    // candidates for φ(e_i): characters of H whose d_i-th power is trivial
    let candidates: Vec<Vec<usize>> = basis
        .iter()
        .map(|&(_, d)| {
            reps.iter()
                .copied()
                .filter(|&xi| perp.contains_idx(a.mul_idx(d as i64, xi)))
                .collect()
        })
        .collect();

    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(basis.len());
    fn dfs(
        a: &GroupSpec,
        basis: &[(usize, u64)],
        candidates: &[Vec<usize>],
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let i = chosen.len();
        if i == basis.len() {
            out.push(chosen.clone());
            return;
        }
        for &c in &candidates[i] {
            let ok = (0..i).all(|j| a.pair_num_idx(basis[i].0, chosen[j]) == a.pair_num_idx(basis[j].0, c));
            if ok {
                chosen.push(c);
                dfs(a, basis, candidates, chosen, out);
                chosen.pop();
            }
        }
    }
    dfs(a, &basis, &candidates, &mut chosen, &mut out);

    Ok(out
        .into_iter()
        .map(|imgs| Homomorphism {
            source: h.clone(),
            target: a.clone(),
            images: imgs.into_iter().map(|i| a.element_at(i)).collect(),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{all_groups_up_to, enumerate_subgroups};

    #[test]
    fn symmetric_hom_counts() {
        let z2 = GroupSpec::cyclic(2);
        assert_eq!(enumerate_symmetric_homs(&SubgroupHandle::whole(&z2)).unwrap().len(), 2);
        let z3 = GroupSpec::cyclic(3);
        assert_eq!(enumerate_symmetric_homs(&SubgroupHandle::whole(&z3)).unwrap().len(), 3);
        assert_eq!(enumerate_symmetric_homs(&SubgroupHandle::trivial(&z3)).unwrap().len(), 1);
        // symmetric 2x2 matrices over F_2
        let v4: GroupSpec = "Z2xZ2".parse().unwrap();
        assert_eq!(enumerate_symmetric_homs(&SubgroupHandle::whole(&v4)).unwrap().len(), 8);
    }

    #[test]
    fn symmetry_holds_on_all_pairs() {
        for a in all_groups_up_to(12) {
            for h in enumerate_subgroups(&a).unwrap() {
                let perp = annihilator(&h);
                let homs = enumerate_symmetric_homs(&h).unwrap();
                for (n, phi) in homs.iter().enumerate() {
                    assert!(phi.is_well_defined(Some(&perp)));
                    assert!(phi.is_symmetric());
                    for &x in h.members() {
                        for &y in h.members() {
                            assert_eq!(phi.bilinear_num(x, y), phi.bilinear_num(y, x));
                        }
                    }
                    // additivity of the lifted map modulo H⊥
                    for &x in h.members() {
                        for &y in h.members() {
                            let lhs = phi.eval_idx(a.add_idx(x, y));
                            let rhs = a.add_idx(phi.eval_idx(x), phi.eval_idx(y));
                            assert!(perp.same_cosets(lhs, rhs));
                        }
                    }
                    for other in &homs[n + 1..] {
                        assert!(!phi.equal_mod(other, &perp));
                    }
                }
            }
        }
    }
}
