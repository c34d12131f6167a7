//! Characters of second degree and the windows built from them.
//!
//! A character of second degree on `H` for a symmetric `φ: H → Ĥ` is a
//! unimodular `f` with `f(x + y) = f(x)·f(y)·⟨x, φ(y)⟩`. Extended by zero
//! to the ambient group it becomes a subcharacter, the basic maximally
//! localized window.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use serde_json::json;

use crate::error::{Error, Result};
use crate::group::{
    annihilator, transversal, GroupElement, GroupSpec, Homomorphism, SubgroupHandle,
    DEFAULT_ENUMERATION_BOUND,
};
use crate::phase::{nth_root_solutions, CyclotomicValue, ExactScalar, Rational, UnitPhase};
use crate::symplectic::{
    induced_phi_prime, subgroup_from_triple, IsotropicTriple, PhaseSpace,
};
use crate::tf::{PhaseSpaceFunction, Window};

/// Unimodular function on a subgroup `H`, stored as phases aligned with
/// `H.members()`, together with its homomorphism `φ`.
#[derive(Clone, Debug)]
pub struct SecondDegreeCharacter {
    domain: SubgroupHandle,
    phi: Homomorphism,
    phases: Vec<UnitPhase>,
}

impl SecondDegreeCharacter {
    /// Wraps a value table without checking it; see [`verify_second_degree`].
    pub fn from_phases(domain: SubgroupHandle, phi: Homomorphism, phases: Vec<UnitPhase>) -> Result<Self> {
        if phases.len() != domain.order() {
            return Err(Error::InvalidParameter(format!(
                "expected {} values, got {}",
                domain.order(),
                phases.len()
            )));
        }
        if phi.source() != &domain {
            return Err(Error::IllDefined("φ is defined on a different subgroup".into()));
        }
        Ok(SecondDegreeCharacter { domain, phi, phases })
    }

    pub fn domain(&self) -> &SubgroupHandle {
        &self.domain
    }

    pub fn phi(&self) -> &Homomorphism {
        &self.phi
    }

    /// Phases in the order of `domain().members()`.
    pub fn phases(&self) -> &[UnitPhase] {
        &self.phases
    }

    pub fn phase_idx(&self, x: usize) -> Option<UnitPhase> {
        self.domain
            .members()
            .binary_search(&x)
            .ok()
            .map(|k| self.phases[k])
    }

    pub fn phase(&self, x: &GroupElement) -> Option<UnitPhase> {
        if !self.domain.parent().contains(x) {
            return None;
        }
        self.phase_idx(self.domain.parent().index(x))
    }

    /// `f·⟨·, ξ⟩` for `ξ` in the dual of the parent group.
    pub fn times_character(&self, xi: &GroupElement) -> Result<Self> {
        let g = self.domain.parent();
        g.check(xi)?;
        let phases = self
            .domain
            .members()
            .iter()
            .zip(&self.phases)
            .map(|(&x, p)| p.add(g.pairing_phase(&g.element_at(x), xi)))
            .collect();
        Ok(SecondDegreeCharacter {
            domain: self.domain.clone(),
            phi: self.phi.clone(),
            phases,
        })
    }

    /// `self / other` as a function on `H`, phases aligned with members.
    pub fn ratio(&self, other: &Self) -> Vec<UnitPhase> {
        self.phases
            .iter()
            .zip(&other.phases)
            .map(|(a, b)| a.sub(*b))
            .collect()
    }
}

impl PartialEq for SecondDegreeCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.domain == other.domain && self.phases == other.phases
    }
}

fn beta(phi: &Homomorphism, x: usize, y: usize) -> UnitPhase {
    UnitPhase::new(
        phi.bilinear_num(x, y) as i64,
        phi.source().parent().exponent(),
    )
}

fn check_input(h: &SubgroupHandle, phi: &Homomorphism) -> Result<()> {
    if phi.source() != h || phi.target() != h.parent() {
        return Err(Error::IllDefined("φ must map H into the dual of its parent".into()));
    }
    if !phi.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    if !phi.is_well_defined(Some(&annihilator(h))) {
        return Err(Error::IllDefined("φ does not descend to H → Ĥ".into()));
    }
    Ok(())
}

/// A character of second degree for `φ`. Odd-order `H` uses
/// `f(x) = ⟨x, φ(m·x)⟩` with `2m ≡ 1 (mod |H|)`; otherwise
/// [`construct_from_generators`].
pub fn construct_second_degree(h: &SubgroupHandle, phi: &Homomorphism) -> Result<SecondDegreeCharacter> {
    check_input(h, phi)?;
    if h.order() % 2 == 1 {
        let g = h.parent();
        let m = (h.order() as i64 + 1) / 2;
        let phases = h
            .members()
            .iter()
            .map(|&x| beta(phi, x, g.mul_idx(m, x)))
            .collect();
        return SecondDegreeCharacter::from_phases(h.clone(), phi.clone(), phases);
    }
    construct_from_generators(h, phi)
}

/// Builds `f` from the canonical basis `e_i` (orders `d_i`): `f(e_i)` is the
/// smallest root of `f(e_i)^{d_i} = conj β(e_i,e_i)^{d_i(d_i−1)/2}`, and
/// `f(Σ c_i e_i) = Π_i f(e_i)^{c_i} β(e_i,e_i)^{c_i(c_i−1)/2} · Π_{i<j} β(e_i,e_j)^{c_i c_j}`
/// with `β(x, y) = ⟨x, φ(y)⟩`.
pub fn construct_from_generators(h: &SubgroupHandle, phi: &Homomorphism) -> Result<SecondDegreeCharacter> {
    check_input(h, phi)?;
    let g = h.parent();
    let basis: Vec<(usize, u64)> = h
        .canonical_basis()
        .iter()
        .map(|(e, d)| (g.index(e), *d))
        .collect();
    let diag: Vec<UnitPhase> = basis.iter().map(|&(e, _)| beta(phi, e, e)).collect();
    let gen_vals: Vec<UnitPhase> = basis
        .iter()
        .zip(&diag)
        .map(|(&(_, d), b)| {
            let tri = (d as i64) * (d as i64 - 1) / 2;
            nth_root_solutions(b.scale(-tri), d)[0]
        })
        .collect();

    let mut phases = Vec::with_capacity(h.order());
    for &x in h.members() {
        let c = h.coefficients(x).expect("member has coefficients");
        let mut acc = UnitPhase::ZERO;
        for i in 0..basis.len() {
            let ci = c[i] as i64;
            acc = acc.add(gen_vals[i].scale(ci)).add(diag[i].scale(ci * (ci - 1) / 2));
            for j in i + 1..basis.len() {
                acc = acc.add(beta(phi, basis[i].0, basis[j].0).scale(ci * c[j] as i64));
            }
        }
        phases.push(acc);
    }
    SecondDegreeCharacter::from_phases(h.clone(), phi.clone(), phases)
}

/// Exhaustive check of `f(0) = 1` and `f(x+y) = f(x) f(y) ⟨x, φ(y)⟩`.
pub fn verify_second_degree(f: &SecondDegreeCharacter, phi: &Homomorphism) -> bool {
    let h = &f.domain;
    if phi.source() != h {
        return false;
    }
    let g = h.parent();
    if f.phase_idx(0) != Some(UnitPhase::ZERO) {
        return false;
    }
    let m = h.members();
    for (i, &x) in m.iter().enumerate() {
        for (j, &y) in m.iter().enumerate() {
            let lhs = f.phase_idx(g.add_idx(x, y));
            let rhs = f.phases[i].add(f.phases[j]).add(beta(phi, x, y));
            if lhs != Some(rhs) {
                return false;
            }
        }
    }
    true
}

/// All characters of second degree for `φ`: the constructed one times each
/// character of `H` (one per coset of `H⊥`).
pub fn enumerate_second_degree(h: &SubgroupHandle, phi: &Homomorphism) -> Result<Vec<SecondDegreeCharacter>> {
    if h.order() > DEFAULT_ENUMERATION_BOUND {
        return Err(Error::BoundExceeded {
            order: h.order(),
            bound: DEFAULT_ENUMERATION_BOUND,
        });
    }
    let f0 = construct_second_degree(h, phi)?;
    transversal(h.parent(), &annihilator(h))?
        .iter()
        .map(|xi| f0.times_character(xi))
        .collect()
}

/// Whether a phase table on `H` (aligned with members) is a character.
pub fn is_character(h: &SubgroupHandle, phases: &[UnitPhase]) -> bool {
    let g = h.parent();
    let at = |x: usize| h.members().binary_search(&x).ok().map(|k| phases[k]);
    h.members().iter().enumerate().all(|(i, &x)| {
        h.members()
            .iter()
            .enumerate()
            .all(|(j, &y)| at(g.add_idx(x, y)) == Some(phases[i].add(phases[j])))
    })
}

/// Independent search for characters of second degree, used to cross-check
/// the constructor.
pub mod brute {
    use super::*;

    /// Every solution, each as phases aligned with `h.members()`. Values on a
    /// greedy generating set range over all phases with denominator
    /// `2·exp(A)·|H|`; the rest follows from the functional equation.
    pub fn solve_all(h: &SubgroupHandle, phi: &Homomorphism) -> Vec<Vec<UnitPhase>> {
        let g = h.parent();
        let den = 2 * g.exponent() * h.order() as u64;
        let mut gens = Vec::new();
        let mut span = vec![false; g.order()];
        span[0] = true;
        for &x in h.members() {
            if !span[x] {
                gens.push(x);
                let mut frontier: Vec<usize> = (0..g.order()).filter(|&i| span[i]).collect();
                while let Some(s) = frontier.pop() {
                    for &t in &gens {
                        let u = g.add_idx(s, t);
                        if !span[u] {
                            span[u] = true;
                            frontier.push(u);
                        }
                    }
                }
            }
        }

        let mut out = Vec::new();
        let mut start = vec![None; g.order()];
        start[0] = Some(UnitPhase::ZERO);
        dfs(g, phi, &gens, den, 0, &mut vec![], start, &mut out);
        out.into_iter()
            .map(|vals| h.members().iter().map(|&x| vals[x].unwrap()).collect())
            .filter(|phases: &Vec<UnitPhase>| {
                let f = SecondDegreeCharacter {
                    domain: h.clone(),
                    phi: phi.clone(),
                    phases: phases.clone(),
                };
                verify_second_degree(&f, phi)
            })
            .collect()
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        g: &GroupSpec,
        phi: &Homomorphism,
        gens: &[usize],
        den: u64,
        i: usize,
        chosen: &mut Vec<UnitPhase>,
        vals: Vec<Option<UnitPhase>>,
        out: &mut Vec<Vec<Option<UnitPhase>>>,
    ) {
        if i == gens.len() {
            out.push(vals);
            return;
        }
        for k in 0..den {
            let c = UnitPhase::new(k as i64, den);
            chosen.push(c);
            if let Some(next) = propagate(g, phi, &gens[..=i], chosen, vals.clone()) {
                dfs(g, phi, gens, den, i + 1, chosen, next, out);
            }
            chosen.pop();
        }
    }

    fn propagate(
        g: &GroupSpec,
        phi: &Homomorphism,
        gens: &[usize],
        gen_vals: &[UnitPhase],
        mut vals: Vec<Option<UnitPhase>>,
    ) -> Option<Vec<Option<UnitPhase>>> {
        let last = *gens.last().unwrap();
        let lv = *gen_vals.last().unwrap();
        match vals[last] {
            Some(v) if v != lv => return None,
            _ => vals[last] = Some(lv),
        }
        let mut queue: Vec<usize> = (0..vals.len()).filter(|&x| vals[x].is_some()).collect();
        while let Some(x) = queue.pop() {
            let fx = vals[x].unwrap();
            for (&t, &ft) in gens.iter().zip(gen_vals) {
                let y = g.add_idx(x, t);
                let v = fx.add(ft).add(beta(phi, x, t));
                match vals[y] {
                    Some(w) if w != v => return None,
                    Some(_) => {}
                    None => {
                        vals[y] = Some(v);
                        queue.push(y);
                    }
                }
            }
        }
        Some(vals)
    }
}

/// A character of second degree extended by zero to its ambient group.
#[derive(Clone, Debug)]
pub struct Subcharacter {
    character: SecondDegreeCharacter,
}

impl Subcharacter {
    pub fn new(character: SecondDegreeCharacter) -> Self {
        Subcharacter { character }
    }

    /// The constructed subcharacter of a maximal isotropic triple.
    pub fn from_triple(t: &IsotropicTriple) -> Result<Self> {
        Ok(Subcharacter::new(construct_second_degree(t.h(), t.phi())?))
    }

    pub fn character(&self) -> &SecondDegreeCharacter {
        &self.character
    }

    pub fn ambient(&self) -> &GroupSpec {
        self.character.domain.parent()
    }

    pub fn domain(&self) -> &SubgroupHandle {
        &self.character.domain
    }

    pub fn phi(&self) -> &Homomorphism {
        &self.character.phi
    }

    /// Unimodular on `H`, zero elsewhere; exact.
    pub fn window(&self) -> Window {
        let entries = self
            .character
            .domain
            .members()
            .iter()
            .zip(&self.character.phases)
            .map(|(&x, &p)| (x, ExactScalar::unit(p)))
            .collect();
        Window::exact(self.ambient(), entries).expect("members are valid indices")
    }

    /// `|H|^{-1/2}` times [`Self::window`].
    pub fn normalized_window(&self) -> Window {
        self.window().normalized().expect("subcharacters are nonzero")
    }

    /// `M_ξ h`, again a subcharacter for the same `φ`.
    pub fn modulated(&self, xi: &GroupElement) -> Result<Self> {
        Ok(Subcharacter::new(self.character.times_character(xi)?))
    }

    /// `(H, H⊥, φ)`.
    pub fn triple(&self) -> Result<IsotropicTriple> {
        let h = self.domain().clone();
        IsotropicTriple::new(
            &PhaseSpace::new(self.ambient()),
            h.clone(),
            annihilator(&h),
            self.phi().clone(),
        )
    }

    /// The maximal isotropic subgroup `G = {(x, ξ) : x ∈ H, ξ ∈ φ(x) + H⊥}`.
    pub fn max_isotropic(&self) -> Result<SubgroupHandle> {
        Ok(subgroup_from_triple(&self.triple()?))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let g = self.ambient();
        let h = self.domain();
        let phases: BTreeMap<String, String> = h
            .members()
            .iter()
            .zip(self.character.phases())
            .map(|(&x, p)| (g.element_at(x).to_string(), p.to_string()))
            .collect();
        json!({
            "group": g.to_string(),
            "H": h.canonical_basis().iter().map(|(e, _)| &e.0).collect::<Vec<_>>(),
            "phi": self.phi().images().iter().map(|e| &e.0).collect::<Vec<_>>(),
            "phases": phases,
        })
    }
}

/// The subcharacter `M_ξ h_{b,p}` on `Z_N`: supported on `aZ_N`, `a = N/b`,
/// with phase `p·x²·b(1+b)/(2N²) + x·ξ/N` at the representative
/// `x ∈ [0, N)`.
pub fn cyclic_subcharacter(n: u64, b: u64, p: u64, xi: u64) -> Result<Subcharacter> {
    if n == 0 || b == 0 || n % b != 0 {
        return Err(Error::InvalidParameter(format!("b = {b} must divide N = {n}")));
    }
    if p >= b {
        return Err(Error::InvalidParameter(format!("p = {p} must lie in [0, {b})")));
    }
    if xi >= n {
        return Err(Error::InvalidParameter(format!("ξ = {xi} must lie in [0, {n})")));
    }
    let a = n / b;
    let g = GroupSpec::cyclic(n);
    let h = SubgroupHandle::generated(&g, &[g.element(&[a as i64])])?;
    let images = h
        .canonical_basis()
        .iter()
        .map(|(e, _)| g.element(&[((e.0[0] / a) * p) as i64]))
        .collect();
    let phi = Homomorphism::new(h.clone(), g.clone(), images)?;

    let (n128, b128) = (n as i128, b as i128);
    let den = 2 * n128 * n128;
    let phases = h
        .members()
        .iter()
        .map(|&x| {
            let x = x as i128;
            let q = (p as i128 * x * x * b128 * (1 + b128)).rem_euclid(den);
            let quad = UnitPhase::new(q as i64, den as u64);
            quad.add(UnitPhase::new((x * xi as i128 % n128) as i64, n))
        })
        .collect();
    Ok(Subcharacter::new(SecondDegreeCharacter::from_phases(h, phi, phases)?))
}

/// `V_h h(x, ξ) = |H|·conj h(−x)` on `G`, `0` off `G`, as exact values.
pub fn ambiguity_closed_form(h: &Subcharacter) -> Result<PhaseSpaceFunction> {
    let a = h.ambient();
    let space = PhaseSpace::new(a);
    let g = h.max_isotropic()?;
    let size = Rational::from(h.domain().order() as i64);
    let mut vals = vec![CyclotomicValue::zero(1); space.len()];
    for &z in g.members() {
        let (x, _) = space.split_idx(z);
        let ph = h.character.phase_idx(a.neg_idx(x)).expect("x ∈ H").neg();
        vals[z] = CyclotomicValue::monomial(ph.den(), ph, size);
    }
    PhaseSpaceFunction::from_exact(&space, vals, size.to_f64().unwrap())
}

/// `|H|^{-1} V_h h` restricted to `G`, as a character of second degree of
/// `G` for the induced `φ′`.
pub fn restricted_character(h: &Subcharacter) -> Result<SecondDegreeCharacter> {
    let a = h.ambient();
    let space = PhaseSpace::new(a);
    let g = h.max_isotropic()?;
    let phi_prime = induced_phi_prime(&space, &g)?;
    let phases = g
        .members()
        .iter()
        .map(|&z| {
            let (x, _) = space.split_idx(z);
            h.character.phase_idx(a.neg_idx(x)).expect("x ∈ H").neg()
        })
        .collect();
    SecondDegreeCharacter::from_phases(g, phi_prime, phases)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{all_groups_up_to, enumerate_subgroups, enumerate_symmetric_homs};
    use crate::tf::{ambiguity, support};

    fn whole_id(n: u64) -> (SubgroupHandle, Homomorphism) {
        let g = GroupSpec::cyclic(n);
        let h = SubgroupHandle::whole(&g);
        let phi = Homomorphism::new(h.clone(), g.clone(), vec![g.element(&[1])]).unwrap();
        (h, phi)
    }

    #[test]
    fn constructor_examples() {
        let (h, phi) = whole_id(3);
        let f = construct_second_degree(&h, &phi).unwrap();
        assert_eq!(f.phase_idx(1), Some(UnitPhase::new(2, 3)));
        assert!(verify_second_degree(&f, &phi));

        let (h, phi) = whole_id(2);
        let f = construct_second_degree(&h, &phi).unwrap();
        assert_eq!(f.phases(), &[UnitPhase::ZERO, UnitPhase::new(1, 4)]);

        let g: GroupSpec = "Z2xZ4".parse().unwrap();
        for h in enumerate_subgroups(&g).unwrap() {
            let f = construct_second_degree(&h, &Homomorphism::zero(h.clone(), g.clone())).unwrap();
            assert!(f.phases().iter().all(|p| p.is_zero()));
        }
    }

    #[test]
    fn verify_rejects() {
        let (h, phi) = whole_id(2);
        let one = SecondDegreeCharacter::from_phases(h.clone(), phi.clone(), vec![UnitPhase::ZERO; 2]).unwrap();
        assert!(!verify_second_degree(&one, &phi));
        let zero = Homomorphism::zero(h.clone(), h.parent().clone());
        let sign = SecondDegreeCharacter::from_phases(h, zero.clone(), vec![UnitPhase::ZERO, UnitPhase::new(1, 2)]).unwrap();
        assert!(verify_second_degree(&sign, &zero));
    }

    #[test]
    fn rejects_asymmetric() {
        let g: GroupSpec = "Z2xZ2".parse().unwrap();
        let h = SubgroupHandle::whole(&g);
        let basis = h.canonical_basis().to_vec();
        // φ(e1) = dual of e2, φ(e2) = 0 is not symmetric
        let images = vec![basis[1].0.clone(), g.zero()];
        let phi = Homomorphism::new(h.clone(), g.clone(), images).unwrap();
        if !phi.is_symmetric() {
            assert!(matches!(construct_second_degree(&h, &phi), Err(Error::NotSymmetric)));
        }
    }

    #[test]
    fn enumeration_examples() {
        let (h, phi) = whole_id(2);
        let all = enumerate_second_degree(&h, &phi).unwrap();
        let mut ph: Vec<_> = all.iter().map(|f| f.phase_idx(1).unwrap()).collect();
        ph.sort();
        assert_eq!(ph, vec![UnitPhase::new(1, 4), UnitPhase::new(3, 4)]);
        assert_eq!(brute::solve_all(&h, &phi).len(), 2);

        let z4 = GroupSpec::cyclic(4);
        let h = SubgroupHandle::whole(&z4);
        for phi in enumerate_symmetric_homs(&h).unwrap() {
            assert_eq!(enumerate_second_degree(&h, &phi).unwrap().len(), 4);
            assert_eq!(brute::solve_all(&h, &phi).len(), 4);
        }
    }

    #[test]
    fn constructor_sound_small_groups() {
        for g in all_groups_up_to(12) {
            for h in enumerate_subgroups(&g).unwrap() {
                for phi in enumerate_symmetric_homs(&h).unwrap() {
                    let f = construct_from_generators(&h, &phi).unwrap();
                    assert!(verify_second_degree(&f, &phi), "{g} {h:?} {phi:?}");
                    let f = construct_second_degree(&h, &phi).unwrap();
                    assert!(verify_second_degree(&f, &phi));
                }
            }
        }
    }

    #[test]
    fn odd_shortcut_agrees_up_to_character() {
        for g in all_groups_up_to(15) {
            for h in enumerate_subgroups(&g).unwrap() {
                if h.order() % 2 == 0 {
                    continue;
                }
                for phi in enumerate_symmetric_homs(&h).unwrap() {
                    let a = construct_second_degree(&h, &phi).unwrap();
                    let b = construct_from_generators(&h, &phi).unwrap();
                    assert!(is_character(&h, &a.ratio(&b)));
                }
            }
        }
    }

    #[test]
    fn cyclic_family() {
        let h = cyclic_subcharacter(4, 2, 1, 0).unwrap();
        assert_eq!(h.domain().members(), &[0, 2]);
        assert_eq!(h.character().phases(), &[UnitPhase::ZERO, UnitPhase::new(3, 4)]);
        assert!(verify_second_degree(h.character(), h.phi()));

        for n in 1..=8 {
            let d = cyclic_subcharacter(n, 1, 0, 0).unwrap();
            assert_eq!(d.domain().members(), &[0]);
        }
        let ind = cyclic_subcharacter(6, 3, 0, 0).unwrap();
        assert_eq!(ind.domain().members(), &[0, 2, 4]);
        assert!(ind.character().phases().iter().all(|p| p.is_zero()));

        assert!(cyclic_subcharacter(6, 4, 0, 0).is_err());
        assert!(cyclic_subcharacter(6, 3, 3, 0).is_err());

        for n in 1..=12u64 {
            for b in (1..=n).filter(|b| n % b == 0) {
                for p in 0..b {
                    for xi in [0, n - 1] {
                        let h = cyclic_subcharacter(n, b, p, xi).unwrap();
                        assert!(verify_second_degree(h.character(), h.phi()), "{n} {b} {p}");
                    }
                }
            }
        }
    }

    #[test]
    fn closed_form_examples() {
        let h = cyclic_subcharacter(4, 2, 1, 0).unwrap();
        let cf = ambiguity_closed_form(&h).unwrap();
        let direct = ambiguity(&h.window()).unwrap();
        assert_eq!(cf.exact_eq(&direct), Some(true));
        let s = support(&direct, 0.0);
        let sp = PhaseSpace::new(h.ambient());
        let expect: Vec<usize> = [(0, 0), (0, 2), (2, 1), (2, 3)]
            .iter()
            .map(|&(x, xi)| sp.point_idx(x, xi))
            .collect();
        assert_eq!(s.points(), &expect[..]);

        let d = cyclic_subcharacter(5, 1, 0, 0).unwrap();
        let s = support(&ambiguity_closed_form(&d).unwrap(), 0.0);
        assert_eq!(s.points(), &[0, 1, 2, 3, 4]);
    }

    #[test]
    fn restriction_is_second_degree() {
        for g in all_groups_up_to(8) {
            for t in crate::symplectic::enumerate_maximal_isotropic(&g).unwrap() {
                let h = Subcharacter::from_triple(&t).unwrap();
                let r = restricted_character(&h).unwrap();
                assert!(verify_second_degree(&r, r.phi()));
                // conj h(x) is a valid choice as well
                let space = PhaseSpace::new(&g);
                let alt: Vec<UnitPhase> = r
                    .domain()
                    .members()
                    .iter()
                    .map(|&z| h.character().phase_idx(space.split_idx(z).0).unwrap().neg())
                    .collect();
                let alt = SecondDegreeCharacter::from_phases(r.domain().clone(), r.phi().clone(), alt).unwrap();
                assert!(verify_second_degree(&alt, alt.phi()));
            }
        }
    }
}
