//! Gabor systems `{π(z) f : z ∈ Γ}`, orthonormal-basis checks, construction
//! of maximally localized bases, and recognition of maximally localized
//! windows and pairs.

use num_complex::Complex64;
use num_traits::Zero;
use serde_json::json;

use crate::error::{Error, Result};
use crate::group::{transversal, GroupElement, SubgroupHandle};
use crate::phase::{format_rational, ExactScalar, Rational, UnitPhase};
use crate::second_degree::Subcharacter;
use crate::symplectic::{saturate, triple_from_subgroup, IsotropicTriple, PhaseSpace};
use crate::tf::{ambiguity, shift_idx, stft, support, translate, Window};

/// Pivot threshold used for rank computations.
pub const RANK_THRESHOLD: f64 = 1e-10;

/// A window together with a finite set of phase-space points.
#[derive(Clone, Debug)]
pub struct GaborSystem {
    window: Window,
    space: PhaseSpace,
    lattice: Vec<usize>,
}

impl GaborSystem {
    pub fn new(window: Window, lattice: &[GroupElement]) -> Result<Self> {
        let space = PhaseSpace::new(window.group());
        let mut idx = Vec::with_capacity(lattice.len());
        for z in lattice {
            space.group().check(z)?;
            idx.push(space.group().index(z));
        }
        Self::from_indices(window, idx)
    }

    /// Lattice given by phase-space point indices.
    pub fn from_indices(window: Window, lattice: Vec<usize>) -> Result<Self> {
        let space = PhaseSpace::new(window.group());
        let n = window.group().order();
        if lattice.len() > n {
            return Err(Error::InvalidParameter(format!(
                "{} points exceed the dimension {n}",
                lattice.len()
            )));
        }
        let mut sorted = lattice.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != lattice.len() {
            return Err(Error::InvalidParameter("lattice points must be distinct".into()));
        }
        if lattice.iter().any(|&z| z >= space.len()) {
            return Err(Error::InvalidParameter("lattice point outside phase space".into()));
        }
        Ok(GaborSystem {
            window,
            space,
            lattice,
        })
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn lattice(&self) -> &[usize] {
        &self.lattice
    }

    pub fn lattice_elements(&self) -> Vec<GroupElement> {
        self.lattice
            .iter()
            .map(|&z| self.space.group().element_at(z))
            .collect()
    }

    /// `π(z) f` for each lattice point, in lattice order.
    pub fn vectors(&self) -> Vec<Window> {
        self.lattice
            .iter()
            .map(|&z| {
                let (x, xi) = self.space.split_idx(z);
                shift_idx(&self.window, x, xi)
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrthonormalityReport {
    pub is_basis: bool,
    pub gram_max_offdiag: f64,
    pub gram_max_diag_dev: f64,
    pub rank: usize,
    pub size: usize,
    pub dimension: usize,
}

/// Gram matrix within `tol` of the identity, `|Γ| = |A|`, and rank `|A|`.
pub fn is_orthonormal_basis(sys: &GaborSystem, tol: f64) -> Result<OrthonormalityReport> {
    if sys.lattice.is_empty() {
        return Err(Error::InvalidParameter("empty lattice".into()));
    }
    if (sys.window.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter("window must have unit norm".into()));
    }
    let rows: Vec<Vec<Complex64>> = sys.vectors().iter().map(|w| w.values()).collect();
    let mut off: f64 = 0.0;
    let mut diag: f64 = 0.0;
    for (i, u) in rows.iter().enumerate() {
        for (j, v) in rows.iter().enumerate().skip(i) {
            let g: Complex64 = u.iter().zip(v).map(|(a, b)| a * b.conj()).sum();
            if i == j {
                diag = diag.max((g - 1.0).norm());
            } else {
                off = off.max(g.norm());
            }
        }
    }
    let n = sys.window.group().order();
    let rank = rank(rows, RANK_THRESHOLD);
    Ok(OrthonormalityReport {
        is_basis: sys.lattice.len() == n && rank == n && off <= tol && diag <= tol,
        gram_max_offdiag: off,
        gram_max_diag_dev: diag,
        rank,
        size: sys.lattice.len(),
        dimension: n,
    })
}

/// Rank by Gaussian elimination with full pivoting.
pub fn rank(mut m: Vec<Vec<Complex64>>, threshold: f64) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    let mut used = vec![false; cols];
    while r < rows {
        let mut best = (0.0, 0, 0);
        for (i, row) in m.iter().enumerate().skip(r) {
            for (j, v) in row.iter().enumerate() {
                if !used[j] && v.norm() > best.0 {
                    best = (v.norm(), i, j);
                }
            }
        }
        if best.0 <= threshold {
            break;
        }
        let (_, pi, pj) = best;
        m.swap(r, pi);
        used[pj] = true;
        let p = m[r][pj];
        let pivot = m[r].clone();
        for row in m.iter_mut().skip(r + 1) {
            let q = row[pj] / p;
            if q != Complex64::zero() {
                for (a, b) in row.iter_mut().zip(&pivot) {
                    *a -= q * b;
                }
            }
        }
        r += 1;
    }
    r
}

/// Whether the cosets `z + G`, `z ∈ Γ`, partition `A × Â`.
pub fn tiling_check(space: &PhaseSpace, lattice: &[usize], g: &SubgroupHandle) -> bool {
    if g.parent() != space.group() || lattice.len() * g.order() != space.len() {
        return false;
    }
    let mut reps: Vec<usize> = lattice.iter().map(|&z| g.coset_min(z)).collect();
    reps.sort_unstable();
    reps.dedup();
    reps.len() == lattice.len()
}

/// A maximally localized window with the lattice of its orthonormal basis.
#[derive(Clone, Debug)]
pub struct LocalizedBasis {
    pub subcharacter: Subcharacter,
    pub window: Window,
    pub subgroup: SubgroupHandle,
    pub lattice: Vec<usize>,
}

impl LocalizedBasis {
    pub fn system(&self) -> GaborSystem {
        GaborSystem::from_indices(self.window.clone(), self.lattice.clone())
            .expect("a transversal is a valid lattice")
    }
}

/// `f = |H|^{-1/2} h` for the constructed subcharacter `h` of the triple,
/// with `Γ` the minimal transversal of `G` in `A × Â`.
pub fn build_max_localized_basis(t: &IsotropicTriple) -> Result<LocalizedBasis> {
    if !t.is_maximal() {
        return Err(Error::InvalidParameter("triple is not maximal isotropic".into()));
    }
    let h = Subcharacter::from_triple(t)?;
    let g = t.subgroup();
    let pg = t.space().group();
    let lattice = transversal(pg, &g)?.iter().map(|z| pg.index(z)).collect();
    Ok(LocalizedBasis {
        window: h.normalized_window(),
        subcharacter: h,
        subgroup: g,
        lattice,
    })
}

/// Why a window or pair was rejected.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailedCriterion {
    MeasureNotOne,
    NotSubgroup,
    NotMaximalIsotropic,
    NoMatchingShift,
    NotACoset,
}

impl FailedCriterion {
    pub fn as_str(&self) -> &'static str {
        match self {
            FailedCriterion::MeasureNotOne => "support measure is not 1",
            FailedCriterion::NotSubgroup => "support is not a subgroup",
            FailedCriterion::NotMaximalIsotropic => "support is not maximal isotropic",
            FailedCriterion::NoMatchingShift => "no time-frequency shift matches the ambiguity",
            FailedCriterion::NotACoset => "support is not a coset of a maximal isotropic subgroup",
        }
    }
}

/// `f = c·T_{x0} ĥ`, `ĥ` the normalized subcharacter `h`.
#[derive(Clone, Debug)]
pub struct OptimizerWitness {
    pub c: Complex64,
    /// `f = exact_c · T_{x0} h` with `h` unnormalized, for exact input.
    pub exact_c: Option<ExactScalar>,
    pub x0: GroupElement,
    pub h: Subcharacter,
    pub triple: IsotropicTriple,
    pub residual: f64,
}

impl OptimizerWitness {
    pub fn reconstruct(&self) -> Window {
        translate(&self.h.normalized_window(), &self.x0)
            .expect("x0 lies in the group")
            .scale(self.c)
    }
}

#[derive(Clone, Debug)]
pub enum Verdict {
    Optimizer {
        support_measure: Rational,
        witness: Box<OptimizerWitness>,
    },
    NotOptimizer {
        support_measure: Rational,
        failed: FailedCriterion,
    },
}

impl Verdict {
    pub fn is_optimizer(&self) -> bool {
        matches!(self, Verdict::Optimizer { .. })
    }

    pub fn support_measure(&self) -> Rational {
        match self {
            Verdict::Optimizer { support_measure, .. } | Verdict::NotOptimizer { support_measure, .. } => {
                *support_measure
            }
        }
    }

    pub fn witness(&self) -> Option<&OptimizerWitness> {
        match self {
            Verdict::Optimizer { witness, .. } => Some(witness),
            _ => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Verdict::Optimizer {
                support_measure,
                witness,
            } => json!({
                "kind": "Optimizer",
                "support_measure": format_rational(support_measure),
                "c": [witness.c.re, witness.c.im],
                "x0": witness.x0.0,
                "h": witness.h.to_json(),
                "residual": witness.residual,
            }),
            Verdict::NotOptimizer {
                support_measure,
                failed,
            } => json!({
                "kind": "NotOptimizer",
                "support_measure": format_rational(support_measure),
                "failed": failed.as_str(),
            }),
        }
    }
}

/// Recognizes `f = c·T_{x0} h` for a subcharacter `h` of second degree.
///
/// The support `G` of `V_f f` must be a maximal isotropic subgroup. With the
/// reference subcharacter `h0` of its triple, `V_f f / (‖f‖² conj h0(−x))`
/// equals `⟨x,η⟩conj⟨y,ξ⟩` on `G` for some `(y, η)`; then `h = M_η h0` and
/// `x0 = y`.
pub fn classify_optimizer(f: &Window, tol: f64) -> Result<Verdict> {
    if f.is_zero() {
        return Err(Error::ZeroWindow);
    }
    let a = f.group();
    let v = ambiguity(f)?;
    let s = support(&v, tol);
    let measure = s.measure();
    let reject = |failed| Ok(Verdict::NotOptimizer {
        support_measure: measure,
        failed,
    });
    if measure != Rational::from(1) {
        return reject(FailedCriterion::MeasureNotOne);
    }
    let Some(g) = s.as_subgroup() else {
        return reject(FailedCriterion::NotSubgroup);
    };
    let space = v.space().clone();
    let t = triple_from_subgroup(&space, &g)?;
    if !t.is_maximal() {
        return reject(FailedCriterion::NotMaximalIsotropic);
    }
    let h0 = Subcharacter::from_triple(&t)?;
    let n2 = f.norm_sq();
    let e = a.exponent();

    // V_f f / (‖f‖² conj h0(−x)) on G, as complex numbers
    let target: Vec<(usize, usize, Complex64)> = g
        .members()
        .iter()
        .map(|&z| {
            let (x, xi) = space.split_idx(z);
            let ref_phase = h0.character().phase_idx(a.neg_idx(x)).unwrap().neg();
            (x, xi, v.value_idx(z) / (ref_phase.to_complex() * n2))
        })
        .collect();
    let match_tol = 1e-6_f64.max(tol);
    let mut found = None;
    'search: for y in 0..a.order() {
        for eta in 0..a.order() {
            let ok = target.iter().all(|&(x, xi, r)| {
                let k = (a.pair_num_idx(x, eta) + e - a.pair_num_idx(y, xi)) % e;
                (r - crate::phase::unit_complex(k, e)).norm() <= match_tol
            });
            if ok {
                found = Some((y, eta));
                break 'search;
            }
        }
    }
    let Some((y, eta)) = found else {
        return reject(FailedCriterion::NoMatchingShift);
    };

    let h = h0.modulated(&a.element_at(eta))?;
    let x0 = a.element_at(y);
    let shifted = translate(&h.normalized_window(), &x0)?;
    let c = f.inner(&shifted)?;
    let residual = f.distance(&shifted.scale(c))?;
    let exact_c = f.exact_entries().and_then(|entries| {
        let s = entries
            .binary_search_by_key(&y, |p| p.0)
            .ok()
            .map(|k| entries[k].1)?;
        let unnorm = translate(&h.window(), &x0).ok()?.scale_exact(&s);
        (unnorm.exact_entries() == Some(entries)).then_some(s)
    });
    Ok(Verdict::Optimizer {
        support_measure: measure,
        witness: Box::new(OptimizerWitness {
            c,
            exact_c,
            x0,
            h,
            triple: t,
            residual,
        }),
    })
}

/// `f = c1·π(z1) ĥ` and `g = c2·π(z2) ĥ` for one normalized subcharacter `ĥ`.
#[derive(Clone, Debug)]
pub struct PairWitness {
    pub c1: Complex64,
    pub c2: Complex64,
    pub z1: GroupElement,
    pub z2: GroupElement,
    pub h: Subcharacter,
    /// The lexicographically smallest point of the support, `S = z0 + G`.
    pub z0: GroupElement,
    pub subgroup: SubgroupHandle,
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub enum PairVerdict {
    Matched {
        support_measure: Rational,
        witness: Box<PairWitness>,
    },
    NotMatched {
        support_measure: Rational,
        failed: FailedCriterion,
    },
}

impl PairVerdict {
    pub fn is_matched(&self) -> bool {
        matches!(self, PairVerdict::Matched { .. })
    }

    pub fn support_measure(&self) -> Rational {
        match self {
            PairVerdict::Matched { support_measure, .. }
            | PairVerdict::NotMatched { support_measure, .. } => *support_measure,
        }
    }

    pub fn witness(&self) -> Option<&PairWitness> {
        match self {
            PairVerdict::Matched { witness, .. } => Some(witness),
            _ => None,
        }
    }
}

/// Recognizes pairs whose transform `V_g f` has support of measure 1: the
/// support must be `z0 + G_g`, and `f = c·π(z0) g` with `g` an optimizer.
pub fn classify_pair(f: &Window, g: &Window, tol: f64) -> Result<PairVerdict> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroWindow);
    }
    let v = stft(f, g)?;
    let s = support(&v, tol);
    let measure = s.measure();
    let reject = |failed| Ok(PairVerdict::NotMatched {
        support_measure: measure,
        failed,
    });
    if measure != Rational::from(1) {
        return reject(FailedCriterion::MeasureNotOne);
    }
    let space = v.space().clone();
    let pg = space.group().clone();
    let z0 = s.points()[0];
    let shifted: Vec<usize> = s.points().iter().map(|&z| pg.sub_idx(z, z0)).collect();
    let Some(sub) = SubgroupHandle::from_members(&pg, &shifted) else {
        return reject(FailedCriterion::NotACoset);
    };
    if !triple_from_subgroup(&space, &sub)?.is_maximal() {
        return reject(FailedCriterion::NotACoset);
    }
    let Verdict::Optimizer { witness: gw, .. } = classify_optimizer(g, tol)? else {
        return reject(FailedCriterion::NotMaximalIsotropic);
    };
    if gw.triple.subgroup() != sub {
        return reject(FailedCriterion::NotACoset);
    }

    let (x0, xi0) = space.split_idx(z0);
    let pg_shift = shift_idx(g, x0, xi0);
    let c = f.inner(&pg_shift)? / g.norm_sq();
    let a = f.group();
    // π(z0)·c2·T_{x2} ĥ = c2·π(z0 + (x2, 0)) ĥ
    let x2 = a.index(&gw.x0);
    let z1 = space.point_idx(a.add_idx(x0, x2), xi0);
    let z2 = space.point_idx(x2, 0);
    let hn = gw.h.normalized_window();
    let c1 = c * gw.c;
    let (x1, xi1) = space.split_idx(z1);
    let r1 = f.distance(&shift_idx(&hn, x1, xi1).scale(c1))?;
    let r2 = g.distance(&shift_idx(&hn, x2, 0).scale(gw.c))?;
    Ok(PairVerdict::Matched {
        support_measure: measure,
        witness: Box::new(PairWitness {
            c1,
            c2: gw.c,
            z1: pg.element_at(z1),
            z2: pg.element_at(z2),
            h: gw.h.clone(),
            z0: pg.element_at(z0),
            subgroup: sub,
            residual: r1.max(r2),
        }),
    })
}

#[derive(Clone, Debug)]
pub enum EigenOutcome {
    /// Every `π(γ) f` is an eigenvector of every `π(z)`, `z ∈ S`.
    Basis {
        basis: LocalizedBasis,
        /// Eigenvalue of `π(z)` on `f`, per point of `S`.
        eigenvalues: Vec<(GroupElement, Complex64)>,
        residual: f64,
    },
    /// `π(z)` and `π(w)` do not commute: `σ(z, w) ≠ 0`.
    NonCommuting {
        z: GroupElement,
        w: GroupElement,
        sigma: UnitPhase,
    },
}

/// An orthonormal basis of common eigenfunctions of `{π(z) : z ∈ S}`, or a
/// non-commuting pair from `S`.
pub fn common_eigenfunction_basis(space: &PhaseSpace, s: &[GroupElement]) -> Result<EigenOutcome> {
    let pg = space.group();
    let idx: Vec<usize> = s
        .iter()
        .map(|z| pg.check(z).map(|_| pg.index(z)))
        .collect::<Result<_>>()?;
    for (i, &z) in idx.iter().enumerate() {
        for &w in &idx[i + 1..] {
            let k = space.sigma_num_idx(z, w);
            if k != 0 {
                return Ok(EigenOutcome::NonCommuting {
                    z: pg.element_at(z),
                    w: pg.element_at(w),
                    sigma: UnitPhase::new(k as i64, space.base().exponent()),
                });
            }
        }
    }
    let gen = SubgroupHandle::generated(pg, s)?;
    let g = saturate(space, &gen)?;
    let t = triple_from_subgroup(space, &g)?;
    let basis = build_max_localized_basis(&t)?;

    let f = &basis.window;
    let mut eigenvalues = Vec::with_capacity(idx.len());
    let mut residual: f64 = 0.0;
    for &z in &idx {
        let (x, xi) = space.split_idx(z);
        let moved = shift_idx(f, x, xi);
        let lambda = moved.inner(f)?;
        residual = residual.max((lambda.norm() - 1.0).abs());
        eigenvalues.push((pg.element_at(z), lambda));
        for &gamma in &basis.lattice {
            let (gx, gxi) = space.split_idx(gamma);
            let v = shift_idx(f, gx, gxi);
            let pv = shift_idx(&v, x, xi);
            let mu = pv.inner(&v)?;
            residual = residual.max(pv.distance(&v.scale(mu))?);
        }
    }
    Ok(EigenOutcome::Basis {
        basis,
        eigenvalues,
        residual,
    })
}
