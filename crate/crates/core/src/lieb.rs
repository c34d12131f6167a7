//! `L^p` bounds for the short-time Fourier transform on finite groups:
//! `‖V_g f‖_p ≤ ‖f‖‖g‖` for `p ≥ 2` and `≥` for `p ≤ 2`, with equality
//! exactly for matched pairs of subcharacters of second degree.

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde_json::json;

use crate::error::{Error, Result};
use crate::gabor::{classify_pair, PairVerdict};
use crate::group::GroupElement;
use crate::phase::{format_rational, ExactScalar, Rational};
use crate::second_degree::Subcharacter;
use crate::symplectic::IsotropicTriple;
use crate::tf::{lp_integral, lp_norm, shift_idx, stft, support, Window, DEFAULT_TOL};

/// Relative tolerance for the equality flag.
pub const EQUALITY_TOL: f64 = 1e-12;

/// Exponents at which an equality case is re-checked.
pub const PROPAGATION_EXPONENTS: [f64; 4] = [0.5, 1.0, 3.0, 4.0];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// `p ≥ 2`: `‖V_g f‖_p ≤ ‖f‖‖g‖`.
    Upper,
    /// `p < 2`: `‖V_g f‖_p ≥ ‖f‖‖g‖`.
    Lower,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LiebReport {
    pub p: f64,
    pub norm: f64,
    pub bound: f64,
    /// Distance to the bound in the direction of the inequality; negative
    /// means violated.
    pub margin: f64,
    pub regime: Regime,
    pub equality: bool,
}

impl LiebReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "p": self.p,
            "norm": self.norm,
            "bound": self.bound,
            "margin": self.margin,
            "equality": self.equality,
        })
    }
}

pub fn lieb_check(f: &Window, g: &Window, p: f64) -> Result<LiebReport> {
    lieb_check_tol(f, g, p, EQUALITY_TOL)
}

/// `‖V_g f‖_{L^p(A×Â)}` against `‖f‖·‖g‖`; `equality` when they agree to
/// `tol` relative to the bound.
pub fn lieb_check_tol(f: &Window, g: &Window, p: f64, tol: f64) -> Result<LiebReport> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroWindow);
    }
    let norm = lp_norm(&stft(f, g)?, p)?;
    let bound = f.norm() * g.norm();
    let regime = if p >= 2.0 { Regime::Upper } else { Regime::Lower };
    let margin = match regime {
        Regime::Upper => bound - norm,
        Regime::Lower => norm - bound,
    };
    Ok(LiebReport {
        p,
        norm,
        bound,
        margin,
        regime,
        equality: margin.abs() <= tol * bound,
    })
}

#[derive(Clone, Debug)]
pub struct EqualityDiagnosis {
    pub equality: bool,
    pub report: LiebReport,
    pub pair: PairVerdict,
    /// Reports at [`PROPAGATION_EXPONENTS`] (only for equality cases).
    pub propagated: Vec<LiebReport>,
}

/// Equality at `p ≠ 2` holds iff `(f, g)` is a matched pair; in that case the
/// equality is confirmed at every exponent of [`PROPAGATION_EXPONENTS`].
pub fn equality_diagnose(f: &Window, g: &Window, p: f64, tol: f64) -> Result<EqualityDiagnosis> {
    if p == 2.0 {
        return Err(Error::InvalidParameter(
            "p = 2 is always an equality case".into(),
        ));
    }
    let report = lieb_check_tol(f, g, p, tol)?;
    let pair = classify_pair(f, g, DEFAULT_TOL)?;
    let mut propagated = Vec::new();
    let mut equality = pair.is_matched();
    if equality {
        for q in PROPAGATION_EXPONENTS {
            let r = lieb_check_tol(f, g, q, tol)?;
            equality &= r.equality;
            propagated.push(r);
        }
        equality &= report.equality;
    }
    Ok(EqualityDiagnosis {
        equality,
        report,
        pair,
        propagated,
    })
}

#[derive(Clone, Debug)]
pub struct Bridge {
    /// `(p, ∫|V_g f|^p)` for unit-normalized windows.
    pub rows: Vec<(f64, f64)>,
    pub monotone: bool,
    /// Linear extrapolation to `p = 0` through the last two rows.
    pub extrapolated: f64,
    /// The limit: the measure of the support of `V_g f`.
    pub limit: Rational,
    /// `|V_g f|` takes only the values `0` and `‖f‖‖g‖`.
    pub indicator: bool,
    /// For indicator cases, every row equals the limit (to `1e-12`).
    pub identity_holds: bool,
}

impl Bridge {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "rows": self.rows.iter().map(|(p, v)| json!({"p": p, "integral": v})).collect::<Vec<_>>(),
            "monotone": self.monotone,
            "extrapolated": self.extrapolated,
            "limit": format_rational(&self.limit),
            "indicator": self.indicator,
        })
    }
}

/// `∫ |V_g f|^p` along a decreasing grid of exponents, with unit-norm
/// windows, approaching the support measure as `p → 0`.
pub fn p_to_zero_bridge(f: &Window, g: &Window, p_grid: &[f64]) -> Result<Bridge> {
    if p_grid.is_empty() {
        return Err(Error::InvalidParameter("empty exponent grid".into()));
    }
    if p_grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidParameter("exponent grid must be decreasing".into()));
    }
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroWindow);
    }
    let v = stft(f, g)?;
    let s = support(&v, DEFAULT_TOL);
    let limit = s.measure();

    let indicator = match (v.exact_values(), f.norm_sq_exact(), g.norm_sq_exact()) {
        (Some(ex), Some(nf), Some(ng)) => {
            let full = nf * ng;
            ex.iter().all(|x| {
                let m = x.mul(&x.conj());
                m.is_zero() || m == crate::phase::CyclotomicValue::from_rational(m.order(), full)
            })
        }
        _ => {
            let b = v.scale();
            v.values()
                .iter()
                .all(|x| x.norm() <= DEFAULT_TOL * b || (x.norm() - b).abs() <= 1e-12 * b)
        }
    };

    let fu = f.normalized()?;
    let gu = g.normalized()?;
    let vu = stft(&fu, &gu)?;
    let mut rows = Vec::with_capacity(p_grid.len());
    for &p in p_grid {
        rows.push((p, lp_integral(&vu, p)?));
    }
    let monotone = rows.windows(2).all(|w| w[1].1 >= w[0].1 - 1e-12);
    let extrapolated = match rows.len() {
        1 => rows[0].1,
        n => {
            let (p1, v1) = rows[n - 2];
            let (p2, v2) = rows[n - 1];
            v2 - p2 * (v1 - v2) / (p1 - p2)
        }
    };
    let lim = limit.to_f64().unwrap();
    let identity_holds = indicator && rows.iter().all(|(_, v)| (v - lim).abs() <= 1e-12 * lim.max(1.0));
    Ok(Bridge {
        rows,
        monotone,
        extrapolated,
        limit,
        indicator,
        identity_holds,
    })
}

fn check_maximal(t: &IsotropicTriple) -> Result<()> {
    if !t.is_maximal() {
        return Err(Error::InvalidParameter("triple is not maximal isotropic".into()));
    }
    Ok(())
}

fn point(t: &IsotropicTriple, z: &GroupElement) -> Result<(usize, usize)> {
    let space = t.space();
    space.group().check(z)?;
    Ok(space.split_idx(space.group().index(z)))
}

/// `(c1·π(z1) ĥ, c2·π(z2) ĥ)` with `ĥ` the normalized subcharacter of `t`.
pub fn matched_subcharacter_pair(
    t: &IsotropicTriple,
    c1: Complex64,
    c2: Complex64,
    z1: &GroupElement,
    z2: &GroupElement,
) -> Result<(Window, Window)> {
    check_maximal(t)?;
    if c1 == Complex64::new(0.0, 0.0) || c2 == Complex64::new(0.0, 0.0) {
        return Err(Error::InvalidParameter("scalars must be nonzero".into()));
    }
    let h = Subcharacter::from_triple(t)?.normalized_window();
    let (x1, xi1) = point(t, z1)?;
    let (x2, xi2) = point(t, z2)?;
    Ok((
        shift_idx(&h, x1, xi1).scale(c1),
        shift_idx(&h, x2, xi2).scale(c2),
    ))
}

/// Exact variant of [`matched_subcharacter_pair`] built on the unnormalized
/// subcharacter.
pub fn matched_subcharacter_pair_exact(
    t: &IsotropicTriple,
    c1: &ExactScalar,
    c2: &ExactScalar,
    z1: &GroupElement,
    z2: &GroupElement,
) -> Result<(Window, Window)> {
    check_maximal(t)?;
    if c1.is_zero() || c2.is_zero() {
        return Err(Error::InvalidParameter("scalars must be nonzero".into()));
    }
    let h = Subcharacter::from_triple(t)?.window();
    let (x1, xi1) = point(t, z1)?;
    let (x2, xi2) = point(t, z2)?;
    Ok((
        shift_idx(&h, x1, xi1).scale_exact(c1),
        shift_idx(&h, x2, xi2).scale_exact(c2),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use crate::symplectic::{enumerate_maximal_isotropic, PhaseSpace};
    use crate::tf::random_unit_window;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn half_pair(n: u64) -> Window {
        let a = GroupSpec::cyclic(n);
        Window::indicator(&a, &[a.element(&[0]), a.element(&[1])])
            .unwrap()
            .normalized()
            .unwrap()
    }

    #[test]
    fn examples() {
        let a = GroupSpec::cyclic(4);
        let d = Window::delta(&a, &a.zero()).unwrap();
        let r = lieb_check(&d, &d, 4.0).unwrap();
        assert!(r.equality && (r.norm - 1.0).abs() < 1e-15);

        let f = half_pair(4);
        let r = lieb_check(&f, &f, 1.0).unwrap();
        assert!(r.norm > 1.0 && r.margin > 0.0 && !r.equality);
        let r = lieb_check(&f, &f, 2.0).unwrap();
        assert!(r.equality);
        assert!(lieb_check(&f, &f, 0.0).is_err());
        assert!(matches!(lieb_check(&Window::zero(&a), &f, 3.0), Err(Error::ZeroWindow)));
    }

    #[test]
    fn random_pairs_respect_direction() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for a in [GroupSpec::cyclic(5), "Z2xZ2".parse().unwrap()] {
            for _ in 0..20 {
                let f = random_unit_window(&a, &mut rng);
                let g = random_unit_window(&a, &mut rng);
                for p in [0.5, 1.0, 1.5, 3.0, 4.0] {
                    assert!(lieb_check(&f, &g, p).unwrap().margin >= -1e-12);
                }
                assert!(!equality_diagnose(&f, &g, 4.0, EQUALITY_TOL).unwrap().equality);
            }
        }
    }

    #[test]
    fn matched_pairs_are_equality_cases() {
        let a = GroupSpec::cyclic(6);
        let space = PhaseSpace::new(&a);
        for (k, t) in enumerate_maximal_isotropic(&a).unwrap().iter().enumerate() {
            let z1 = space.group().element_at((7 * k) % 36);
            let z2 = space.group().element_at((11 * k + 3) % 36);
            let (f, g) = matched_subcharacter_pair(
                t,
                Complex64::from_polar(1.0, 0.4),
                Complex64::from_polar(1.0, -1.1),
                &z1,
                &z2,
            )
            .unwrap();
            let d = equality_diagnose(&f, &g, 3.0, EQUALITY_TOL).unwrap();
            assert!(d.equality, "{k} {:?} {:?} {:?}", d.report, d.pair.support_measure(), d.propagated);
            assert_eq!(d.propagated.len(), 4);
        }
    }

    #[test]
    fn not_equality_for_half_pair() {
        let f = half_pair(4);
        let d = equality_diagnose(&f, &f, 4.0, EQUALITY_TOL).unwrap();
        assert!(!d.equality);
        assert!(d.report.margin > 0.0);
    }

    #[test]
    fn bridge() {
        let grid = [1.0, 0.5, 0.25, 0.125, 0.0625];
        let a = GroupSpec::cyclic(4);
        let raw = Window::indicator(&a, &[a.element(&[0]), a.element(&[1])]).unwrap();
        let b = p_to_zero_bridge(&raw, &raw, &grid).unwrap();
        assert_eq!(b.limit, Rational::new(11, 4));
        assert!(b.monotone && !b.indicator);
        let last = b.rows.last().unwrap().1;
        assert!((last - 2.75).abs() / 2.75 < 0.1);

        let d = Window::delta(&a, &a.zero()).unwrap();
        let b = p_to_zero_bridge(&d, &d, &grid).unwrap();
        assert!(b.indicator && b.identity_holds);
        assert_eq!(b.limit, Rational::from(1));
        assert!(b.rows.iter().all(|r| (r.1 - 1.0).abs() < 1e-12));
        assert!(p_to_zero_bridge(&d, &d, &[0.5, 1.0]).is_err());
    }
}
