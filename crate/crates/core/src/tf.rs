//! Windows on `A`, time-frequency shifts, and the short-time Fourier
//! transform `V_g f(x, ξ) = Σ_y conj⟨y,ξ⟩ f(y) conj g(y − x)` on `A × Â`.
//!
//! Windows come in two backings. Exact windows store a sparse list of
//! [`ExactScalar`] values; their transforms are computed as exact cyclotomic
//! numbers, so supports and identities are decided with zero tolerance.
//! Dense windows are plain complex vectors.

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{ensure_same, GroupElement, GroupSpec, SubgroupHandle};
use crate::phase::{
    format_rational, parse_rational, CyclotomicValue, ExactScalar, Rational, UnitPhase,
};
use crate::symplectic::PhaseSpace;

/// Default support threshold for dense data, relative to `‖f‖·‖g‖`.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Dense values below this fraction of `‖f‖·‖g‖` are round-off and are
/// dropped from `L^p` sums (they would dominate `|F|^p` for small `p`).
pub const ROUNDOFF_FLOOR: f64 = 1e-13;

#[derive(Clone, Debug)]
enum Backing {
    /// Sorted by element index, no zero entries.
    Exact(Vec<(usize, ExactScalar)>),
    Dense(Vec<Complex64>),
}

/// A complex-valued function on a finite abelian group.
#[derive(Clone, Debug)]
pub struct Window {
    group: GroupSpec,
    backing: Backing,
}

impl Window {
    pub fn dense(group: &GroupSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::InvalidParameter(format!(
                "window on {group} needs {} values, got {}",
                group.order(),
                values.len()
            )));
        }
        Ok(Window {
            group: group.clone(),
            backing: Backing::Dense(values),
        })
    }

    /// Exact window from `(element index, value)` pairs; unlisted points are 0.
    pub fn exact(group: &GroupSpec, mut entries: Vec<(usize, ExactScalar)>) -> Result<Self> {
        entries.retain(|(_, v)| !v.is_zero());
        entries.sort_by_key(|e| e.0);
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidParameter(format!(
                    "point {} listed twice",
                    group.element_at(w[0].0)
                )));
            }
        }
        if let Some((i, _)) = entries.last() {
            if *i >= group.order() {
                return Err(Error::InvalidParameter(format!("index {i} outside {group}")));
            }
        }
        Ok(Window {
            group: group.clone(),
            backing: Backing::Exact(entries),
        })
    }

    pub fn zero(group: &GroupSpec) -> Self {
        Window {
            group: group.clone(),
            backing: Backing::Exact(Vec::new()),
        }
    }

    pub fn delta(group: &GroupSpec, x: &GroupElement) -> Result<Self> {
        group.check(x)?;
        Self::exact(group, vec![(group.index(x), ExactScalar::one())])
    }

    /// Indicator of a set of points, as an exact window.
    pub fn indicator(group: &GroupSpec, points: &[GroupElement]) -> Result<Self> {
        let mut entries = Vec::with_capacity(points.len());
        for p in points {
            group.check(p)?;
            entries.push((group.index(p), ExactScalar::one()));
        }
        Self::exact(group, entries)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.backing, Backing::Exact(_))
    }

    pub fn exact_entries(&self) -> Option<&[(usize, ExactScalar)]> {
        match &self.backing {
            Backing::Exact(e) => Some(e),
            Backing::Dense(_) => None,
        }
    }

    pub fn value_idx(&self, idx: usize) -> Complex64 {
        match &self.backing {
            Backing::Dense(v) => v[idx],
            Backing::Exact(e) => match e.binary_search_by_key(&idx, |p| p.0) {
                Ok(k) => e[k].1.to_complex(),
                Err(_) => Complex64::zero(),
            },
        }
    }

    pub fn value(&self, x: &GroupElement) -> Complex64 {
        self.value_idx(self.group.index(x))
    }

    /// Dense rendering in element-index order.
    pub fn values(&self) -> Vec<Complex64> {
        match &self.backing {
            Backing::Dense(v) => v.clone(),
            Backing::Exact(e) => {
                let mut v = vec![Complex64::zero(); self.group.order()];
                for (i, s) in e {
                    v[*i] = s.to_complex();
                }
                v
            }
        }
    }

    pub fn to_dense(&self) -> Window {
        Window {
            group: self.group.clone(),
            backing: Backing::Dense(self.values()),
        }
    }

    pub fn norm_sq_exact(&self) -> Option<Rational> {
        self.exact_entries().map(|e| {
            e.iter()
                .map(|(_, s)| s.magnitude() * s.magnitude())
                .fold(Rational::zero(), |a, b| a + b)
        })
    }

    pub fn norm_sq(&self) -> f64 {
        match &self.backing {
            Backing::Dense(v) => v.iter().map(|c| c.norm_sqr()).sum(),
            Backing::Exact(_) => self.norm_sq_exact().unwrap().to_f64().unwrap(),
        }
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        match &self.backing {
            Backing::Exact(e) => e.is_empty(),
            Backing::Dense(v) => v.iter().all(|c| c.re == 0.0 && c.im == 0.0),
        }
    }

    /// Element indices where the window is nonzero (exactly nonzero for dense
    /// data as well).
    pub fn support_indices(&self) -> Vec<usize> {
        match &self.backing {
            Backing::Exact(e) => e.iter().map(|p| p.0).collect(),
            Backing::Dense(v) => (0..v.len())
                .filter(|&i| v[i].re != 0.0 || v[i].im != 0.0)
                .collect(),
        }
    }

    /// Unit-norm copy. Stays exact when `‖f‖²` is the square of a rational.
    pub fn normalized(&self) -> Result<Window> {
        if self.is_zero() {
            return Err(Error::ZeroWindow);
        }
        if let Some(r) = self.norm_sq_exact().and_then(|n| rational_sqrt(&n)) {
            let inv = ExactScalar::new(r.recip(), UnitPhase::ZERO)?;
            return Ok(self.scale_exact(&inv));
        }
        Ok(self.scale(Complex64::new(1.0 / self.norm(), 0.0)))
    }

    pub fn scale_exact(&self, c: &ExactScalar) -> Window {
        match &self.backing {
            Backing::Exact(e) => Window::exact(
                &self.group,
                e.iter().map(|(i, s)| (*i, s.mul(c))).collect(),
            )
            .expect("scaling keeps indices valid"),
            Backing::Dense(_) => self.scale(c.to_complex()),
        }
    }

    pub fn scale(&self, c: Complex64) -> Window {
        Window {
            group: self.group.clone(),
            backing: Backing::Dense(self.values().into_iter().map(|v| v * c).collect()),
        }
    }

    pub fn add(&self, other: &Window) -> Result<Window> {
        ensure_same(&self.group, &other.group)?;
        let w = other.values();
        Window::dense(
            &self.group,
            self.values().into_iter().zip(w).map(|(a, b)| a + b).collect(),
        )
    }

    /// `⟨f, g⟩ = Σ f(y) conj g(y)`.
    pub fn inner(&self, other: &Window) -> Result<Complex64> {
        ensure_same(&self.group, &other.group)?;
        let w = other.values();
        Ok(self
            .values()
            .into_iter()
            .zip(w)
            .map(|(a, b)| a * b.conj())
            .sum())
    }

    /// `‖f − g‖`.
    pub fn distance(&self, other: &Window) -> Result<f64> {
        ensure_same(&self.group, &other.group)?;
        let w = other.values();
        Ok(self
            .values()
            .into_iter()
            .zip(w)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// Exact equality for exact windows, else pointwise within `tol`.
    pub fn approx_eq(&self, other: &Window, tol: f64) -> bool {
        if self.group != other.group {
            return false;
        }
        if let (Some(a), Some(b)) = (self.exact_entries(), other.exact_entries()) {
            return a == b;
        }
        let w = other.values();
        self.values()
            .iter()
            .zip(&w)
            .all(|(a, b)| (a - b).norm() <= tol)
    }
}

fn rational_sqrt(r: &Rational) -> Option<Rational> {
    let isqrt = |n: i64| -> Option<i64> {
        if n < 0 {
            return None;
        }
        let s = (n as f64).sqrt().round() as i64;
        (s - 1..=s + 1).find(|&t| t >= 0 && t * t == n)
    };
    Some(Rational::new(isqrt(*r.numer())?, isqrt(*r.denom())?))
}

/// `T_x f(y) = f(y − x)`.
pub fn translate(f: &Window, x: &GroupElement) -> Result<Window> {
    f.group.check(x)?;
    Ok(shift_idx(f, f.group.index(x), 0))
}

/// `M_ξ f(y) = ⟨y, ξ⟩ f(y)`.
pub fn modulate(f: &Window, xi: &GroupElement) -> Result<Window> {
    f.group.check(xi)?;
    Ok(shift_idx(f, 0, f.group.index(xi)))
}

/// `π(x, ξ) f = M_ξ T_x f`, with `z = (x, ξ)` a point of `A × Â`.
pub fn tf_shift(f: &Window, z: &GroupElement) -> Result<Window> {
    let space = PhaseSpace::new(&f.group);
    space.group().check(z)?;
    let (x, xi) = space.split_idx(space.group().index(z));
    Ok(shift_idx(f, x, xi))
}

pub(crate) fn shift_idx(f: &Window, x: usize, xi: usize) -> Window {
    let a = &f.group;
    let e = a.exponent();
    match &f.backing {
        Backing::Exact(entries) => {
            let moved = entries
                .iter()
                .map(|(y, s)| {
                    let t = a.add_idx(*y, x);
                    let ph = UnitPhase::new(a.pair_num_idx(t, xi) as i64, e);
                    (t, s.mul(&ExactScalar::unit(ph)))
                })
                .collect();
            Window::exact(a, moved).expect("shift keeps indices valid")
        }
        Backing::Dense(v) => {
            let mut out = vec![Complex64::zero(); v.len()];
            for (t, o) in out.iter_mut().enumerate() {
                let ph = crate::phase::unit_complex(a.pair_num_idx(t, xi), e);
                *o = ph * v[a.sub_idx(t, x)];
            }
            Window {
                group: a.clone(),
                backing: Backing::Dense(out),
            }
        }
    }
}

/// A function on `A × Â`, indexed as in [`PhaseSpace`], with Haar weight
/// `1/|A|` per point. Exact values are kept alongside when available.
#[derive(Clone, Debug)]
pub struct PhaseSpaceFunction {
    space: PhaseSpace,
    values: Vec<Complex64>,
    exact: Option<Vec<CyclotomicValue>>,
    scale: f64,
}

impl PhaseSpaceFunction {
    /// `scale` is the reference size (`‖f‖·‖g‖` for a transform) that
    /// relative tolerances refer to.
    pub fn from_dense(space: &PhaseSpace, values: Vec<Complex64>, scale: f64) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::InvalidParameter("phase-space array has wrong length".into()));
        }
        Ok(PhaseSpaceFunction {
            space: space.clone(),
            values,
            exact: None,
            scale,
        })
    }

    pub fn from_exact(space: &PhaseSpace, exact: Vec<CyclotomicValue>, scale: f64) -> Result<Self> {
        if exact.len() != space.len() {
            return Err(Error::InvalidParameter("phase-space array has wrong length".into()));
        }
        Ok(PhaseSpaceFunction {
            space: space.clone(),
            values: exact.iter().map(|v| v.to_complex()).collect(),
            exact: Some(exact),
            scale,
        })
    }

    pub fn space(&self) -> &PhaseSpace {
        &self.space
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn exact_values(&self) -> Option<&[CyclotomicValue]> {
        self.exact.as_deref()
    }

    pub fn value_idx(&self, z: usize) -> Complex64 {
        self.values[z]
    }

    pub fn value(&self, z: &GroupElement) -> Complex64 {
        self.values[self.space.group().index(z)]
    }

    pub fn measure_weight(&self) -> Rational {
        self.space.measure_weight()
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Exact pointwise equality; `None` unless both sides carry exact data.
    pub fn exact_eq(&self, other: &PhaseSpaceFunction) -> Option<bool> {
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => Some(self.space == other.space && a == b),
            _ => None,
        }
    }

    pub fn max_abs_diff(&self, other: &PhaseSpaceFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// A set of phase-space points with its Haar measure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportSet {
    space: PhaseSpace,
    points: Vec<usize>,
    measure: Rational,
    degenerate: bool,
}

impl SupportSet {
    pub fn new(space: &PhaseSpace, mut points: Vec<usize>) -> Self {
        points.sort_unstable();
        points.dedup();
        SupportSet {
            space: space.clone(),
            measure: space.measure_of(points.len()),
            degenerate: points.is_empty(),
            points,
        }
    }

    pub fn space(&self) -> &PhaseSpace {
        &self.space
    }

    /// Point indices, ascending.
    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        self.points.iter().map(|&i| self.space.group().element_at(i))
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn measure(&self) -> Rational {
        self.measure
    }

    /// Set when the underlying function vanished identically.
    pub fn degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn contains_idx(&self, z: usize) -> bool {
        self.points.binary_search(&z).is_ok()
    }

    /// The set as a subgroup of `A × Â`, if it is one.
    pub fn as_subgroup(&self) -> Option<SubgroupHandle> {
        SubgroupHandle::from_members(self.space.group(), &self.points)
    }
}

struct Tables {
    exponent: u64,
    // pair numerators over the exponent, row-major [y][ξ]
    pair: Vec<u32>,
    roots: Vec<Complex64>,
}

impl Tables {
    fn new(a: &GroupSpec) -> Self {
        let n = a.order();
        let e = a.exponent();
        let mut pair = Vec::with_capacity(n * n);
        for y in 0..n {
            for xi in 0..n {
                pair.push(a.pair_num_idx(y, xi) as u32);
            }
        }
        let roots = (0..e).map(|k| crate::phase::unit_complex(k, e)).collect();
        Tables {
            exponent: e,
            pair,
            roots,
        }
    }
}

/// `V_g f` on all of `A × Â`.
pub fn stft(f: &Window, g: &Window) -> Result<PhaseSpaceFunction> {
    ensure_same(&f.group, &g.group)?;
    let space = PhaseSpace::new(&f.group);
    let scale = f.norm() * g.norm();
    match (&f.backing, &g.backing) {
        (Backing::Exact(fe), Backing::Exact(ge)) => {
            let exact = stft_exact(&f.group, fe, ge);
            PhaseSpaceFunction::from_exact(&space, exact, scale)
        }
        _ => PhaseSpaceFunction::from_dense(&space, stft_dense(&f.group, f, g), scale),
    }
}

/// `V_f f`.
pub fn ambiguity(f: &Window) -> Result<PhaseSpaceFunction> {
    stft(f, f)
}

fn stft_dense(a: &GroupSpec, f: &Window, g: &Window) -> Vec<Complex64> {
    let n = a.order();
    let t = Tables::new(a);
    let e = t.exponent as usize;
    let fv = f.values();
    let gv = g.values();
    let mut out = vec![Complex64::zero(); n * n];
    let mut prod = vec![Complex64::zero(); n];
    for x in 0..n {
        for (y, p) in prod.iter_mut().enumerate() {
            *p = fv[y] * gv[a.sub_idx(y, x)].conj();
        }
        let live: Vec<usize> = (0..n).filter(|&y| prod[y] != Complex64::zero()).collect();
        for xi in 0..n {
            let mut acc = Complex64::zero();
            for &y in &live {
                let k = t.pair[y * n + xi] as usize;
                acc += t.roots[(e - k) % e] * prod[y];
            }
            out[x * n + xi] = acc;
        }
    }
    out
}

fn exact_order(a: &GroupSpec, fe: &[(usize, ExactScalar)], ge: &[(usize, ExactScalar)]) -> u64 {
    fe.iter()
        .chain(ge)
        .fold(a.exponent(), |d, (_, s)| d.lcm(&s.phase().den()))
}

fn stft_exact(
    a: &GroupSpec,
    fe: &[(usize, ExactScalar)],
    ge: &[(usize, ExactScalar)],
) -> Vec<CyclotomicValue> {
    let n = a.order();
    let d = exact_order(a, fe, ge);
    let step = d / a.exponent();
    let t = Tables::new(a);
    let mut g_at = vec![None; n];
    for (i, s) in ge {
        g_at[*i] = Some(*s);
    }
    let uniform = |e: &[(usize, ExactScalar)]| e.windows(2).all(|w| w[0].1.magnitude() == w[1].1.magnitude());
    let uniform = uniform(fe) && uniform(ge);

    let mut out = Vec::with_capacity(n * n);
    for x in 0..n {
        // (y, exponent over d, weight) for y ∈ supp f ∩ (x + supp g)
        let terms: Vec<(usize, u64, Rational)> = fe
            .iter()
            .filter_map(|(y, sf)| {
                g_at[a.sub_idx(*y, x)].map(|sg| {
                    let k = (sf.phase().numerator_over(d) + d - sg.phase().numerator_over(d)) % d;
                    (*y, k, sf.magnitude() * sg.magnitude())
                })
            })
            .collect();
        for xi in 0..n {
            if terms.is_empty() {
                out.push(CyclotomicValue::zero(d));
                continue;
            }
            let exp_of = |y: usize, k: u64| {
                let p = t.pair[y * n + xi] as u64 * step;
                ((k + d - p) % d) as usize
            };
            if uniform {
                let mut counts = vec![0i64; d as usize];
                for (y, k, _) in &terms {
                    counts[exp_of(*y, *k)] += 1;
                }
                out.push(CyclotomicValue::from_exponent_counts(d, &counts, terms[0].2));
            } else {
                let mut w = vec![Rational::zero(); d as usize];
                for (y, k, m) in &terms {
                    w[exp_of(*y, *k)] += *m;
                }
                out.push(CyclotomicValue::from_exponent_weights(d, w));
            }
        }
    }
    out
}

/// `V_g f` at a single point, exactly when both windows are exact.
pub fn stft_at(f: &Window, g: &Window, z: usize) -> Result<(Complex64, Option<CyclotomicValue>)> {
    ensure_same(&f.group, &g.group)?;
    let a = &f.group;
    let space = PhaseSpace::new(a);
    let (x, xi) = space.split_idx(z);
    if let (Some(fe), Some(ge)) = (f.exact_entries(), g.exact_entries()) {
        let d = exact_order(a, fe, ge);
        let mut w = vec![Rational::zero(); d as usize];
        let step = d / a.exponent();
        for (y, sf) in fe {
            let t = a.sub_idx(*y, x);
            if let Ok(k) = ge.binary_search_by_key(&t, |p| p.0) {
                let sg = ge[k].1;
                let e = sf.phase().numerator_over(d) + 2 * d
                    - sg.phase().numerator_over(d)
                    - a.pair_num_idx(*y, xi) * step;
                w[(e % d) as usize] += sf.magnitude() * sg.magnitude();
            }
        }
        let v = CyclotomicValue::from_exponent_weights(d, w);
        return Ok((v.to_complex(), Some(v)));
    }
    let e = a.exponent();
    let mut acc = Complex64::zero();
    for y in 0..a.order() {
        let fy = f.value_idx(y);
        if fy == Complex64::zero() {
            continue;
        }
        let ph = crate::phase::unit_complex(e - a.pair_num_idx(y, xi), e);
        acc += ph * fy * g.value_idx(a.sub_idx(y, x)).conj();
    }
    Ok((acc, None))
}

/// Points where `F` is nonzero: exactly for exact data, otherwise where
/// `|F| > tol·scale`.
pub fn support(f: &PhaseSpaceFunction, tol: f64) -> SupportSet {
    let points = match &f.exact {
        Some(ex) => (0..ex.len()).filter(|&z| !ex[z].is_zero()).collect(),
        None => {
            if f.scale == 0.0 {
                Vec::new()
            } else {
                let thr = tol * f.scale;
                (0..f.values.len())
                    .filter(|&z| f.values[z].norm() > thr)
                    .collect()
            }
        }
    };
    SupportSet::new(&f.space, points)
}

/// `∫ |F|^p`, the `p`-th power of [`lp_norm`]. Dense values under
/// [`ROUNDOFF_FLOOR`] count as zero.
pub fn lp_integral(f: &PhaseSpaceFunction, p: f64) -> Result<f64> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::InvalidParameter(format!("exponent p = {p} must be positive")));
    }
    let w = f.measure_weight().to_f64().unwrap();
    let floor = if f.exact.is_some() { 0.0 } else { ROUNDOFF_FLOOR * f.scale };
    Ok(f.values
        .iter()
        .map(|v| {
            let m = v.norm();
            if m <= floor {
                0.0
            } else {
                m.powf(p)
            }
        })
        .sum::<f64>()
        * w)
}

/// `‖F‖_{L^p(A×Â)} = (Σ |F(z)|^p / |A|)^{1/p}`.
pub fn lp_norm(f: &PhaseSpaceFunction, p: f64) -> Result<f64> {
    Ok(lp_integral(f, p)?.powf(1.0 / p))
}

/// `{z : |V_f f(z)| = ‖f‖²}`. Dense windows compare within `tol·‖f‖²`.
pub fn max_modulus_set(f: &Window, tol: f64) -> Result<SupportSet> {
    if f.is_zero() {
        return Err(Error::ZeroWindow);
    }
    let v = ambiguity(f)?;
    let points = match (&v.exact, f.norm_sq_exact()) {
        (Some(ex), Some(n2)) => {
            let target = n2 * n2;
            (0..ex.len())
                .filter(|&z| {
                    let m = ex[z].mul(&ex[z].conj());
                    m == CyclotomicValue::from_rational(m.order(), target)
                })
                .collect()
        }
        _ => {
            let n2 = f.norm_sq();
            (0..v.values.len())
                .filter(|&z| (v.values[z].norm() - n2).abs() <= tol * n2)
                .collect()
        }
    };
    Ok(SupportSet::new(&v.space, points))
}

/// Largest deviation between the two sides of the covariance identities
/// `V_g(π(z)f)(w) = ⟨x,ξ⟩conj⟨x,η⟩ V_g f(w − z)` and
/// `V_{π(z)g}(π(z)f)(w) = ⟨y,ξ⟩conj⟨x,η⟩ V_g f(w)`, for `z = (x,ξ)`,
/// `w = (y,η)`. Exact windows give exactly 0 when the identities hold.
pub fn covariance_check(f: &Window, g: &Window, z: &GroupElement, w: &GroupElement) -> Result<f64> {
    ensure_same(&f.group, &g.group)?;
    let a = &f.group;
    let space = PhaseSpace::new(a);
    let pg = space.group();
    pg.check(z)?;
    pg.check(w)?;
    let (zi, wi) = (pg.index(z), pg.index(w));
    let (x, xi) = space.split_idx(zi);
    let (y, eta) = space.split_idx(wi);
    let e = a.exponent();

    let fz = shift_idx(f, x, xi);
    let gz = shift_idx(g, x, xi);
    let lhs1 = stft_at(&fz, g, wi)?;
    let rhs1 = stft_at(f, g, pg.sub_idx(wi, zi))?;
    let ph1 = UnitPhase::new(a.pair_num_idx(x, xi) as i64 - a.pair_num_idx(x, eta) as i64, e);
    let lhs2 = stft_at(&fz, &gz, wi)?;
    let rhs2 = stft_at(f, g, wi)?;
    let ph2 = UnitPhase::new(a.pair_num_idx(y, xi) as i64 - a.pair_num_idx(x, eta) as i64, e);

    let residual = |lhs: (Complex64, Option<CyclotomicValue>),
                    rhs: (Complex64, Option<CyclotomicValue>),
                    ph: UnitPhase| {
        match (lhs.1, rhs.1) {
            (Some(l), Some(r)) => {
                let m = CyclotomicValue::monomial(ph.den(), ph, Rational::from(1));
                let diff = l.sub(&r.mul(&m));
                if diff.is_zero() {
                    0.0
                } else {
                    diff.to_complex().norm()
                }
            }
            _ => (lhs.0 - ph.to_complex() * rhs.0).norm(),
        }
    };
    Ok(residual(lhs1, rhs1, ph1).max(residual(lhs2, rhs2, ph2)))
}

/// A dense window with independent standard complex Gaussian values.
pub fn random_window<R: Rng + ?Sized>(group: &GroupSpec, rng: &mut R) -> Window {
    let values = (0..group.order())
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        })
        .collect();
    Window::dense(group, values).expect("length matches")
}

pub fn random_unit_window<R: Rng + ?Sized>(group: &GroupSpec, rng: &mut R) -> Window {
    loop {
        let w = random_window(group, rng);
        if w.norm() > 0.0 {
            return w.normalized().expect("nonzero");
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PointRepr {
    Index(u64),
    Coords(Vec<i64>),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum WindowRepr {
    Exact {
        group: GroupSpec,
        support: Vec<PointRepr>,
        phases: Vec<UnitPhase>,
        mag: String,
    },
    Dense {
        group: GroupSpec,
        values: Vec<[f64; 2]>,
    },
}

impl Window {
    /// Reads either `{"group", "values": [[re, im], ...]}` or
    /// `{"group", "support", "phases", "mag"}`; support points may be given
    /// as element indices or coordinate arrays.
    pub fn from_json(text: &str) -> Result<Window> {
        let repr: WindowRepr = serde_json::from_str(text)
            .map_err(|e| Error::Malformed(format!("window file: {e}")))?;
        match repr {
            WindowRepr::Dense { group, values } => Window::dense(
                &group,
                values.into_iter().map(|[re, im]| Complex64::new(re, im)).collect(),
            ),
            WindowRepr::Exact {
                group,
                support,
                phases,
                mag,
            } => {
                if support.len() != phases.len() {
                    return Err(Error::Malformed("support and phases differ in length".into()));
                }
                let mag = parse_rational(&mag)?;
                let mut entries = Vec::with_capacity(support.len());
                for (p, ph) in support.into_iter().zip(phases) {
                    let idx = match p {
                        PointRepr::Index(i) if (i as usize) < group.order() => i as usize,
                        PointRepr::Index(i) => {
                            return Err(Error::InvalidElement(vec![i]));
                        }
                        PointRepr::Coords(c) => {
                            if c.len() != group.rank()
                                || c.iter().zip(group.cyclic_orders()).any(|(&v, &n)| v < 0 || v as u64 >= n)
                            {
                                return Err(Error::InvalidElement(
                                    c.iter().map(|&v| v as u64).collect(),
                                ));
                            }
                            group.index(&group.element(&c))
                        }
                    };
                    entries.push((idx, ExactScalar::new(mag, ph)?));
                }
                Window::exact(&group, entries)
            }
        }
    }

    /// JSON form. Exact windows with a common magnitude use the sparse form.
    pub fn to_json(&self) -> serde_json::Value {
        let repr = match &self.backing {
            Backing::Exact(e)
                if !e.is_empty()
                    && e.windows(2).all(|w| w[0].1.magnitude() == w[1].1.magnitude()) =>
            {
                WindowRepr::Exact {
                    group: self.group.clone(),
                    support: e
                        .iter()
                        .map(|(i, _)| {
                            PointRepr::Coords(
                                self.group.element_at(*i).0.iter().map(|&c| c as i64).collect(),
                            )
                        })
                        .collect(),
                    phases: e.iter().map(|(_, s)| s.phase()).collect(),
                    mag: format_rational(&e[0].1.magnitude()),
                }
            }
            _ => WindowRepr::Dense {
                group: self.group.clone(),
                values: self.values().iter().map(|c| [c.re, c.im]).collect(),
            },
        };
        serde_json::to_value(repr).expect("window serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn z(n: u64) -> GroupSpec {
        GroupSpec::cyclic(n)
    }

    fn el(a: &GroupSpec, c: &[i64]) -> GroupElement {
        a.element(c)
    }

    fn half_pair(n: u64) -> Window {
        let a = z(n);
        Window::indicator(&a, &[el(&a, &[0]), el(&a, &[1])]).unwrap()
    }

    #[test]
    fn shifts() {
        let a = z(4);
        let d0 = Window::delta(&a, &a.zero()).unwrap();
        let d1 = translate(&d0, &el(&a, &[1])).unwrap();
        assert!(d1.approx_eq(&Window::delta(&a, &el(&a, &[1])).unwrap(), 0.0));

        let b = z(2);
        let one = Window::indicator(&b, &[el(&b, &[0]), el(&b, &[1])]).unwrap();
        let m = modulate(&one, &el(&b, &[1])).unwrap();
        assert_eq!(m.values(), vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)]);

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = random_window(&z(6), &mut rng);
        let s = PhaseSpace::new(&z(6));
        let id = tf_shift(&f, &s.group().zero()).unwrap();
        assert!(id.approx_eq(&f, 0.0));
        let g = tf_shift(&f, &s.group().element(&[2, 5])).unwrap();
        assert!((g.norm() - f.norm()).abs() < 1e-14);
        let h = tf_shift(&half_pair(6), &s.group().element(&[2, 5])).unwrap();
        assert_eq!(h.norm_sq_exact(), Some(Rational::from(2)));
    }

    #[test]
    fn exact_renders_like_dense() {
        let a = z(6);
        let h = tf_shift(&half_pair(6), &PhaseSpace::new(&a).group().element(&[1, 1])).unwrap();
        let va = ambiguity(&h).unwrap();
        let vd = ambiguity(&h.to_dense()).unwrap();
        assert!(va.max_abs_diff(&vd) < 1e-13);
    }

    #[test]
    fn stft_examples() {
        for n in [2u64, 4, 5] {
            let a = z(n);
            let d0 = Window::delta(&a, &a.zero()).unwrap();
            let v = ambiguity(&d0).unwrap();
            let s = support(&v, 0.0);
            assert_eq!(s.measure(), Rational::from(1));
            assert!(s.points().iter().all(|&p| p < n as usize));

            let all: Vec<_> = a.elements().collect();
            let c = Window::indicator(&a, &all).unwrap();
            let v = ambiguity(&c).unwrap();
            let s = support(&v, 0.0);
            assert_eq!(s.measure(), Rational::from(1));
            assert!(s.points().iter().all(|&p| p % n as usize == 0));
        }
    }

    #[test]
    fn half_pair_support() {
        for n in [4u64, 6, 8, 10] {
            let f = half_pair(n);
            let s = support(&ambiguity(&f).unwrap(), 0.0);
            assert_eq!(s.measure(), Rational::new(3 * n as i64 - 1, n as i64));
            let sp = PhaseSpace::new(&z(n));
            let n = n as usize;
            let mut expect = Vec::new();
            for x in [0, 1, n - 1] {
                for xi in 0..n {
                    if !(x == 0 && xi == n / 2) {
                        expect.push(sp.point_idx(x, xi));
                    }
                }
            }
            expect.sort();
            assert_eq!(s.points(), &expect[..]);
            let sd = support(&ambiguity(&f.to_dense().normalized().unwrap()).unwrap(), DEFAULT_TOL);
            assert_eq!(sd.points(), s.points());
        }
    }

    #[test]
    fn zero_support_is_degenerate() {
        let a = z(3);
        let v = ambiguity(&Window::zero(&a)).unwrap();
        let s = support(&v, 0.0);
        assert!(s.degenerate() && s.is_empty());
        assert_eq!(s.measure(), Rational::from(0));
        let d = Window::dense(&a, vec![Complex64::zero(); 3]).unwrap();
        assert!(support(&ambiguity(&d).unwrap(), DEFAULT_TOL).degenerate());
    }

    #[test]
    fn norms() {
        let a = z(4);
        let v = ambiguity(&Window::delta(&a, &a.zero()).unwrap()).unwrap();
        assert!((lp_norm(&v, 4.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(lp_norm(&v, 0.0).is_err());
        assert!(lp_norm(&v, -1.0).is_err());

        // brute-force |V|^4 sum for the normalized two-point indicator on Z4
        let f = half_pair(4).to_dense().normalized().unwrap();
        let fv = f.values();
        let mut sum = 0.0;
        for x in 0..4usize {
            for xi in 0..4usize {
                let mut acc = Complex64::zero();
                for y in 0..4usize {
                    let ph = Complex64::from_polar(1.0, -std::f64::consts::TAU * (y * xi) as f64 / 4.0);
                    acc += ph * fv[y] * fv[(y + 4 - x) % 4].conj();
                }
                sum += acc.norm().powi(4);
            }
        }
        let brute = (sum / 4.0).powf(0.25);
        let n4 = lp_norm(&ambiguity(&f).unwrap(), 4.0).unwrap();
        assert!((n4 - brute).abs() < 1e-14);
        assert!(n4 < 1.0);
    }

    #[test]
    fn parseval_and_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for a in [z(6), "Z2xZ4".parse().unwrap()] {
            for _ in 0..5 {
                let f = random_unit_window(&a, &mut rng);
                let g = random_window(&a, &mut rng);
                let v = stft(&f, &g).unwrap();
                assert!((lp_norm(&v, 2.0).unwrap() - g.norm()).abs() < 1e-12);
                let amb = ambiguity(&f).unwrap();
                let pg = amb.space().group().clone();
                for zi in 0..pg.order() {
                    let d = amb.value_idx(zi).norm() - amb.value_idx(pg.neg_idx(zi)).norm();
                    assert!(d.abs() < 1e-12);
                    assert!(amb.value_idx(zi).norm() <= 1.0 + 1e-12);
                }
            }
        }
    }

    #[test]
    fn max_modulus_examples() {
        let a = z(5);
        let m = max_modulus_set(&Window::delta(&a, &a.zero()).unwrap(), 0.0).unwrap();
        assert_eq!(m.points(), &[0, 1, 2, 3, 4]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let f = random_window(&z(6), &mut rng);
            assert_eq!(max_modulus_set(&f, DEFAULT_TOL).unwrap().points(), &[0]);
        }
        assert!(matches!(max_modulus_set(&Window::zero(&a), 0.0), Err(Error::ZeroWindow)));
    }

    #[test]
    fn covariance() {
        let a = z(6);
        let s = PhaseSpace::new(&a);
        let h = tf_shift(&half_pair(6), &s.group().element(&[1, 3])).unwrap();
        let g = half_pair(6);
        for zi in [0usize, 7, 20, 35] {
            for wi in [0usize, 5, 13, 29] {
                let zz = s.group().element_at(zi);
                let ww = s.group().element_at(wi);
                assert_eq!(covariance_check(&h, &g, &zz, &ww).unwrap(), 0.0);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let b = z(8);
        let sb = PhaseSpace::new(&b);
        let f = random_window(&b, &mut rng);
        let g = random_window(&b, &mut rng);
        for zi in 0..64 {
            let zz = sb.group().element_at(zi);
            let ww = sb.group().element_at((zi * 37 + 5) % 64);
            assert!(covariance_check(&f, &g, &zz, &ww).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn json_round_trip() {
        let a: GroupSpec = "Z2xZ3".parse().unwrap();
        let s = PhaseSpace::new(&a);
        let h = tf_shift(
            &Window::indicator(&a, &[el(&a, &[0, 0]), el(&a, &[0, 1])]).unwrap(),
            &s.group().element(&[1, 0, 1, 2]),
        )
        .unwrap();
        let text = h.to_json().to_string();
        let back = Window::from_json(&text).unwrap();
        assert!(back.approx_eq(&h, 0.0));

        let d = Window::from_json(r#"{"group":"Z2","values":[[1,0],[0,-1]]}"#).unwrap();
        assert_eq!(d.value_idx(1), Complex64::new(0.0, -1.0));
        let e = Window::from_json(r#"{"group":"Z4","support":[0,[2]],"phases":["0/1","1/4"],"mag":"1/2"}"#)
            .unwrap();
        assert_eq!(e.norm_sq_exact(), Some(Rational::new(1, 2)));
        assert!(Window::from_json(r#"{"group":"Z4","support":[7],"phases":["0"],"mag":"1"}"#).is_err());
    }
}
