//! Finite abelian groups `Z_{n_1} × … × Z_{n_k}`, their duals, subgroups
//! and homomorphisms.
//!
//! The dual group uses the same coordinate tuples as the group itself; the
//! pairing is `⟨x, ξ⟩ = exp(2πi Σ x_i ξ_i / n_i)`. Haar measure is the
//! counting measure on `A` and counting/|A| on the dual, so that
//! `|H|·|H⊥| = 1` for every subgroup `H`.
//!
//! Elements are addressed by their mixed-radix index, first coordinate most
//! significant, which makes index order the lexicographic order.

mod bits;
mod hom;
mod smith;
mod subgroup;

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase::{Rational, UnitPhase};

pub(crate) use bits::Bits;
pub use hom::{enumerate_symmetric_homs, Homomorphism};
pub use smith::smith_canonicalize;
pub use subgroup::{
    annihilator, enumerate_subgroups, enumerate_subgroups_bounded, transversal, SubgroupHandle,
    DEFAULT_ENUMERATION_BOUND,
};

/// Coordinates of a group element, `coords[i] ∈ [0, n_i)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement(pub Vec<u64>);

impl GroupElement {
    pub fn coords(&self) -> &[u64] {
        &self.0
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Largest order for which the addition table is precomputed.
const TABLE_LIMIT: usize = 512;

struct Inner {
    orders: Vec<u64>,
    strides: Vec<usize>,
    order: usize,
    exponent: u64,
    add: OnceLock<Vec<u32>>,
    neg: OnceLock<Vec<u32>>,
}

/// A finite abelian group given by its cyclic factors, in the order given.
#[derive(Clone)]
pub struct GroupSpec {
    inner: Arc<Inner>,
}

impl GroupSpec {
    pub fn new(orders: Vec<u64>) -> Result<Self> {
        if orders.is_empty() || orders.iter().any(|&n| n == 0) {
            return Err(Error::GroupParse(format!("{orders:?}")));
        }
        let mut strides = vec![1usize; orders.len()];
        for i in (0..orders.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * orders[i + 1] as usize;
        }
        let order = orders.iter().map(|&n| n as usize).product();
        let exponent = orders.iter().fold(1u64, |acc, &n| acc.lcm(&n));
        Ok(GroupSpec {
            inner: Arc::new(Inner {
                orders,
                strides,
                order,
                exponent,
                add: OnceLock::new(),
                neg: OnceLock::new(),
            }),
        })
    }

    pub fn cyclic(n: u64) -> Self {
        GroupSpec::new(vec![n]).expect("positive order")
    }

    pub fn cyclic_orders(&self) -> &[u64] {
        &self.inner.orders
    }

    pub fn order(&self) -> usize {
        self.inner.order
    }

    /// lcm of the cyclic orders; every pairing phase has this denominator.
    pub fn exponent(&self) -> u64 {
        self.inner.exponent
    }

    pub fn rank(&self) -> usize {
        self.inner.orders.len()
    }

    /// Haar weight of a point of `A` (counting measure).
    pub fn haar_weight_primal(&self) -> Rational {
        Rational::from_integer(1)
    }

    /// Haar weight of a point of the dual group.
    pub fn haar_weight_dual(&self) -> Rational {
        Rational::new(1, self.order() as i64)
    }

    /// `A × B` with the factors of `self` first.
    pub fn product(&self, other: &GroupSpec) -> GroupSpec {
        let mut o = self.inner.orders.clone();
        o.extend_from_slice(&other.inner.orders);
        GroupSpec::new(o).expect("valid factors")
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![0; self.rank()])
    }

    pub fn element(&self, coords: &[i64]) -> GroupElement {
        assert_eq!(coords.len(), self.rank(), "coordinate count");
        GroupElement(
            coords
                .iter()
                .zip(&self.inner.orders)
                .map(|(&c, &n)| c.rem_euclid(n as i64) as u64)
                .collect(),
        )
    }

    pub fn contains(&self, e: &GroupElement) -> bool {
        e.0.len() == self.rank() && e.0.iter().zip(&self.inner.orders).all(|(c, n)| c < n)
    }

    pub fn check(&self, e: &GroupElement) -> Result<()> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(Error::InvalidElement(e.0.clone()))
        }
    }

    pub fn index(&self, e: &GroupElement) -> usize {
        debug_assert!(self.contains(e), "{e} not in {self}");
        e.0.iter()
            .zip(&self.inner.strides)
            .map(|(&c, &s)| c as usize * s)
            .sum()
    }

    pub fn element_at(&self, idx: usize) -> GroupElement {
        GroupElement(self.coords_of(idx))
    }

    fn coords_of(&self, idx: usize) -> Vec<u64> {
        self.inner
            .strides
            .iter()
            .zip(&self.inner.orders)
            .map(|(&s, &n)| ((idx / s) % n as usize) as u64)
            .collect()
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order()).map(|i| self.element_at(i))
    }

    fn add_table(&self) -> Option<&[u32]> {
        let n = self.order();
        if n > TABLE_LIMIT {
            return None;
        }
        Some(self.inner.add.get_or_init(|| {
            let mut t = vec![0u32; n * n];
            for a in 0..n {
                for b in 0..n {
                    t[a * n + b] = self.add_slow(a, b) as u32;
                }
            }
            t
        }))
    }

    fn add_slow(&self, a: usize, b: usize) -> usize {
        let mut idx = 0;
        for ((&s, &n), _) in self.inner.strides.iter().zip(&self.inner.orders).zip(0..) {
            let n = n as usize;
            let ca = (a / s) % n;
            let cb = (b / s) % n;
            idx += ((ca + cb) % n) * s;
        }
        idx
    }

    #[inline]
    pub fn add_idx(&self, a: usize, b: usize) -> usize {
        match self.add_table() {
            Some(t) => t[a * self.order() + b] as usize,
            None => self.add_slow(a, b),
        }
    }

    #[inline]
    pub fn neg_idx(&self, a: usize) -> usize {
        let n = self.order();
        if n <= TABLE_LIMIT * 8 {
            let t = self.inner.neg.get_or_init(|| {
                (0..n).map(|i| self.neg_slow(i) as u32).collect()
            });
            t[a] as usize
        } else {
            self.neg_slow(a)
        }
    }

    fn neg_slow(&self, a: usize) -> usize {
        let mut idx = 0;
        for (&s, &n) in self.inner.strides.iter().zip(&self.inner.orders) {
            let n = n as usize;
            let c = (a / s) % n;
            idx += ((n - c) % n) * s;
        }
        idx
    }

    #[inline]
    pub fn sub_idx(&self, a: usize, b: usize) -> usize {
        self.add_idx(a, self.neg_idx(b))
    }

    pub fn mul_idx(&self, k: i64, a: usize) -> usize {
        let mut idx = 0;
        for (&s, &n) in self.inner.strides.iter().zip(&self.inner.orders) {
            let c = ((a / s) % n as usize) as i64;
            idx += ((c * k).rem_euclid(n as i64)) as usize * s;
        }
        idx
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.inner.orders)
                .map(|((x, y), n)| (x + y) % n)
                .collect(),
        )
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&self.inner.orders)
                .map(|(x, n)| (n - x) % n)
                .collect(),
        )
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.add(a, &self.neg(b))
    }

    pub fn scalar_mul(&self, k: i64, a: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&self.inner.orders)
                .map(|(&x, &n)| (x as i64 * k).rem_euclid(n as i64) as u64)
                .collect(),
        )
    }

    pub fn element_order(&self, a: &GroupElement) -> u64 {
        a.0.iter()
            .zip(&self.inner.orders)
            .fold(1u64, |acc, (&c, &n)| acc.lcm(&(n / c.gcd(&n))))
    }

    /// Numerator of the pairing phase over [`exponent`](Self::exponent).
    #[inline]
    pub fn pair_num_idx(&self, x: usize, xi: usize) -> u64 {
        let e = self.inner.exponent;
        let mut acc = 0u64;
        for (&s, &n) in self.inner.strides.iter().zip(&self.inner.orders) {
            let a = ((x / s) % n as usize) as u64;
            let b = ((xi / s) % n as usize) as u64;
            acc = (acc + (a * b % n) * (e / n)) % e;
        }
        acc
    }

    pub fn pair_num(&self, x: &GroupElement, xi: &GroupElement) -> u64 {
        let e = self.inner.exponent;
        x.0.iter()
            .zip(&xi.0)
            .zip(&self.inner.orders)
            .fold(0u64, |acc, ((&a, &b), &n)| (acc + (a * b % n) * (e / n)) % e)
    }

    pub fn pairing_phase(&self, x: &GroupElement, xi: &GroupElement) -> UnitPhase {
        UnitPhase::new(self.pair_num(x, xi) as i64, self.exponent())
    }
}

/// `⟨x, ξ⟩` as an exact phase.
pub fn pairing(group: &GroupSpec, x: &GroupElement, xi: &GroupElement) -> Result<UnitPhase> {
    group.check(x)?;
    group.check(xi)?;
    Ok(group.pairing_phase(x, xi))
}

pub(crate) fn ensure_same(a: &GroupSpec, b: &GroupSpec) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::GroupMismatch {
            left: a.to_string(),
            right: b.to_string(),
        })
    }
}

impl PartialEq for GroupSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.orders == other.inner.orders
    }
}

impl Eq for GroupSpec {}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.inner.orders.iter().map(|n| format!("Z{n}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

impl fmt::Debug for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupSpec({self})")
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// Parses `"Z4"`, `"Z2xZ4"`, `"z3xZ3xZ2"`; factors are kept as given.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::GroupParse(s.to_string());
        let mut orders = Vec::new();
        for part in s.trim().split(['x', 'X']) {
            let part = part.trim();
            let digits = part
                .strip_prefix('Z')
                .or_else(|| part.strip_prefix('z'))
                .ok_or_else(bad)?;
            let n: u64 = digits.trim().parse().map_err(|_| bad())?;
            if n == 0 {
                return Err(bad());
            }
            orders.push(n);
        }
        GroupSpec::new(orders).map_err(|_| bad())
    }
}

impl Serialize for GroupSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GroupSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Every abelian group of order at most `max_order`, one per invariant
/// factor decomposition (`d_1 | d_2 | …`).
pub fn all_groups_up_to(max_order: u64) -> Vec<GroupSpec> {
    fn chains(n: u64, min: u64, out: &mut Vec<Vec<u64>>, cur: &mut Vec<u64>) {
        // cur is built largest-last; each new factor must be a multiple of
        // the previous one and divide what remains
        if n == 1 {
            out.push(cur.clone());
            return;
        }
        for d in min..=n {
            if n % d == 0 && d % min == 0 && d > 1 {
                let rest = n / d;
                // remaining factors must each be multiples of d
                if rest == 1 || rest % d == 0 {
                    cur.push(d);
                    chains(rest, d, out, cur);
                    cur.pop();
                }
            }
        }
    }
    let mut groups = vec![GroupSpec::cyclic(1)];
    for n in 2..=max_order {
        let mut out = Vec::new();
        chains(n, 1, &mut out, &mut Vec::new());
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        for o in out {
            groups.push(GroupSpec::new(o).unwrap());
        }
    }
    groups
}
