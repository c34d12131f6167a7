//! Exact sums of roots of unity.
//!
//! A value of order `D` is a rational combination of powers of
//! `ζ = exp(2πi/D)`, reduced modulo the cyclotomic polynomial `Φ_D`. The
//! reduced coefficient vector (length `φ(D)`) is canonical, so equality and
//! vanishing are decided exactly.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::{unit_complex, Rational, UnitPhase};

fn cache() -> &'static Mutex<HashMap<u64, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients of `Φ_n`, lowest degree first.
pub fn cyclotomic_polynomial(n: u64) -> Arc<Vec<i64>> {
    assert!(n >= 1);
    if let Some(p) = cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let q = cyclotomic_polynomial(d);
            p = divide_exact(&p, &q);
        }
    }
    let p = Arc::new(p);
    cache().lock().unwrap().insert(n, p.clone());
    p
}

fn divide_exact(p: &[i64], q: &[i64]) -> Vec<i64> {
    let dq = q.len() - 1;
    let mut rem = p.to_vec();
    let mut out = vec![0i64; p.len() - dq];
    for i in (0..out.len()).rev() {
        let c = rem[i + dq];
        out[i] = c;
        for (j, &qj) in q.iter().enumerate() {
            rem[i + j] -= c * qj;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    out
}

fn reduce<T>(v: &mut Vec<T>, phi: &[i64])
where
    T: Copy + Zero + std::ops::SubAssign + std::ops::Mul<Output = T> + From<i64>,
{
    let d = phi.len() - 1;
    if v.len() < d {
        v.resize(d, T::zero());
        return;
    }
    for i in (d..v.len()).rev() {
        let c = v[i];
        if c.is_zero() {
            continue;
        }
        for (j, &pj) in phi.iter().enumerate() {
            if pj != 0 {
                v[i - d + j] -= c * T::from(pj);
            }
        }
    }
    v.truncate(d);
}

#[derive(Clone, Debug)]
pub struct CyclotomicValue {
    order: u64,
    coeffs: Vec<Rational>,
}

impl CyclotomicValue {
    pub fn zero(order: u64) -> Self {
        let d = cyclotomic_polynomial(order).len() - 1;
        CyclotomicValue {
            order,
            coeffs: vec![Rational::zero(); d],
        }
    }

    /// `scale · Σ_k counts[k]·ζ^k`, with `counts.len() == order`.
    pub fn from_exponent_counts(order: u64, counts: &[i64], scale: Rational) -> Self {
        assert_eq!(counts.len() as u64, order);
        let phi = cyclotomic_polynomial(order);
        let mut v = counts.to_vec();
        reduce(&mut v, &phi);
        CyclotomicValue {
            order,
            coeffs: v.into_iter().map(|c| scale * Rational::from(c)).collect(),
        }
    }

    /// `Σ_k weights[k]·ζ^k`, with `weights.len() == order`.
    pub fn from_exponent_weights(order: u64, mut weights: Vec<Rational>) -> Self {
        assert_eq!(weights.len() as u64, order);
        reduce(&mut weights, &cyclotomic_polynomial(order));
        CyclotomicValue {
            order,
            coeffs: weights,
        }
    }

    /// `scale · exp(2πi·phase)` written at `order`, which must be a multiple
    /// of the phase denominator.
    pub fn monomial(order: u64, phase: UnitPhase, scale: Rational) -> Self {
        let mut counts = vec![0i64; order as usize];
        counts[phase.numerator_over(order) as usize] = 1;
        Self::from_exponent_counts(order, &counts, scale)
    }

    pub fn from_rational(order: u64, r: Rational) -> Self {
        Self::monomial(order, UnitPhase::ZERO, r)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Re-expresses the value over `ζ_order'`, `order'` a multiple of the
    /// current order.
    pub fn embed(&self, order: u64) -> Self {
        assert_eq!(order % self.order, 0, "embedding order must be a multiple");
        if order == self.order {
            return self.clone();
        }
        let f = (order / self.order) as usize;
        let mut v = vec![Rational::zero(); order as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            v[j * f] = *c;
        }
        reduce(&mut v, &cyclotomic_polynomial(order));
        CyclotomicValue { order, coeffs: v }
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        let l = self.order.lcm(&other.order);
        (self.embed(l), other.embed(l))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.common(other);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        CyclotomicValue {
            order: a.order,
            coeffs,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Rational::from(-1)))
    }

    pub fn scale(&self, r: Rational) -> Self {
        CyclotomicValue {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.common(other);
        let n = a.coeffs.len();
        let mut v = vec![Rational::zero(); (2 * n).max(1)];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                v[i + j] += x * y;
            }
        }
        reduce(&mut v, &cyclotomic_polynomial(a.order));
        CyclotomicValue {
            order: a.order,
            coeffs: v,
        }
    }

    /// Complex conjugate (`ζ ↦ ζ^{-1}`).
    pub fn conj(&self) -> Self {
        let d = self.order as usize;
        let mut v = vec![Rational::zero(); d];
        for (j, c) in self.coeffs.iter().enumerate() {
            v[(d - j) % d] += *c;
        }
        reduce(&mut v, &cyclotomic_polynomial(self.order));
        CyclotomicValue {
            order: self.order,
            coeffs: v,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| unit_complex(j as u64, self.order) * c.to_f64().unwrap_or(f64::NAN))
            .sum()
    }
}

impl PartialEq for CyclotomicValue {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.common(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CyclotomicValue {}

#[cfg(test)]
mod tests {
    use super::*;

    fn ph(n: i64, d: u64) -> UnitPhase {
        UnitPhase::new(n, d)
    }

    #[test]
    fn known_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(32).len() - 1, 16);
    }

    #[test]
    fn full_character_sum_vanishes() {
        for d in 2..=24u64 {
            let counts = vec![1i64; d as usize];
            let v = CyclotomicValue::from_exponent_counts(d, &counts, Rational::from(1));
            assert!(v.is_zero(), "sum of all {d}-th roots");
        }
    }

    #[test]
    fn equality_across_orders() {
        let a = CyclotomicValue::monomial(4, ph(1, 2), Rational::from(3));
        let b = CyclotomicValue::from_rational(6, Rational::from(-3));
        assert_eq!(a, b);
        let i4 = CyclotomicValue::monomial(4, ph(1, 4), Rational::from(1));
        let i8 = CyclotomicValue::monomial(8, ph(2, 8), Rational::from(1));
        assert_eq!(i4, i8);
        assert_ne!(i4, i4.conj());
    }

    #[test]
    fn multiplication_matches_phase_addition() {
        for d in [5u64, 8, 12, 18] {
            for a in 0..d {
                for b in 0..d {
                    let x = CyclotomicValue::monomial(d, ph(a as i64, d), Rational::from(1));
                    let y = CyclotomicValue::monomial(d, ph(b as i64, d), Rational::from(2));
                    let z = CyclotomicValue::monomial(d, ph((a + b) as i64, d), Rational::from(2));
                    assert_eq!(x.mul(&y), z);
                    let c = x.mul(&x.conj());
                    assert_eq!(c, CyclotomicValue::from_rational(d, Rational::from(1)));
                }
            }
        }
    }

    #[test]
    fn complex_value() {
        let v = CyclotomicValue::from_exponent_counts(6, &[1, 1, 0, 0, 0, 0], Rational::from(1));
        let expect = Complex64::new(1.5, 3f64.sqrt() / 2.0);
        assert!((v.to_complex() - expect).norm() < 1e-14);
    }
}
