//! Exact arithmetic on the unit circle.
//!
//! A [`UnitPhase`] is an element of Q/Z standing for the root of unity
//! `exp(2πi·num/den)`. Every pairing, symplectic form value and
//! second-degree character value in this crate is a `UnitPhase`, so the
//! identities between them can be checked with zero tolerance.
//!
//! Sums of roots of unity (short-time Fourier transform values of exact
//! windows) live in [`cyclotomic`].

pub mod cyclotomic;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use cyclotomic::CyclotomicValue;

/// Exact rational number type used for measures and magnitudes.
pub type Rational = Ratio<i64>;

/// An element of Q/Z, kept reduced with `0 <= num < den`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct UnitPhase {
    num: u64,
    den: u64,
}

impl UnitPhase {
    pub const ZERO: UnitPhase = UnitPhase { num: 0, den: 1 };

    /// The phase `num/den mod 1`. `den` must be positive.
    pub fn new(num: i64, den: u64) -> Self {
        assert!(den > 0, "phase denominator must be positive");
        let d = den as i128;
        let n = (num as i128).rem_euclid(d);
        let g = (n as u64).gcd(&den);
        UnitPhase {
            num: n as u64 / g,
            den: den / g,
        }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// Numerator of this phase written over `den`, which must be a
    /// multiple of `self.den()`.
    pub fn numerator_over(&self, den: u64) -> u64 {
        debug_assert_eq!(den % self.den, 0);
        self.num * (den / self.den)
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn to_complex(&self) -> Complex64 {
        unit_complex(self.num, self.den)
    }

    pub fn add(self, other: UnitPhase) -> UnitPhase {
        let l = self.den.lcm(&other.den);
        let n = self.num * (l / self.den) + other.num * (l / other.den);
        UnitPhase::new((n % l) as i64, l)
    }

    pub fn neg(self) -> UnitPhase {
        UnitPhase::new(-(self.num as i64), self.den)
    }

    pub fn sub(self, other: UnitPhase) -> UnitPhase {
        self.add(other.neg())
    }

    pub fn scale(self, k: i64) -> UnitPhase {
        let n = (self.num as i128 * k as i128).rem_euclid(self.den as i128);
        UnitPhase::new(n as i64, self.den)
    }
}

pub fn phase_add(p: UnitPhase, q: UnitPhase) -> UnitPhase {
    p.add(q)
}

pub fn phase_scale(p: UnitPhase, k: i64) -> UnitPhase {
    p.scale(k)
}

pub fn phase_neg(p: UnitPhase) -> UnitPhase {
    p.neg()
}

/// All `n` solutions `q` of `n·q = target` in Q/Z, ascending.
pub fn nth_root_solutions(target: UnitPhase, n: u64) -> Vec<UnitPhase> {
    assert!(n >= 1, "root index must be positive");
    let den = target.den * n;
    (0..n)
        .map(|k| UnitPhase::new((target.num + k * target.den) as i64, den))
        .collect()
}

/// `exp(2πi·num/den)` with the quarter turns rounded exactly.
pub(crate) fn unit_complex(num: u64, den: u64) -> Complex64 {
    let num = num % den;
    if num == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if 4 * num == den {
        return Complex64::new(0.0, 1.0);
    }
    if 2 * num == den {
        return Complex64::new(-1.0, 0.0);
    }
    if 4 * num == 3 * den {
        return Complex64::new(0.0, -1.0);
    }
    let t = std::f64::consts::TAU * num as f64 / den as f64;
    Complex64::new(t.cos(), t.sin())
}

impl Ord for UnitPhase {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for UnitPhase {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Default for UnitPhase {
    fn default() -> Self {
        UnitPhase::ZERO
    }
}

impl fmt::Display for UnitPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Debug for UnitPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UnitPhase({}/{})", self.num, self.den)
    }
}

impl FromStr for UnitPhase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let r = parse_rational(s)?;
        if *r.denom() <= 0 {
            return Err(Error::Malformed(format!("bad phase {s:?}")));
        }
        Ok(UnitPhase::new(*r.numer(), *r.denom() as u64))
    }
}

impl Serialize for UnitPhase {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for UnitPhase {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses `"a/b"` or `"a"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Malformed(format!("bad rational {s:?}"));
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: i64 = n.parse().map_err(|_| bad())?;
    let d: i64 = d.parse().map_err(|_| bad())?;
    if d == 0 {
        return Err(bad());
    }
    Ok(Ratio::new(n, d))
}

pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// A complex number `magnitude·exp(2πi·phase)` with a rational magnitude.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct ExactScalar {
    magnitude: Rational,
    phase: UnitPhase,
}

impl ExactScalar {
    pub fn new(magnitude: Rational, phase: UnitPhase) -> Result<Self> {
        if magnitude.is_negative() {
            return Err(Error::InvalidParameter(
                "magnitude must be nonnegative".into(),
            ));
        }
        if magnitude.is_zero() {
            return Ok(Self::zero());
        }
        Ok(ExactScalar { magnitude, phase })
    }

    pub fn zero() -> Self {
        ExactScalar {
            magnitude: Rational::zero(),
            phase: UnitPhase::ZERO,
        }
    }

    pub fn one() -> Self {
        Self::unit(UnitPhase::ZERO)
    }

    pub fn unit(phase: UnitPhase) -> Self {
        ExactScalar {
            magnitude: Rational::from_integer(1),
            phase,
        }
    }

    pub fn magnitude(&self) -> Rational {
        self.magnitude
    }

    pub fn phase(&self) -> UnitPhase {
        self.phase
    }

    pub fn is_zero(&self) -> bool {
        self.magnitude.is_zero()
    }

    pub fn mul(&self, other: &ExactScalar) -> ExactScalar {
        ExactScalar::new(self.magnitude * other.magnitude, self.phase.add(other.phase))
            .expect("product of nonnegative magnitudes")
    }

    pub fn conj(&self) -> ExactScalar {
        ExactScalar {
            magnitude: self.magnitude,
            phase: self.phase.neg(),
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        to_complex(self)
    }
}

pub fn to_complex(s: &ExactScalar) -> Complex64 {
    let m = s.magnitude.to_f64().unwrap_or(f64::NAN);
    s.phase.to_complex() * m
}

#[derive(Serialize, Deserialize)]
struct ExactScalarRepr {
    mag: String,
    phase: UnitPhase,
}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ExactScalarRepr {
            mag: format_rational(&self.magnitude),
            phase: self.phase,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = ExactScalarRepr::deserialize(d)?;
        let mag = parse_rational(&r.mag).map_err(serde::de::Error::custom)?;
        ExactScalar::new(mag, r.phase).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ph(n: i64, d: u64) -> UnitPhase {
        UnitPhase::new(n, d)
    }

    #[test]
    fn group_operations() {
        assert_eq!(phase_add(ph(1, 3), ph(1, 2)), ph(5, 6));
        assert_eq!(phase_scale(ph(1, 4), 2), ph(1, 2));
        assert_eq!(phase_neg(UnitPhase::ZERO), UnitPhase::ZERO);
        assert_eq!(ph(-1, 4), ph(3, 4));
        assert_eq!(ph(6, 8), ph(3, 4));
        assert_eq!(ph(7, 7), UnitPhase::ZERO);
    }

    #[test]
    fn roots() {
        assert_eq!(nth_root_solutions(UnitPhase::ZERO, 2), vec![ph(0, 1), ph(1, 2)]);
        assert_eq!(nth_root_solutions(ph(1, 2), 2), vec![ph(1, 4), ph(3, 4)]);
        assert_eq!(
            nth_root_solutions(ph(1, 3), 3),
            vec![ph(1, 9), ph(4, 9), ph(7, 9)]
        );
    }

    #[test]
    fn complex_bridge() {
        let half = ExactScalar::unit(ph(1, 2));
        assert_eq!(half.to_complex(), Complex64::new(-1.0, 0.0));
        let three_q = ExactScalar::unit(ph(3, 4));
        assert_eq!(three_q.to_complex(), Complex64::new(0.0, -1.0));
        let z = ExactScalar::new(Rational::zero(), ph(1, 3)).unwrap();
        assert_eq!(z.to_complex(), Complex64::new(0.0, 0.0));
        assert_eq!(z.phase(), UnitPhase::ZERO);
    }

    #[test]
    fn exhaustive_abelian_group_small_denominators() {
        let mut all = Vec::new();
        for d in 1..=24u64 {
            for n in 0..d {
                all.push(ph(n as i64, d));
            }
        }
        all.sort();
        all.dedup();
        for &p in all.iter().step_by(3) {
            assert_eq!(p.add(p.neg()), UnitPhase::ZERO);
            assert_eq!(p.add(UnitPhase::ZERO), p);
            for &q in all.iter().step_by(7) {
                assert_eq!(p.add(q), q.add(p));
                for &r in all.iter().step_by(29) {
                    assert_eq!(p.add(q).add(r), p.add(q.add(r)));
                }
            }
        }
    }

    #[test]
    fn serde_strings() {
        let p = ph(5, 6);
        assert_eq!(serde_json::to_string(&p).unwrap(), "\"5/6\"");
        let back: UnitPhase = serde_json::from_str("\"10/12\"").unwrap();
        assert_eq!(back, p);
        let s = ExactScalar::new(Ratio::new(1, 2), ph(1, 4)).unwrap();
        let js = serde_json::to_string(&s).unwrap();
        assert_eq!(js, r#"{"mag":"1/2","phase":"1/4"}"#);
    }
}
