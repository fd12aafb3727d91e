//! Exact rationals and negative continued fractions.
//!
//! A chain `[a1, ..., an]` denotes `a1 - 1/(a2 - 1/(... - 1/an))`. Leg chains
//! have every entry `<= -2`, which makes the expansion of any rational `x < -1`
//! unique. Framed chains are the intermediate states of Kirby moves and may
//! hold arbitrary framings.

use std::collections::HashSet;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact rational number, always in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `numer/denom`. Panics if `denom == 0`.
    pub fn new(numer: i64, denom: i64) -> Self {
        Rational(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// `1/self`, or a division error for zero.
    pub fn checked_recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    /// Largest integer not exceeding `self`.
    pub fn floor(&self) -> BigInt {
        self.numer().div_floor(self.denom())
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `"p/q"` or a bare integer `"p"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational: {s:?}"));
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s, "1"),
        };
        let p: BigInt = p.parse().map_err(|_| bad())?;
        let q: BigInt = q.parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        Ok(Rational(BigRational::new(p, q)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $tr<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

/// Evaluates `a1 - 1/(a2 - 1/(... - 1/an))` exactly.
pub fn cf_eval(entries: &[i64]) -> Result<Rational> {
    let (&last, rest) = entries
        .split_last()
        .ok_or_else(|| Error::Domain("empty continued fraction".into()))?;
    let mut value = Rational::from_integer(last);
    for &a in rest.iter().rev() {
        let recip = value
            .checked_recip()
            .ok_or_else(|| Error::DivisionByZero(format!("{entries:?}")))?;
        value = Rational::from_integer(a) - recip;
    }
    Ok(value)
}

/// A leg chain: nonempty, every entry `<= -2`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Chain(Vec<i64>);

impl Chain {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::validation("chain nonempty", "empty chain"));
        }
        if let Some((j, &a)) = entries.iter().enumerate().find(|(_, &a)| a > -2) {
            return Err(Error::validation(
                "chain entries <= -2",
                format!("entry {} is {a}", j + 1),
            ));
        }
        Ok(Chain(entries))
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The first `m` entries, `1 <= m <= len`.
    pub fn prefix(&self, m: usize) -> Chain {
        assert!(m >= 1 && m <= self.len(), "prefix length {m} out of range");
        Chain(self.0[..m].to_vec())
    }

    pub fn reversed(&self) -> Chain {
        Chain(self.0.iter().rev().copied().collect())
    }

    /// The continued-fraction value; always `< -1`.
    pub fn value(&self) -> Rational {
        cf_eval(&self.0).expect("entries <= -2 never hit a zero denominator")
    }

    /// `s = -1/value`, which lies in `(0, 1)`.
    pub fn s(&self) -> Rational {
        -self.value().checked_recip().expect("chain value is never zero")
    }
}

impl fmt::Debug for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl<'de> Deserialize<'de> for Chain {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<i64>::deserialize(deserializer)?;
        Chain::new(v).map_err(serde::de::Error::custom)
    }
}

/// Any chain of framed unknots, as met during blow-ups and blow-downs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FramedChain(pub Vec<i64>);

impl FramedChain {
    pub fn value(&self) -> Result<Rational> {
        cf_eval(&self.0)
    }

    /// `[reverse(a), -1, b]`, the chain obtained from a two-leg sublink after one
    /// blow-up and inverse slam-dunks.
    pub fn joined(a: &Chain, b: &Chain) -> FramedChain {
        let mut v: Vec<i64> = a.entries().iter().rev().copied().collect();
        v.push(-1);
        v.extend_from_slice(b.entries());
        FramedChain(v)
    }
}

impl From<&Chain> for FramedChain {
    fn from(c: &Chain) -> Self {
        FramedChain(c.entries().to_vec())
    }
}

/// Unique expansion of `x < -1` with all entries `<= -2`.
pub fn cf_expand(x: &Rational) -> Result<Chain> {
    if *x >= Rational::from_integer(-1) {
        return Err(Error::Domain(format!("cf_expand needs x < -1, got {x}")));
    }
    let mut x = x.clone();
    let mut entries = Vec::new();
    loop {
        let a = x.floor();
        let a_i64: i64 = a
            .try_into()
            .map_err(|_| Error::Domain(format!("entry of {x} overflows i64")))?;
        let a = Rational::from_integer(a_i64);
        entries.push(a_i64);
        if a == x {
            break;
        }
        // a < x < a + 1, so a - x lies in (-1, 0) and the tail is < -1.
        x = (a - x).checked_recip().expect("a != x");
    }
    Chain::new(entries)
}

/// `s_m = -1/cf_eval([a1..am])` for `m = 1..=n`, strictly increasing.
pub fn truncation_values(c: &Chain) -> Vec<Rational> {
    (1..=c.len()).map(|m| c.prefix(m).s()).collect()
}

/// The chain whose `s` is `1 - s(c)`.
pub fn dual_chain(c: &Chain) -> Result<Chain> {
    let s = c.s();
    if s <= Rational::zero() || s >= Rational::one() {
        return Err(Error::Domain(format!("s = {s} is not in (0,1)")));
    }
    let complement = Rational::one() - s;
    cf_expand(&-complement.checked_recip().expect("1 - s > 0"))
}

/// Blows down one `±1` entry at position `i`.
fn blow_down_at(entries: &[i64], i: usize) -> Vec<i64> {
    let shift = if entries[i] == -1 { 1 } else { -1 };
    let mut out = Vec::with_capacity(entries.len() - 1);
    for (j, &a) in entries.iter().enumerate() {
        if j == i {
            continue;
        }
        let adjacent = j + 1 == i || j == i + 1;
        out.push(if adjacent { a + shift } else { a });
    }
    out
}

/// Whether some sequence of `±1` blow-downs reduces `f` to the single
/// 0-framed unknot `[0]`.
pub fn blowdown_to_zero(f: &FramedChain) -> bool {
    fn search(entries: Vec<i64>, dead: &mut HashSet<Vec<i64>>) -> bool {
        if entries == [0] {
            return true;
        }
        if entries.len() <= 1 || dead.contains(&entries) {
            return false;
        }
        for i in 0..entries.len() {
            if entries[i].abs() == 1 && search(blow_down_at(&entries, i), dead) {
                return true;
            }
        }
        dead.insert(entries);
        false
    }
    search(f.0.clone(), &mut HashSet::new())
}

/// Lexicographically smallest 1-based prefix lengths `(ma, mb)` whose
/// truncation values sum to exactly one.
pub fn find_truncation_pair(a: &Chain, b: &Chain) -> Option<(usize, usize)> {
    let ta = truncation_values(a);
    let tb = truncation_values(b);
    let one = Rational::one();
    ta.iter().enumerate().find_map(|(i, sa)| {
        tb.iter()
            .position(|sb| sa + sb == one)
            .map(|j| (i + 1, j + 1))
    })
}
