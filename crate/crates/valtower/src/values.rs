//! Exact values of a rank-1 valuation and the cyclic subgroups of Q they generate.
//!
//! - [`Value`]: a reduced fraction, totally ordered.
//! - [`ValueGroup`]: a subgroup `g·Z` of Q.
//! - [`gamma_bar`], [`beta_bar`]: the value sequences of the Artin-Schreier tower.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Value(BigRational);

impl Value {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Value(BigRational::new(num.into(), den.into()))
    }

    pub fn int(n: i64) -> Self {
        Value(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Value(BigRational::zero())
    }

    pub fn from_ratio(r: BigRational) -> Self {
        Value(r)
    }

    pub fn ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// `p^k` for a possibly negative exponent.
    pub fn pow_of(p: u64, k: i64) -> Self {
        let b = BigInt::from(p).pow(k.unsigned_abs() as u32);
        if k >= 0 {
            Value(BigRational::from_integer(b))
        } else {
            Value(BigRational::new(BigInt::one(), b))
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        Value(&self.0 * BigInt::from(k))
    }

    pub fn div_int(&self, k: i64) -> Self {
        Value(&self.0 / BigInt::from(k))
    }

    /// Exact quotient when it is an integer.
    pub fn div_exact(&self, other: &Value) -> Option<BigInt> {
        if other.is_zero() {
            return None;
        }
        let q = &self.0 / &other.0;
        q.is_integer().then(|| q.to_integer())
    }

    pub fn to_f64_lossy(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Value {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse { pos: 0, msg: format!("{msg}: {s:?}") };
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad("bad numerator"))?;
                let d: BigInt = d.trim().parse().map_err(|_| bad("bad denominator"))?;
                if d.is_zero() {
                    return Err(bad("zero denominator"));
                }
                Ok(Value(BigRational::new(n, d)))
            }
            None => Ok(Value(BigRational::from_integer(s.parse().map_err(|_| bad("bad integer"))?))),
        }
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", self.0.numer(), self.0.denom()))
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! value_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Value> for &Value {
            type Output = Value;
            fn $m(self, rhs: &Value) -> Value {
                Value((&self.0).$m(&rhs.0))
            }
        }
        impl $tr<Value> for Value {
            type Output = Value;
            fn $m(self, rhs: Value) -> Value {
                Value(self.0.$m(rhs.0))
            }
        }
    };
}
value_binop!(Add, add);
value_binop!(Sub, sub);
value_binop!(Mul, mul);

impl Neg for Value {
    type Output = Value;
    fn neg(self) -> Value {
        Value(-self.0)
    }
}

impl std::iter::Sum for Value {
    fn sum<I: Iterator<Item = Value>>(iter: I) -> Value {
        iter.fold(Value::zero(), |a, b| a + b)
    }
}

/// The subgroup `generator·Z` of Q; the zero group has generator 0.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ValueGroup {
    generator: BigRational,
}

impl ValueGroup {
    pub fn integers() -> Self {
        Self::from_denominator(1)
    }

    /// `(1/d)·Z`.
    pub fn from_denominator(d: impl Into<BigInt>) -> Self {
        ValueGroup { generator: BigRational::new(BigInt::one(), d.into()) }
    }

    pub fn trivial() -> Self {
        ValueGroup { generator: BigRational::zero() }
    }

    pub fn generated_by<'a>(values: impl IntoIterator<Item = &'a Value>) -> Self {
        values.into_iter().fold(Self::trivial(), |g, v| group_join(&g, v))
    }

    pub fn generator(&self) -> Value {
        Value(self.generator.clone())
    }

    /// `d` when the group is `(1/d)·Z`.
    pub fn denominator(&self) -> Option<BigInt> {
        (self.generator.numer().is_one()).then(|| self.generator.denom().clone())
    }

    pub fn contains(&self, v: &Value) -> bool {
        if self.generator.is_zero() {
            return v.is_zero();
        }
        (&v.0 / &self.generator).is_integer()
    }
}

impl fmt::Display for ValueGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.generator.is_zero() {
            return write!(f, "0");
        }
        if self.generator.is_one() {
            return write!(f, "Z");
        }
        write!(f, "({})Z", Value(self.generator.clone()))
    }
}

impl fmt::Debug for ValueGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn rational_gcd(a: &BigRational, b: &BigRational) -> BigRational {
    let den = a.denom().lcm(b.denom());
    let na = a.numer() * (&den / a.denom());
    let nb = b.numer() * (&den / b.denom());
    BigRational::new(na.gcd(&nb), den)
}

/// Smallest cyclic group containing `g` and `v`.
pub fn group_join(g: &ValueGroup, v: &Value) -> ValueGroup {
    ValueGroup { generator: rational_gcd(&g.generator, &v.0.abs()) }
}

/// `[big : small]`.
pub fn group_index(big: &ValueGroup, small: &ValueGroup) -> Result<u64> {
    if big.generator.is_zero() || small.generator.is_zero() {
        return Err(Error::NotSubgroup("zero group".into()));
    }
    let q = &small.generator / &big.generator;
    if !q.is_integer() {
        return Err(Error::NotSubgroup(format!("{small} is not contained in {big}")));
    }
    q.to_integer().to_u64().ok_or_else(|| Error::Overflow("group index".into()))
}

/// Smallest `n >= 1` with `n·v` in `g`.
pub fn order_in_quotient(v: &Value, g: &ValueGroup) -> Result<u64> {
    if g.generator.is_zero() {
        return if v.is_zero() { Ok(1) } else { Err(Error::NotSubgroup("infinite order over the zero group".into())) };
    }
    (&v.0 / &g.generator).denom().to_u64().ok_or_else(|| Error::Overflow("order".into()))
}

/// gamma_j by the defining recursion.
pub fn gamma_bar(j: usize, p: u64) -> Value {
    if j == 0 {
        return Value::int(1);
    }
    let mut cur = Value::new(1, p);
    for m in 2..=j {
        // n_m gamma_m = e_m + gamma_{m-1}
        let e = if m % 2 == 1 { Value::pow_of(p, 2 * m as i64 - 2) } else { Value::pow_of(p, 2 * m as i64 - 1) };
        cur = (e + cur).div_int(tower_index(m, p) as i64);
    }
    cur
}

/// gamma_j by the closed sum formula; agrees with [`gamma_bar`].
pub fn gamma_bar_closed(j: usize, p: u64) -> Value {
    if j == 0 {
        return Value::int(1);
    }
    let i = (j - 1) as i64;
    let lead = if i % 2 == 1 { Value::pow_of(p, 2 * i - 2) } else { Value::pow_of(p, 2 * i - 1) };
    let sum: Value = (0..=i).map(|t| Value::pow_of(p, -4 * t)).sum();
    lead * sum
}

/// Values of the Q and P keys: beta_0 = 1, p^2 beta_j = p^{2j-2} + beta_{j-1}.
pub fn beta_bar(j: usize, p: u64) -> Value {
    if j == 0 {
        return Value::int(1);
    }
    let mut cur = Value::new(1, p * p);
    for m in 2..=j {
        cur = (Value::pow_of(p, 2 * m as i64 - 2) + cur).div_int((p * p) as i64);
    }
    cur
}

/// Closed form of beta_m for m >= 1.
pub fn beta_bar_closed(m: usize, p: u64) -> Value {
    assert!(m >= 1);
    let m = m as i64;
    let sum: Value = (0..m).map(|i| Value::pow_of(p, -4 * i)).sum();
    Value::pow_of(p, 2 * m - 4) * sum
}

/// Index `[Gamma_i : Gamma_{i-1}]` of the tower sequence: `p` for odd `i`, `p^3` for even `i`.
pub fn tower_index(i: usize, p: u64) -> u64 {
    if i % 2 == 1 {
        p
    } else {
        p * p * p
    }
}

/// Closed form of `Gamma_{i-1}` for `i >= 1`.
pub fn stage_group(i: usize, p: u64) -> ValueGroup {
    let e = if i % 2 == 1 { 2 * i as i64 - 2 } else { 2 * i as i64 - 3 };
    let d = Value::pow_of(p, e);
    ValueGroup::from_denominator(d.numer().clone())
}
