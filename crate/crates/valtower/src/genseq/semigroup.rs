//! The value semigroup `nu(R \ {0})` below a bound.
//!
//! Generated by the values of the keys; enumerated in increasing order.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::values::Value;

use super::GenSeq;

const MAX_ELEMENTS: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValSemigroup {
    pub bound: Value,
    pub elements: Vec<Value>,
}

impl ValSemigroup {
    pub fn contains(&self, v: &Value) -> bool {
        self.elements.binary_search(v).is_ok()
    }

    /// Elements that are not sums of two nonzero elements.
    pub fn minimal_generators(&self) -> Vec<Value> {
        let set: BTreeSet<&Value> = self.elements.iter().collect();
        self.elements
            .iter()
            .filter(|v| !v.is_zero())
            .filter(|v| {
                !self.elements.iter().take_while(|a| a.scale(2) <= **v).any(|a| !a.is_zero() && set.contains(&(*v - a)))
            })
            .cloned()
            .collect()
    }
}

/// All values `<= bound` of `sum m_i gamma_i`, `m_i >= 0`.
pub fn semigroup(gs: &GenSeq, bound: &Value) -> Result<ValSemigroup> {
    semigroup_of(&gs.values, bound)
}

pub fn semigroup_of(gens: &[Value], bound: &Value) -> Result<ValSemigroup> {
    if gens.iter().any(|g| g.is_negative() || g.is_zero()) {
        return Err(Error::BadParams("semigroup generators must be positive".into()));
    }
    let scale = gens.iter().chain([bound]).fold(BigInt::one(), |l, v| l.lcm(v.denom()));
    let to_int = |v: &Value| -> Result<u128> {
        (v.numer() * (&scale / v.denom())).to_u128().ok_or_else(|| Error::Overflow("semigroup bound".into()))
    };
    let g: BTreeSet<u128> = gens.iter().map(to_int).collect::<Result<_>>()?;
    let b = if bound.is_negative() {
        return Ok(ValSemigroup { bound: bound.clone(), elements: vec![] });
    } else {
        to_int(bound)?
    };
    let mut seen = BTreeSet::new();
    let mut heap = BinaryHeap::from([Reverse(0u128)]);
    while let Some(Reverse(s)) = heap.pop() {
        if !seen.insert(s) {
            continue;
        }
        if seen.len() > MAX_ELEMENTS {
            return Err(Error::Overflow(format!("more than {MAX_ELEMENTS} semigroup elements")));
        }
        for &gi in &g {
            let t = s + gi;
            if t <= b && !seen.contains(&t) {
                heap.push(Reverse(t));
            }
        }
    }
    let elements = seen.into_iter().map(|s| Value::new(BigInt::from(s), scale.clone())).collect();
    Ok(ValSemigroup { bound: bound.clone(), elements })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numerical_semigroup() {
        let s = semigroup_of(&[Value::int(3), Value::int(5)], &Value::int(10)).unwrap();
        let got: Vec<String> = s.elements.iter().map(|v| v.to_string()).collect();
        assert_eq!(got, ["0", "3", "5", "6", "8", "9", "10"]);
        assert_eq!(s.minimal_generators(), vec![Value::int(3), Value::int(5)]);
    }

    #[test]
    fn fractional_generators() {
        let s = semigroup_of(&[Value::int(1), Value::new(1, 2)], &Value::new(3, 2)).unwrap();
        assert_eq!(s.elements.len(), 4);
        assert_eq!(s.minimal_generators(), vec![Value::new(1, 2)]);
    }
}
