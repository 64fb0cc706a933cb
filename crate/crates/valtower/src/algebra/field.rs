//! Finite fields `F_q`, `q = p^m`, with interned log/exp tables.
//!
//! Elements of an extension are stored as integers whose base-`p` digits are
//! the coefficients in a polynomial basis over `F_p`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};

struct Tables {
    p: u32,
    m: u32,
    q: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

#[derive(Clone, Copy)]
pub struct Field(&'static Tables);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.0, other.0)
    }
}
impl Eq for Field {}

impl std::hash::Hash for Field {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        (self.0.p, self.0.m).hash(state)
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.m == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{}^{}", self.0.p, self.0.m)
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn registry() -> &'static Mutex<HashMap<(u32, u32), &'static Tables>> {
    static REG: OnceLock<Mutex<HashMap<(u32, u32), &'static Tables>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

// digitwise ops on the base-p representation
fn digits(mut a: u32, p: u32, m: u32) -> Vec<u32> {
    (0..m)
        .map(|_| {
            let d = a % p;
            a /= p;
            d
        })
        .collect()
}

fn undigits(ds: &[u32], p: u32) -> u32 {
    ds.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Multiplies by the class of `t` modulo the monic `modulus` (low-to-high, without the leading 1).
fn times_t(ds: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let m = ds.len();
    let top = ds[m - 1];
    let mut out = vec![0; m];
    for i in (1..m).rev() {
        out[i] = ds[i - 1];
    }
    for i in 0..m {
        out[i] = (out[i] + p - (top * modulus[i]) % p) % p;
    }
    out
}

fn build(p: u32, m: u32) -> Tables {
    let q = p.pow(m);
    let mut exp = vec![0u32; q as usize];
    let mut log = vec![0u32; q as usize];
    if m == 1 {
        // find a primitive root
        let g = (2..p.max(3))
            .find(|&g| {
                let mut x = 1u64;
                (1..p - 1).all(|_| {
                    x = x * g as u64 % p as u64;
                    x != 1
                })
            })
            .unwrap_or(1);
        let mut x = 1u32;
        for (k, e) in exp.iter_mut().enumerate().take((q - 1) as usize) {
            *e = x;
            log[x as usize] = k as u32;
            x = ((x as u64 * g as u64) % p as u64) as u32;
        }
        return Tables { p, m, q, exp, log };
    }
    // search monic modulus for which t has order q-1
    for cand in 0..q {
        let modulus = digits(cand, p, m);
        if modulus[0] == 0 {
            continue;
        }
        let mut cur = digits(1, p, m);
        let mut ok = true;
        let mut seen_one_early = false;
        for k in 0..(q - 1) {
            let v = undigits(&cur, p);
            if k > 0 && v == 1 {
                seen_one_early = true;
                break;
            }
            exp[k as usize] = v;
            cur = times_t(&cur, &modulus, p);
        }
        if seen_one_early || undigits(&cur, p) != 1 {
            ok = false;
        }
        if ok {
            for k in 0..(q - 1) {
                log[exp[k as usize] as usize] = k;
            }
            return Tables { p, m, q, exp, log };
        }
    }
    unreachable!("a primitive polynomial always exists")
}

impl Field {
    /// The field with `p^m` elements.
    pub fn new(p: u32, m: u32) -> Result<Field> {
        if !is_prime(p as u64) {
            return Err(Error::BadParams(format!("{p} is not prime")));
        }
        if m == 0 || (p as u64).pow(m) > 1 << 16 {
            return Err(Error::BadParams(format!("field size {p}^{m} unsupported")));
        }
        let mut reg = registry().lock().expect("field registry poisoned");
        let t = reg.entry((p, m)).or_insert_with(|| Box::leak(Box::new(build(p, m))));
        Ok(Field(t))
    }

    pub fn prime(p: u32) -> Result<Field> {
        Field::new(p, 1)
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.m
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    pub fn elem(&self, raw: u32) -> FieldElem {
        debug_assert!(raw < self.0.q);
        FieldElem { field: *self, raw }
    }

    pub fn zero(&self) -> FieldElem {
        self.elem(0)
    }

    pub fn one(&self) -> FieldElem {
        self.elem(1)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElem {
        self.elem(n.rem_euclid(self.0.p as i64) as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.0.q).map(move |r| self.elem(r))
    }

    // raw arithmetic used by the polynomial code

    #[inline]
    pub(crate) fn add_raw(&self, a: u32, b: u32) -> u32 {
        let t = self.0;
        if t.m == 1 {
            let s = a + b;
            return if s >= t.p { s - t.p } else { s };
        }
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        for _ in 0..t.m {
            out += ((a % t.p + b % t.p) % t.p) * place;
            a /= t.p;
            b /= t.p;
            place *= t.p;
        }
        out
    }

    #[inline]
    pub(crate) fn neg_raw(&self, a: u32) -> u32 {
        let t = self.0;
        if t.m == 1 {
            return if a == 0 { 0 } else { t.p - a };
        }
        let (mut a, mut out, mut place) = (a, 0, 1);
        for _ in 0..t.m {
            out += ((t.p - a % t.p) % t.p) * place;
            a /= t.p;
            place *= t.p;
        }
        out
    }

    #[inline]
    pub(crate) fn sub_raw(&self, a: u32, b: u32) -> u32 {
        self.add_raw(a, self.neg_raw(b))
    }

    #[inline]
    pub(crate) fn mul_raw(&self, a: u32, b: u32) -> u32 {
        let t = self.0;
        if a == 0 || b == 0 {
            return 0;
        }
        if t.m == 1 {
            return ((a as u64 * b as u64) % t.p as u64) as u32;
        }
        let k = (t.log[a as usize] + t.log[b as usize]) % (t.q - 1);
        t.exp[k as usize]
    }

    pub(crate) fn inv_raw(&self, a: u32) -> Option<u32> {
        let t = self.0;
        if a == 0 {
            return None;
        }
        let k = (t.q - 1 - t.log[a as usize]) % (t.q - 1);
        Some(t.exp[k as usize])
    }

    pub(crate) fn pow_raw(&self, a: u32, e: u64) -> u32 {
        let t = self.0;
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let k = ((t.log[a as usize] as u128 * e as u128) % (t.q as u128 - 1)) as usize;
        t.exp[k]
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub struct FieldElem {
    field: Field,
    raw: u32,
}

impl FieldElem {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn raw(&self) -> u32 {
        self.raw
    }

    pub fn is_zero(&self) -> bool {
        self.raw == 0
    }

    pub fn is_one(&self) -> bool {
        self.raw == 1
    }

    pub fn inv(&self) -> Result<FieldElem> {
        self.field.inv_raw(self.raw).map(|r| self.field.elem(r)).ok_or(Error::NotAUnit)
    }

    pub fn pow(&self, e: i64) -> Result<FieldElem> {
        if e >= 0 {
            Ok(self.field.elem(self.field.pow_raw(self.raw, e as u64)))
        } else {
            Ok(self.inv()?.pow(-e)?)
        }
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.degree() == 1 {
            write!(f, "{}", self.raw)
        } else {
            write!(f, "{{{}}}", self.raw)
        }
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for FieldElem {
    type Output = FieldElem;
    fn add(self, o: FieldElem) -> FieldElem {
        self.field.elem(self.field.add_raw(self.raw, o.raw))
    }
}

impl Sub for FieldElem {
    type Output = FieldElem;
    fn sub(self, o: FieldElem) -> FieldElem {
        self.field.elem(self.field.sub_raw(self.raw, o.raw))
    }
}

impl Mul for FieldElem {
    type Output = FieldElem;
    fn mul(self, o: FieldElem) -> FieldElem {
        self.field.elem(self.field.mul_raw(self.raw, o.raw))
    }
}

impl Div for FieldElem {
    type Output = FieldElem;
    /// Panics on division by zero.
    fn div(self, o: FieldElem) -> FieldElem {
        self * o.inv().expect("division by zero in F_q")
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        self.field.elem(self.field.neg_raw(self.raw))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms_small() {
        for (p, m) in [(2, 1), (3, 1), (5, 1), (2, 3), (3, 2)] {
            let f = Field::new(p, m).unwrap();
            for a in f.elements() {
                assert_eq!(a + (-a), f.zero());
                if !a.is_zero() {
                    assert_eq!(a * a.inv().unwrap(), f.one());
                }
                let mut s = f.zero();
                for _ in 0..p {
                    s = s + a;
                }
                assert!(s.is_zero(), "characteristic");
                for b in f.elements() {
                    assert_eq!(a * b, b * a);
                    for c in f.elements().take(4) {
                        assert_eq!(a * (b + c), a * b + a * c);
                    }
                }
            }
        }
    }

    #[test]
    fn interned() {
        assert_eq!(Field::new(3, 2).unwrap(), Field::new(3, 2).unwrap());
        assert_ne!(Field::prime(2).unwrap(), Field::prime(3).unwrap());
        assert!(Field::prime(4).is_err());
    }
}
