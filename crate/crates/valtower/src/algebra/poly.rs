//! Sparse bivariate polynomials over `F_q`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::{Field, FieldElem};
use crate::error::{Error, Result};

/// Exponent pair ordered by y-degree first, so the last entry carries the leading y-power.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Mono {
    pub y: u32,
    pub x: u32,
}

impl Mono {
    pub fn new(x: u32, y: u32) -> Self {
        Mono { y, x }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly2 {
    field: Field,
    terms: BTreeMap<Mono, u32>,
}

fn checked(a: u32, b: u32) -> u32 {
    a.checked_add(b).expect("exponent overflow")
}

impl Poly2 {
    pub fn zero(field: Field) -> Self {
        Poly2 { field, terms: BTreeMap::new() }
    }

    pub fn constant(c: FieldElem) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn one(field: Field) -> Self {
        Self::constant(field.one())
    }

    pub fn x(field: Field) -> Self {
        Self::monomial(field.one(), 1, 0)
    }

    pub fn y(field: Field) -> Self {
        Self::monomial(field.one(), 0, 1)
    }

    /// `c·x^i·y^j`.
    pub fn monomial(c: FieldElem, i: u32, j: u32) -> Self {
        let mut p = Self::zero(c.field());
        if !c.is_zero() {
            p.terms.insert(Mono::new(i, j), c.raw());
        }
        p
    }

    /// From `(coefficient, x-exponent, y-exponent)` triples; repeated exponents are summed.
    pub fn from_terms(field: Field, terms: impl IntoIterator<Item = (FieldElem, u32, u32)>) -> Self {
        let mut p = Self::zero(field);
        for (c, i, j) in terms {
            p.add_term(Mono::new(i, j), c.raw());
        }
        p
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms as `(coefficient, x-exponent, y-exponent)`, by increasing y then x.
    pub fn terms(&self) -> impl Iterator<Item = (FieldElem, u32, u32)> + '_ {
        self.terms.iter().map(move |(m, &c)| (self.field.elem(c), m.x, m.y))
    }

    pub fn coeff(&self, i: u32, j: u32) -> FieldElem {
        self.field.elem(self.terms.get(&Mono::new(i, j)).copied().unwrap_or(0))
    }

    pub(crate) fn add_term(&mut self, m: Mono, c: u32) {
        if c == 0 {
            return;
        }
        let f = self.field;
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = f.add_raw(*e.get(), c);
                if s == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn deg_y(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.y)
    }

    pub fn deg_x(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.x).max()
    }

    /// Constant term `f(0,0)`.
    pub fn constant_term(&self) -> FieldElem {
        self.coeff(0, 0)
    }

    pub fn is_unit(&self) -> bool {
        !self.constant_term().is_zero()
    }

    /// Largest `m` with `x^m | f`.
    pub fn x_order(&self) -> Result<u32> {
        self.terms.keys().map(|m| m.x).min().ok_or(Error::Indeterminate)
    }

    /// y-adic order of `f(0, y)`.
    pub fn y_order_mod_x(&self) -> Result<u32> {
        self.terms.keys().filter(|m| m.x == 0).map(|m| m.y).min().ok_or(Error::DivisibleByX)
    }

    /// Divides by `x^k`; panics unless exact.
    pub fn div_x_pow(&self, k: u32) -> Poly2 {
        let terms = self
            .terms
            .iter()
            .map(|(m, &c)| (Mono::new(m.x.checked_sub(k).expect("inexact division by x^k"), m.y), c))
            .collect();
        Poly2 { field: self.field, terms }
    }

    pub fn mul_monomial(&self, c: FieldElem, i: u32, j: u32) -> Poly2 {
        if c.is_zero() {
            return Poly2::zero(self.field);
        }
        let f = self.field;
        let terms = self
            .terms
            .iter()
            .map(|(m, &a)| (Mono::new(checked(m.x, i), checked(m.y, j)), f.mul_raw(a, c.raw())))
            .collect();
        Poly2 { field: f, terms }
    }

    pub fn scale(&self, c: FieldElem) -> Poly2 {
        self.mul_monomial(c, 0, 0)
    }

    /// Drops every term with x-exponent `>= m`.
    pub fn truncate_x(&self, m: u32) -> Poly2 {
        let terms = self.terms.iter().filter(|(k, _)| k.x < m).map(|(k, &c)| (*k, c)).collect();
        Poly2 { field: self.field, terms }
    }

    /// Drops terms with x-exponent `>= mx` or y-exponent `>= my`.
    pub fn truncate(&self, mx: u32, my: u32) -> Poly2 {
        let terms = self.terms.iter().filter(|(k, _)| k.x < mx && k.y < my).map(|(k, &c)| (*k, c)).collect();
        Poly2 { field: self.field, terms }
    }

    /// Product truncated modulo `x^mx`.
    pub fn mul_trunc(&self, other: &Poly2, mx: u32, my: u32) -> Poly2 {
        let mut out = Poly2::zero(self.field);
        let f = self.field;
        for (a, &ca) in &self.terms {
            if a.x >= mx || a.y >= my {
                continue;
            }
            for (b, &cb) in &other.terms {
                let (x, y) = (a.x + b.x, a.y + b.y);
                if x < mx && y < my {
                    out.add_term(Mono::new(x, y), f.mul_raw(ca, cb));
                }
            }
        }
        out
    }

    /// `f^e`, as a product of Frobenius powers over the base-p digits of `e`.
    pub fn pow(&self, mut e: u64) -> Poly2 {
        let p = self.field.p() as u64;
        let mut acc = Poly2::one(self.field);
        let mut k = 0;
        while e > 0 {
            let digit = e % p;
            if digit > 0 {
                let base = self.frobenius(k);
                for _ in 0..digit {
                    acc = &acc * &base;
                }
            }
            e /= p;
            k += 1;
        }
        acc
    }

    /// `f^(p^k)`, computed termwise.
    pub fn frobenius(&self, k: u32) -> Poly2 {
        if k == 0 {
            return self.clone();
        }
        let f = self.field;
        let q = (f.p() as u64).pow(k);
        let scale = |e: u32| -> u32 { u32::try_from(e as u64 * q).expect("exponent overflow") };
        let terms = self.terms.iter().map(|(m, &c)| (Mono::new(scale(m.x), scale(m.y)), f.pow_raw(c, q))).collect();
        Poly2 { field: f, terms }
    }

    /// Coefficient of `y^j` as a polynomial in x alone.
    pub fn y_coeff(&self, j: u32) -> Poly2 {
        let terms =
            self.terms.range(Mono::new(0, j)..=Mono::new(u32::MAX, j)).map(|(m, &c)| (Mono::new(m.x, 0), c)).collect();
        Poly2 { field: self.field, terms }
    }

    /// `f = q·g + r` with `deg_y r < deg_y g`, for `g` whose leading y-coefficient is a nonzero constant.
    pub fn divrem_y(&self, g: &Poly2) -> Result<(Poly2, Poly2)> {
        let dg = g.deg_y().ok_or(Error::NotMonic)?;
        let lead = g.y_coeff(dg);
        if lead.len() != 1 || !lead.is_unit() {
            return Err(Error::NotMonic);
        }
        let f = self.field;
        let inv = f.inv_raw(lead.constant_term().raw()).ok_or(Error::NotMonic)?;
        let tail: Vec<(Mono, u32)> = g.terms.iter().filter(|(m, _)| m.y < dg).map(|(m, &c)| (*m, c)).collect();
        let mut r = self.clone();
        let mut q = Poly2::zero(f);
        while let Some(top) = r.terms.keys().next_back().copied() {
            if top.y < dg {
                break;
            }
            let shift = top.y - dg;
            let layer: Vec<(u32, u32)> = r
                .terms
                .range(Mono::new(0, top.y)..=Mono::new(u32::MAX, top.y))
                .map(|(m, &c)| (m.x, f.mul_raw(c, inv)))
                .collect();
            for &(x, c) in &layer {
                r.terms.remove(&Mono::new(x, top.y));
                q.add_term(Mono::new(x, shift), c);
                let nc = f.neg_raw(c);
                for &(m, gc) in &tail {
                    r.add_term(Mono::new(checked(m.x, x), m.y + shift), f.mul_raw(nc, gc));
                }
            }
        }
        Ok((q, r))
    }

    /// `f(x, h(x, y))`.
    pub fn subs_y(&self, h: &Poly2) -> Poly2 {
        let mut out = Poly2::zero(self.field);
        let dy = match self.deg_y() {
            Some(d) => d,
            None => return out,
        };
        // Horner in y
        for j in (0..=dy).rev() {
            out = &out * h;
            let c = self.y_coeff(j);
            out = &out + &c;
        }
        out
    }

    /// `f(0, y)`.
    pub fn eval_x0(&self) -> Poly2 {
        let terms = self.terms.iter().filter(|(m, _)| m.x == 0).map(|(m, &c)| (*m, c)).collect();
        Poly2 { field: self.field, terms }
    }

    /// Swaps the roles of x and y.
    pub fn swap(&self) -> Poly2 {
        let terms = self.terms.iter().map(|(m, &c)| (Mono::new(m.y, m.x), c)).collect();
        Poly2 { field: self.field, terms }
    }

    /// Formats with the given variable names.
    pub fn display_with(&self, xn: &str, yn: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        // highest y-degree first reads naturally for key polynomials
        for (k, (m, &c)) in self.terms.iter().rev().enumerate() {
            let c = self.field.elem(c);
            let neg = self.field.degree() == 1 && c.raw() > self.field.p() / 2 && self.field.p() > 2;
            let shown = if neg { -c } else { c };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut parts = Vec::new();
            if !shown.is_one() || (m.x == 0 && m.y == 0) {
                parts.push(shown.to_string());
            }
            for (name, e) in [(xn, m.x), (yn, m.y)] {
                match e {
                    0 => {}
                    1 => parts.push(name.to_string()),
                    e => parts.push(format!("{name}^{e}")),
                }
            }
            out.push_str(&parts.join("*"));
        }
        out
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("x", "y"))
    }
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for &Poly2 {
    type Output = Poly2;
    fn add(self, o: &Poly2) -> Poly2 {
        let (mut big, small) = if self.len() >= o.len() { (self.clone(), o) } else { (o.clone(), self) };
        for (m, &c) in &small.terms {
            big.add_term(*m, c);
        }
        big
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        let f = self.field;
        Poly2 { field: f, terms: self.terms.iter().map(|(m, &c)| (*m, f.neg_raw(c))).collect() }
    }
}

impl Sub for &Poly2 {
    type Output = Poly2;
    fn sub(self, o: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (m, &c) in &o.terms {
            out.add_term(*m, self.field.neg_raw(c));
        }
        out
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;
    fn mul(self, o: &Poly2) -> Poly2 {
        let f = self.field;
        let mut out = Poly2::zero(f);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &o.terms {
                out.add_term(Mono::new(checked(a.x, b.x), checked(a.y, b.y)), f.mul_raw(ca, cb));
            }
        }
        out
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly2 {
            type Output = Poly2;
            fn $m(self, o: Poly2) -> Poly2 {
                (&self).$m(&o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);
