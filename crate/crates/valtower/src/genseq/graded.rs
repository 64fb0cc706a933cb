//! Initial forms in the graded algebra of a truncated valuation.
//!
//! Truncating a level-1 generating sequence at key `t` gives the monomial valuation
//! `mu_t` of the exceptional divisor `E` of the level-`t+1` chart.  The graded algebra of
//! `mu_t` is a polynomial ring in `xi = in(K_t^{n_t} / (c·M_t))` over the graded algebra of
//! the lower keys, and `E` is the `xi`-line with the center at `xi = 1`.  For `t = 0` the
//! divisor is `x = 0`, `xi = y`, center `xi = 0`.
//!
//! - [`Evaluator`]: initial forms of elements built from key atoms and explicit polynomials.
//! - [`KeyAtoms`]: keys of one family embedded in the evaluator's chart.
//! - [`ElementData`]: value, order along `E` and order at the center.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::algebra::{Field, FieldElem, Poly2};
use crate::error::{Error, Result};
use crate::values::Value;

use super::expand::expand_top;
use super::{Family, FamilyRule, GenSeq, Keys};

/// `num · (1 - x^{p-1})^{w_pow}`; the factor `w = 1 - x^{p-1}` is a unit with residue 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartPoly {
    pub num: Poly2,
    pub w_pow: i64,
}

impl ChartPoly {
    pub fn poly(num: Poly2) -> Self {
        ChartPoly { num, w_pow: 0 }
    }
}

/// `w^k` for `k >= 0`.
pub fn w_power(field: Field, k: u64) -> Poly2 {
    let p = field.p();
    let w = &Poly2::one(field) - &Poly2::monomial(field.one(), p - 1, 0);
    w.pow(k)
}

#[derive(Clone, Debug)]
pub enum Factor {
    Atom(usize),
    Poly(ChartPoly),
}

/// A Laurent product of atoms and explicit polynomials.
#[derive(Clone, Debug, Default)]
pub struct Element {
    pub factors: Vec<(Factor, i64)>,
}

impl Element {
    pub fn one() -> Self {
        Element::default()
    }

    pub fn poly(p: Poly2) -> Self {
        Element { factors: vec![(Factor::Poly(ChartPoly::poly(p)), 1)] }
    }

    pub fn chart_poly(p: ChartPoly) -> Self {
        Element { factors: vec![(Factor::Poly(p), 1)] }
    }

    pub fn atom(i: usize) -> Self {
        Element { factors: vec![(Factor::Atom(i), 1)] }
    }

    /// `prod K_l^{v_l}`.
    pub fn from_vec(v: &[i64]) -> Self {
        Element { factors: v.iter().enumerate().filter(|(_, &e)| e != 0).map(|(l, &e)| (Factor::Atom(l), e)).collect() }
    }

    pub fn times(&self, o: &Element) -> Element {
        let mut factors = self.factors.clone();
        factors.extend(o.factors.iter().cloned());
        Element { factors }
    }

    pub fn inverse(&self) -> Element {
        Element { factors: self.factors.iter().map(|(f, e)| (f.clone(), -e)).collect() }
    }

    pub fn pow(&self, k: i64) -> Element {
        Element { factors: self.factors.iter().map(|(f, e)| (f.clone(), e * k)).collect() }
    }
}

/// Where a family's keys live relative to the evaluator's chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Embed {
    /// The family's own chart.
    Home,
    /// U keys in `(x, y)` via `v = y^p - x^c y`.
    UinS,
    /// P keys in `(x, v)` via `u = x^p / (1 - x^{p-1})`.
    PinA,
    /// P keys in `(x, y)` via both substitutions.
    PinS,
}

/// Keys usable as atoms, with explicit forms built on demand.
pub struct KeyAtoms {
    field: Field,
    native: bool,
    rule: Option<FamilyRule>,
    explicit: Mutex<Vec<ChartPoly>>,
}

impl KeyAtoms {
    /// The keys of a level-1 sequence, in its own chart.
    pub fn native(gs: &GenSeq) -> Self {
        let base = gs.base();
        let keys = base.poly_keys().expect("level-1 sequences have polynomial keys");
        KeyAtoms {
            field: base.field,
            native: true,
            rule: base.rule,
            explicit: Mutex::new(keys.iter().cloned().map(ChartPoly::poly).collect()),
        }
    }

    /// Every atom through its literal polynomial; no shortcuts.
    pub fn explicit_only(gs: &GenSeq) -> Self {
        KeyAtoms { native: false, rule: None, ..Self::native(gs) }
    }

    /// Keys of a tower family embedded in another chart of the same tower.
    pub fn family_in(rule: FamilyRule, embed: Embed) -> Result<Self> {
        let field = Field::prime(rule.p as u32)?;
        let p = rule.p as u32;
        let x = Poly2::x(field);
        let y = Poly2::y(field);
        let v_in_s = &y.pow(rule.p) - &Poly2::monomial(field.one(), rule.c as u32, 1);
        let (k0, k1) = match (rule.family, embed) {
            (_, Embed::Home) => (ChartPoly::poly(x), ChartPoly::poly(y)),
            (Family::U, Embed::UinS) => (ChartPoly::poly(x), ChartPoly::poly(v_in_s)),
            (Family::P, Embed::PinA) => (ChartPoly { num: x.pow(p as u64), w_pow: -1 }, ChartPoly::poly(y)),
            (Family::P, Embed::PinS) => (ChartPoly { num: x.pow(p as u64), w_pow: -1 }, ChartPoly::poly(v_in_s)),
            (f, e) => return Err(Error::BadParams(format!("family {f} cannot be embedded as {e:?}"))),
        };
        Ok(KeyAtoms { field, native: embed == Embed::Home, rule: Some(rule), explicit: Mutex::new(vec![k0, k1]) })
    }

    pub fn is_native(&self) -> bool {
        self.native
    }

    pub fn rule(&self) -> Option<FamilyRule> {
        self.rule
    }

    /// Explicit form of key `i`.
    pub fn explicit(&self, i: usize) -> Result<ChartPoly> {
        let mut ex = self.explicit.lock().expect("atom cache poisoned");
        while ex.len() <= i {
            let rule = self.rule.ok_or(Error::SequenceTooShort { degree: 0, span: ex.len() as u64 })?;
            let j = ex.len() - 1;
            let (n, e) = rule.step(j);
            let (a, b0, bm) = (&ex[j], &ex[0], &ex[j - 1]);
            let a_num = a.num.pow(n);
            let a_w = a.w_pow * n as i64;
            let b_num = &b0.num.pow(e) * &bm.num;
            let b_w = b0.w_pow * e as i64 + bm.w_pow;
            let w = a_w.min(b_w);
            let lhs = &a_num * &w_power(self.field, (a_w - w) as u64);
            let rhs = &b_num * &w_power(self.field, (b_w - w) as u64);
            ex.push(ChartPoly { num: &lhs - &rhs, w_pow: w });
        }
        Ok(ex[i].clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// The truncated valuation `mu_t`, keeping `xi`.
    Divisor,
    /// The valuation itself at the last key (`xi = 1`).
    Valuation,
}

/// Laurent polynomial in `xi`.
pub type XiPoly = BTreeMap<i64, FieldElem>;

fn xi_add(a: &XiPoly, b: &XiPoly, sign: FieldElem) -> XiPoly {
    let mut out = a.clone();
    for (&k, &c) in b {
        let s = out.get(&k).map_or(c * sign, |&o| o + c * sign);
        if s.is_zero() {
            out.remove(&k);
        } else {
            out.insert(k, s);
        }
    }
    out
}

fn xi_mul(a: &XiPoly, b: &XiPoly) -> XiPoly {
    let mut out = XiPoly::new();
    for (&i, &ca) in a {
        for (&j, &cb) in b {
            let e = out.entry(i + j).or_insert_with(|| ca.field().zero());
            *e = *e + ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn xi_scale_shift(a: &XiPoly, c: FieldElem, s: i64) -> XiPoly {
    a.iter().map(|(&k, &v)| (k + s, v * c)).filter(|(_, v)| !v.is_zero()).collect()
}

fn xi_pow(a: &XiPoly, mut e: u64, field: Field) -> XiPoly {
    let p = field.p() as u64;
    let mut acc: XiPoly = [(0, field.one())].into_iter().collect();
    let mut q = 1u64;
    while e > 0 {
        let d = e % p;
        if d > 0 {
            let fr: XiPoly = a.iter().map(|(&k, &c)| (k * q as i64, c.pow(q as i64).expect("nonzero"))).collect();
            for _ in 0..d {
                acc = xi_mul(&acc, &fr);
            }
        }
        e /= p;
        q = q.saturating_mul(p);
    }
    acc
}

/// Multiplicity of the center and the value there of the cofactor.
fn mult_at(a: &XiPoly, center_one: bool, field: Field) -> Result<(i64, FieldElem)> {
    let lo = *a.keys().next().ok_or(Error::Indeterminate)?;
    if !center_one {
        return Ok((lo, a[&lo]));
    }
    let hi = *a.keys().next_back().expect("nonempty");
    let mut dense: Vec<FieldElem> = (lo..=hi).map(|k| a.get(&k).copied().unwrap_or(field.zero())).collect();
    let mut d = 0;
    loop {
        let at1 = dense.iter().fold(field.zero(), |s, &c| s + c);
        if !at1.is_zero() {
            return Ok((d, at1));
        }
        // divide by (xi - 1), coefficients low to high
        let n = dense.len();
        let mut q = vec![field.zero(); n - 1];
        let mut carry = field.zero();
        for k in (1..n).rev() {
            carry = carry + dense[k];
            q[k - 1] = carry;
        }
        dense = q;
        d += 1;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InitialForm {
    /// Value scaled by the evaluator's common denominator.
    pub value: i128,
    pub mono: Vec<i64>,
    pub poly: XiPoly,
}

/// Value, standard monomial, order at the center and the residue of the cofactor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementData {
    pub value: Value,
    pub mono: Vec<i64>,
    pub mult: i64,
    pub residue: FieldElem,
}

pub struct Evaluator<'a> {
    seq: &'a GenSeq,
    keys: &'a [Poly2],
    top: usize,
    mode: Mode,
    atoms: &'a KeyAtoms,
    scale: BigInt,
    weights: Vec<i128>,
    memo: HashMap<usize, InitialForm>,
    field: Field,
}

fn ov() -> Error {
    Error::Overflow("scaled value".into())
}

impl<'a> Evaluator<'a> {
    fn build(seq: &'a GenSeq, top: usize, mode: Mode, atoms: &'a KeyAtoms) -> Result<Self> {
        let keys = seq.poly_keys().ok_or_else(|| Error::NotApplicable("evaluator needs a level-1 sequence".into()))?;
        if top >= seq.len() {
            return Err(Error::SequenceTooShort { degree: top as u64, span: seq.len() as u64 });
        }
        if top == 0 && keys.len() > 1 && keys[1] != Poly2::y(seq.field) {
            return Err(Error::NotApplicable("divisor x = 0 needs K_1 = y".into()));
        }
        let scale = seq.values[..=top].iter().fold(BigInt::one(), |l, v| l.lcm(v.denom()));
        let weights = seq.values[..=top]
            .iter()
            .map(|v| (v.numer() * (&scale / v.denom())).to_i128().ok_or_else(ov))
            .collect::<Result<Vec<_>>>()?;
        Ok(Evaluator { seq, keys, top, mode, atoms, scale, weights, memo: HashMap::new(), field: seq.field })
    }

    /// Evaluator for `mu_top`, the valuation of the exceptional divisor of the level-`top+1` chart.
    pub fn divisor(seq: &'a GenSeq, top: usize, atoms: &'a KeyAtoms) -> Result<Self> {
        Self::build(seq, top, Mode::Divisor, atoms)
    }

    /// Evaluator for the valuation itself.
    pub fn valuation(seq: &'a GenSeq, atoms: &'a KeyAtoms) -> Result<Self> {
        Self::build(seq, seq.top(), Mode::Valuation, atoms)
    }

    pub fn top(&self) -> usize {
        self.top
    }

    fn center_one(&self) -> bool {
        self.top > 0
    }

    pub fn to_value(&self, scaled: i128) -> Value {
        Value::new(BigInt::from(scaled), self.scale.clone())
    }

    fn mono_value(&self, m: &[i64]) -> Result<i128> {
        m.iter()
            .zip(&self.weights)
            .try_fold(0i128, |s, (&e, &w)| (e as i128).checked_mul(w).and_then(|t| s.checked_add(t)).ok_or_else(ov))
    }

    /// Reduces exponents into `[0, n_i)` using the graded relations; returns the
    /// accumulated coefficient and power of `xi`.
    fn normalize(&self, mono: &mut [i64]) -> Result<(FieldElem, i64)> {
        let mut coeff = self.field.one();
        let mut xi = 0;
        for i in (1..=self.top).rev() {
            let n = self.seq.indices[i] as i64;
            let q = mono[i].div_euclid(n);
            if q == 0 {
                continue;
            }
            let rel = match self.seq.relations.get(i).and_then(|r| r.as_ref()) {
                Some(r) => r,
                None if i == self.top => continue,
                None => return Err(Error::InvalidSequence(format!("missing relation {i}"))),
            };
            mono[i] -= q * n;
            for (l, &r) in rel.exps.iter().enumerate() {
                mono[l] += q * r;
            }
            coeff = coeff * rel.coeff.pow(q)?;
            if i == self.top && self.mode == Mode::Divisor {
                xi += q;
            }
        }
        Ok((coeff, xi))
    }

    /// Normal form of a Laurent monomial over keys `0..=top` and its coefficient.
    pub fn reduce(&self, mono: &[i64]) -> Result<(FieldElem, Vec<i64>)> {
        let mut m = mono.to_vec();
        m.resize(self.top + 1, 0);
        let (c, _) = self.normalize(&mut m)?;
        Ok((c, m))
    }

    fn finish(&self, value: i128, mut mono: Vec<i64>, poly: XiPoly) -> Result<InitialForm> {
        let (c, s) = self.normalize(&mut mono)?;
        let poly = xi_scale_shift(&poly, c, s);
        Ok(InitialForm { value, mono, poly: self.collapse(poly) })
    }

    fn collapse(&self, poly: XiPoly) -> XiPoly {
        if self.mode == Mode::Valuation {
            let s = poly.values().fold(self.field.zero(), |a, &b| a + b);
            if s.is_zero() {
                XiPoly::new()
            } else {
                [(0, s)].into_iter().collect()
            }
        } else {
            poly
        }
    }

    /// Initial form of an explicit polynomial (the unit factor contributes nothing).
    pub fn poly_form(&self, cp: &ChartPoly) -> Result<InitialForm> {
        let f = &cp.num;
        if f.is_zero() {
            return Err(Error::Indeterminate);
        }
        if self.top == 0 {
            let b = f.x_order()?;
            let poly: XiPoly = f.terms().filter(|t| t.1 == b).map(|(c, _, y)| (y as i64, c)).collect();
            return Ok(InitialForm { value: self.weights[0] * b as i128, mono: vec![b as i64], poly });
        }
        let exp = expand_top(f, self.keys, self.top, None)?;
        let mut best: Option<i128> = None;
        let mut vals = Vec::with_capacity(exp.terms.len());
        for (_, m) in &exp.terms {
            let m: Vec<i64> = m.iter().map(|&e| e as i64).collect();
            let v = self.mono_value(&m)?;
            best = Some(best.map_or(v, |b| b.min(v)));
            vals.push((v, m));
        }
        let best = best.ok_or(Error::Indeterminate)?;
        let mut mono_ref: Option<Vec<i64>> = None;
        let mut poly = XiPoly::new();
        for ((c, _), (v, mut m)) in exp.terms.iter().zip(vals) {
            if v != best {
                continue;
            }
            let (k, s) = self.normalize(&mut m)?;
            match &mono_ref {
                None => mono_ref = Some(m),
                Some(r) if *r == m => {}
                Some(_) => return Err(Error::NotApplicable("minimal terms have distinct normal forms".into())),
            }
            poly = xi_add(&poly, &[(s, *c * k)].into_iter().collect(), self.field.one());
        }
        let poly = self.collapse(poly);
        if poly.is_empty() {
            let span = self.seq.degrees[self.top] * self.seq.indices[self.top];
            return Err(Error::SequenceTooShort { degree: f.deg_y().unwrap_or(0) as u64, span });
        }
        Ok(InitialForm { value: best, mono: mono_ref.expect("nonempty"), poly })
    }

    fn mul(&self, a: &InitialForm, b: &InitialForm) -> Result<InitialForm> {
        let mono = a.mono.iter().zip(&b.mono).map(|(x, y)| x + y).collect();
        self.finish(a.value.checked_add(b.value).ok_or_else(ov)?, mono, xi_mul(&a.poly, &b.poly))
    }

    fn pow(&self, a: &InitialForm, e: u64) -> Result<InitialForm> {
        let mono = a.mono.iter().map(|&m| m * e as i64).collect();
        let value = a.value.checked_mul(e as i128).ok_or_else(ov)?;
        self.finish(value, mono, xi_pow(&a.poly, e, self.field))
    }

    /// Initial form of atom `i`.
    pub fn atom(&mut self, i: usize) -> Result<InitialForm> {
        if let Some(f) = self.memo.get(&i) {
            return Ok(f.clone());
        }
        let form = self.atom_uncached(i)?;
        self.memo.insert(i, form.clone());
        Ok(form)
    }

    fn atom_uncached(&mut self, i: usize) -> Result<InitialForm> {
        if self.atoms.native && i <= self.top {
            let mut mono = vec![0; self.top + 1];
            mono[i] = 1;
            return Ok(InitialForm {
                value: self.weights[i],
                mono,
                poly: [(0, self.field.one())].into_iter().collect(),
            });
        }
        if let (Some(rule), true) = (self.atoms.rule, i >= 2) {
            let (n, e) = rule.step(i - 1);
            let a = self.atom(i - 1)?;
            let a = self.pow(&a, n)?;
            let k0 = self.atom(0)?;
            let km = self.atom(i - 2)?;
            let b = self.mul(&self.pow(&k0, e)?, &km)?;
            match a.value.cmp(&b.value) {
                std::cmp::Ordering::Less => return Ok(a),
                std::cmp::Ordering::Greater => {
                    let poly = xi_scale_shift(&b.poly, -self.field.one(), 0);
                    return Ok(InitialForm { poly, ..b });
                }
                std::cmp::Ordering::Equal if a.mono == b.mono => {
                    let poly = self.collapse(xi_add(&a.poly, &b.poly, -self.field.one()));
                    if !poly.is_empty() {
                        return Ok(InitialForm { poly, ..a });
                    }
                }
                std::cmp::Ordering::Equal => {}
            }
        }
        let cp = self.atoms.explicit(i)?;
        self.poly_form(&cp)
    }

    /// Value, normal monomial, order at the center and cofactor residue of an element.
    pub fn element(&mut self, el: &Element) -> Result<ElementData> {
        let mut value = 0i128;
        let mut mono = vec![0i64; self.top + 1];
        let mut mult = 0i64;
        let mut residue = self.field.one();
        for (f, e) in &el.factors {
            let form = match f {
                Factor::Atom(i) => self.atom(*i)?,
                Factor::Poly(cp) => self.poly_form(cp)?,
            };
            let (d, r) = mult_at(&form.poly, self.center_one(), self.field)?;
            value = value.checked_add(form.value.checked_mul(*e as i128).ok_or_else(ov)?).ok_or_else(ov)?;
            for (m, &fm) in mono.iter_mut().zip(&form.mono) {
                *m += e * fm;
            }
            mult += e * d;
            residue = residue * r.pow(*e)?;
        }
        let (c, _) = self.normalize(&mut mono)?;
        Ok(ElementData { value: self.to_value(value), mono, mult, residue: residue * c })
    }
}

/// Order along the exceptional divisor `b` and order at the center `d` of each key of a
/// derived sequence; `(1, 0)` for key 0 and `(0, D_j)` for the others.
pub fn divisor_degrees(gs: &GenSeq) -> Result<Vec<bool>> {
    let vecs = match &gs.keys {
        Keys::Over { vecs, .. } => vecs,
        Keys::Poly(_) => return Err(Error::NotApplicable("level-1 keys are checked directly".into())),
    };
    let base = gs.base();
    let atoms = KeyAtoms::native(base);
    let mut ev = Evaluator::divisor(base, gs.level() - 1, &atoms)?;
    let xv = &gs.values[0];
    vecs.iter()
        .enumerate()
        .map(|(j, v)| {
            let d = ev.element(&Element::from_vec(v))?;
            let b = d.value.div_exact(xv);
            Ok(if j == 0 {
                b == Some(BigInt::one()) && d.mult == 0
            } else {
                b == Some(BigInt::from(0)) && d.mult == gs.degrees[j] as i64
            })
        })
        .collect()
}
