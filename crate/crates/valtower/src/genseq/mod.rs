//! Generating sequences of key polynomials.
//!
//! - [`GenSeq`]: keys, values, indices and graded relations of one chart.
//! - [`build_tower_seq`]: the Q, P and U families of the Artin-Schreier tower.
//! - [`validate`]: index, growth, degree and relation checks.
//! - [`expand`] / [`value_of`] / [`residue_of_quotient`]: standard expansions.
//! - [`graded`]: initial forms for truncated valuations and exceptional divisors.
//! - [`semigroup`]: the value semigroup below a bound.

pub mod expand;
pub mod graded;
pub mod semigroup;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{Field, FieldElem, Poly2};
use crate::error::{Error, Result};
use crate::values::{beta_bar, gamma_bar, order_in_quotient, Value, ValueGroup};

pub use expand::{expand, residue_of_quotient, value_of, value_of_unit_fraction, StandardExpansion};
pub use semigroup::{semigroup, ValSemigroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    Q,
    P,
    U,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Q" | "q" => Ok(Family::Q),
            "P" | "p" => Ok(Family::P),
            "U" | "u" => Ok(Family::U),
            _ => Err(Error::BadParams(format!("unknown family {s:?} (expected Q, P or U)"))),
        }
    }
}

impl Family {
    /// The chart the family lives in: S = (x,y), R = (u,v), A = (x,v).
    pub fn home_chart(&self) -> &'static str {
        match self {
            Family::Q => "S",
            Family::P => "R",
            Family::U => "A",
        }
    }

    pub fn var_names(&self) -> (&'static str, &'static str) {
        match self {
            Family::Q => ("x", "y"),
            Family::P => ("u", "v"),
            Family::U => ("x", "v"),
        }
    }
}

/// Recursion `K_{i+1} = K_i^{n_i} - K_0^{e_i} K_{i-1}` of a tower family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FamilyRule {
    pub family: Family,
    pub p: u64,
    pub c: u64,
}

impl FamilyRule {
    /// `(n_i, e_i)` for `i >= 1`.
    pub fn step(&self, i: usize) -> (u64, u64) {
        let p = self.p;
        let pk = |k: usize| p.pow(k as u32);
        match self.family {
            Family::Q | Family::P => (p * p, if i == 1 { 0 } else { pk(2 * i - 2) }),
            Family::U => match i {
                1 => (p, 0),
                i if i % 2 == 1 => (p, pk(2 * i - 2)),
                i => (p * p * p, pk(2 * i - 1)),
            },
        }
    }

    /// The graded relation `K_i^{n_i} = K_0^{e_i} K_{i-1}` over keys `0..i`.
    pub fn relation(&self, i: usize, field: Field) -> Relation {
        let (_, e) = self.step(i);
        let mut exps = vec![0i64; i];
        exps[0] += e as i64;
        exps[i - 1] += 1;
        Relation { coeff: field.one(), exps }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chart {
    pub name: String,
    pub level: usize,
}

impl Chart {
    pub fn new(name: impl Into<String>, level: usize) -> Self {
        Chart { name: name.into(), level }
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.level <= 1 {
            write!(f, "{}", self.name)
        } else {
            write!(f, "{}_{}", self.name, self.level)
        }
    }
}

/// Graded relation `in(K_i)^{n_i} = coeff · in(prod_l K_l^{exps[l]})`, `l < i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub coeff: FieldElem,
    pub exps: Vec<i64>,
}

/// Keys are either polynomials in the chart coordinates or Laurent monomials over
/// the polynomial keys of a level-1 base sequence.
#[derive(Clone, Debug)]
pub enum Keys {
    Poly(Vec<Poly2>),
    Over { base: Arc<GenSeq>, vecs: Vec<Vec<i64>> },
}

#[derive(Clone, Debug)]
pub struct GenSeq {
    pub chart: Chart,
    pub field: Field,
    pub keys: Keys,
    pub values: Vec<Value>,
    /// `n_i = [Gamma_i : Gamma_{i-1}]`; `n_0 = 1`.
    pub indices: Vec<u64>,
    /// Weierstrass degrees in the chart's second parameter; `D_0 = 0`, `D_1 = 1`.
    pub degrees: Vec<u64>,
    /// `relations[i]` for `1 <= i <= N`.
    pub relations: Vec<Option<Relation>>,
    pub rule: Option<FamilyRule>,
}

/// Computes `n_i` from the values.
pub fn compute_indices(values: &[Value]) -> Result<Vec<u64>> {
    let mut g = ValueGroup::trivial();
    let mut out = Vec::with_capacity(values.len());
    for (i, v) in values.iter().enumerate() {
        if i == 0 {
            out.push(1);
        } else {
            out.push(order_in_quotient(v, &g)?);
        }
        g = crate::values::group_join(&g, v);
    }
    Ok(out)
}

impl GenSeq {
    /// A sequence of polynomial keys with assigned values; relations are derived by expansion.
    pub fn from_polys(chart: Chart, keys: Vec<Poly2>, values: Vec<Value>) -> Result<GenSeq> {
        if keys.is_empty() || keys.len() != values.len() {
            return Err(Error::InvalidSequence("keys and values must be nonempty and of equal length".into()));
        }
        let field = keys[0].field();
        if keys[0] != Poly2::x(field) {
            return Err(Error::InvalidSequence("Q_0 must be x".into()));
        }
        if values[0] <= Value::zero() || values.iter().any(|v| v.is_negative()) {
            return Err(Error::InvalidSequence("values must be positive".into()));
        }
        let indices = compute_indices(&values)?;
        let degrees = keys.iter().map(|k| k.deg_y().unwrap_or(0) as u64).collect();
        let mut gs = GenSeq {
            chart,
            field,
            keys: Keys::Poly(keys),
            values,
            indices,
            degrees,
            relations: Vec::new(),
            rule: None,
        };
        gs.relations = (0..gs.len()).map(|i| if i == 0 { None } else { gs.derive_relation(i).ok() }).collect();
        Ok(gs)
    }

    /// Number of keys.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Index of the last key.
    pub fn top(&self) -> usize {
        self.len() - 1
    }

    pub fn level(&self) -> usize {
        self.chart.level
    }

    pub fn poly_keys(&self) -> Option<&[Poly2]> {
        match &self.keys {
            Keys::Poly(k) => Some(k),
            Keys::Over { .. } => None,
        }
    }

    pub fn p(&self) -> u64 {
        self.field.p() as u64
    }

    /// Value of a Laurent monomial over the keys.
    pub fn mono_value(&self, exps: &[i64]) -> Value {
        exps.iter().zip(&self.values).map(|(&m, v)| v.scale(m)).sum()
    }

    /// Relation `i` derived from the minimal term of `K_i^{n_i} - K_{i+1}`.
    fn derive_relation(&self, i: usize) -> Result<Relation> {
        let keys = self.poly_keys().ok_or_else(|| Error::NotApplicable("relations of derived keys".into()))?;
        if i + 1 >= keys.len() {
            return Err(Error::SequenceTooShort { degree: 0, span: 0 });
        }
        let diff = &keys[i].pow(self.indices[i]) - &keys[i + 1];
        if diff.is_zero() {
            return Err(Error::InvalidSequence(format!("K_{i}^n_{i} equals K_{}", i + 1)));
        }
        let exp = expand::expand_top(&diff, keys, i, None)?;
        let (c, m) = exp.minimal_term(&self.values)?;
        if m[i] != 0 {
            return Err(Error::InvalidSequence(format!("relation {i} involves K_{i}")));
        }
        Ok(Relation { coeff: c, exps: m[..i].iter().map(|&e| e as i64).collect() })
    }

    /// The same keys with every value multiplied by `k`.
    pub fn scaled(&self, k: &Value) -> GenSeq {
        GenSeq { values: self.values.iter().map(|v| v.clone() * k.clone()).collect(), ..self.clone() }
    }

    /// Display names of the level-1 keys.
    pub fn base_key_name(&self, i: usize) -> String {
        match (self.rule, i) {
            (Some(r), 0) => r.family.var_names().0.to_string(),
            (Some(r), _) => format!("{}_{i}", r.family),
            (None, 0) => "x".into(),
            (None, _) => format!("K_{i}"),
        }
    }

    /// Key `i` as text: a polynomial at level 1, a Laurent monomial in base keys above.
    pub fn key_string(&self, i: usize) -> String {
        match &self.keys {
            Keys::Poly(k) => {
                let (xn, yn) = self.rule.map(|r| r.family.var_names()).unwrap_or(("x", "y"));
                k[i].display_with(xn, yn)
            }
            Keys::Over { base, vecs } => laurent_string(&vecs[i], |l| base.base_key_name(l)),
        }
    }

    /// Rows `(i, key, value, n_i)`.
    pub fn table(&self) -> Vec<KeyRow> {
        (0..self.len())
            .map(|i| KeyRow { i, key: self.key_string(i), value: self.values[i].clone(), index: self.indices[i] })
            .collect()
    }

    /// Level-1 sequence underlying this one (itself at level 1).
    pub fn base(&self) -> &GenSeq {
        match &self.keys {
            Keys::Poly(_) => self,
            Keys::Over { base, .. } => base,
        }
    }

    /// Key `i` as a Laurent vector over the base keys.
    pub fn key_vec(&self, i: usize) -> Vec<i64> {
        match &self.keys {
            Keys::Poly(k) => {
                let mut v = vec![0; k.len()];
                v[i] = 1;
                v
            }
            Keys::Over { vecs, .. } => vecs[i].clone(),
        }
    }
}

pub fn laurent_string(v: &[i64], name: impl Fn(usize) -> String) -> String {
    let fmt_part = |l: usize, e: i64| if e == 1 { name(l) } else { format!("{}^{}", name(l), e) };
    let num: Vec<String> = v.iter().enumerate().filter(|(_, &e)| e > 0).map(|(l, &e)| fmt_part(l, e)).collect();
    let den: Vec<String> = v.iter().enumerate().filter(|(_, &e)| e < 0).map(|(l, &e)| fmt_part(l, -e)).collect();
    let num_s = if num.is_empty() { "1".to_string() } else { num.join("*") };
    match den.len() {
        0 => num_s,
        1 => format!("{num_s} / {}", den[0]),
        _ => format!("{num_s} / ({})", den.join("*")),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct KeyRow {
    pub i: usize,
    pub key: String,
    pub value: Value,
    pub index: u64,
}

/// Polynomial keys `K_0..K_n` of a family in its home chart.
pub fn family_keys(rule: FamilyRule, n: usize, field: Field) -> Vec<Poly2> {
    let mut keys = vec![Poly2::x(field), Poly2::y(field)];
    for i in 1..n {
        let (ni, e) = rule.step(i);
        let next = &keys[i].pow(ni) - &keys[i - 1].mul_monomial(field.one(), e as u32, 0);
        keys.push(next);
    }
    keys.truncate(n + 1);
    keys
}

/// The Q, P or U sequence with keys `0..=n`.
pub fn build_tower_seq(family: Family, p: u64, c: u64, n: usize) -> Result<GenSeq> {
    if !crate::algebra::field::is_prime(p) {
        return Err(Error::BadParams(format!("{p} is not prime")));
    }
    if n < 2 {
        return Err(Error::BadParams("need at least three keys (N >= 2)".into()));
    }
    if family == Family::U && (c == 0 || c % (p - 1) != 0) {
        return Err(Error::BadParams(format!("p - 1 = {} must divide c = {c}", p - 1)));
    }
    let field = Field::prime(p as u32)?;
    let rule = FamilyRule { family, p, c };
    let keys = family_keys(rule, n, field);
    let values: Vec<Value> = (0..=n)
        .map(|i| match family {
            Family::U => gamma_bar(i, p),
            _ => beta_bar(i, p),
        })
        .collect();
    let indices = compute_indices(&values)?;
    let degrees = keys.iter().map(|k| k.deg_y().unwrap_or(0) as u64).collect();
    let relations = (0..=n).map(|i| (i > 0).then(|| rule.relation(i, field))).collect();
    Ok(GenSeq {
        chart: Chart::new(family.home_chart(), 1),
        field,
        keys: Keys::Poly(keys),
        values,
        indices,
        degrees,
        relations,
        rule: Some(rule),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidityEntry {
    pub i: usize,
    pub computed_index: u64,
    pub declared_index: Option<u64>,
    pub growth: Option<bool>,
    pub degree_ok: bool,
    pub relation_ok: Option<bool>,
}

impl ValidityEntry {
    pub fn ok(&self) -> bool {
        self.declared_index.is_none_or(|d| d == self.computed_index)
            && self.growth != Some(false)
            && self.degree_ok
            && self.relation_ok != Some(false)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidityReport {
    pub chart: String,
    pub entries: Vec<ValidityEntry>,
    pub passed: bool,
    pub notes: Vec<String>,
}

impl ValidityReport {
    pub fn first_failure(&self) -> Option<&ValidityEntry> {
        self.entries.iter().find(|e| !e.ok())
    }
}

/// Checks indices against degree ratios, the growth condition, key degrees and relations.
pub fn validate(gs: &GenSeq) -> ValidityReport {
    let mut notes = Vec::new();
    let computed = compute_indices(&gs.values).unwrap_or_else(|e| {
        notes.push(format!("index computation failed: {e}"));
        vec![0; gs.len()]
    });
    let degree_flags = degree_checks(gs, &mut notes);
    let entries: Vec<ValidityEntry> = (0..gs.len())
        .map(|i| {
            let declared = if i == 0 {
                Some(1)
            } else if i + 1 < gs.len() && gs.degrees[i] > 0 && gs.degrees[i + 1] % gs.degrees[i] == 0 {
                Some(gs.degrees[i + 1] / gs.degrees[i])
            } else if i + 1 < gs.len() {
                Some(0)
            } else {
                gs.rule.filter(|_| gs.level() == 1).map(|r| r.step(i).0)
            };
            let growth =
                (i >= 1 && i + 1 < gs.len()).then(|| gs.values[i + 1] > gs.values[i].scale(computed[i] as i64));
            let relation_ok = gs
                .relations
                .get(i)
                .and_then(|r| r.as_ref())
                .map(|r| gs.values[i].scale(computed[i] as i64) == gs.mono_value(&r.exps));
            ValidityEntry {
                i,
                computed_index: computed[i],
                declared_index: declared,
                growth,
                degree_ok: degree_flags[i],
                relation_ok,
            }
        })
        .collect();
    let passed = entries.iter().all(ValidityEntry::ok) && notes.is_empty();
    ValidityReport { chart: gs.chart.to_string(), entries, passed, notes }
}

fn degree_checks(gs: &GenSeq, notes: &mut Vec<String>) -> Vec<bool> {
    match &gs.keys {
        Keys::Poly(keys) => keys
            .iter()
            .enumerate()
            .map(|(i, k)| {
                if i == 0 {
                    return *k == Poly2::x(gs.field);
                }
                let d = k.deg_y().unwrap_or(0);
                let monic = d >= 1 && k.y_coeff(d) == Poly2::one(gs.field);
                let expect = if i == 1 { 1 } else { gs.degrees[i - 1] * gs.indices[i - 1] };
                monic && d as u64 == expect
            })
            .collect(),
        Keys::Over { .. } => match graded::divisor_degrees(gs) {
            Ok(flags) => flags,
            Err(e) => {
                notes.push(format!("degree check failed: {e}"));
                vec![false; gs.len()]
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tower_sequences_small() {
        let u = build_tower_seq(Family::U, 2, 1, 2).unwrap();
        let f = u.field;
        let k = u.poly_keys().unwrap();
        assert_eq!(k[2], &Poly2::y(f).pow(2) - &Poly2::x(f));
        assert_eq!(u.values[2], Value::new(17, 16));
        let q = build_tower_seq(Family::Q, 3, 0, 2).unwrap();
        assert_eq!(q.values, vec![Value::int(1), Value::new(1, 9), Value::new(82, 81)]);
        let p = build_tower_seq(Family::P, 2, 0, 2).unwrap();
        assert_eq!(p.key_string(2), "v^4 + u");
        assert!(matches!(build_tower_seq(Family::U, 3, 1, 2), Err(Error::BadParams(_))));
    }

    #[test]
    fn u_indices() {
        let u = build_tower_seq(Family::U, 2, 1, 5).unwrap();
        assert_eq!(u.indices, vec![1, 2, 8, 2, 8, 2]);
        let r = validate(&u);
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn growth_failure() {
        let f = Field::prime(2).unwrap();
        let keys = vec![Poly2::x(f), Poly2::y(f), &Poly2::y(f).pow(2) - &Poly2::x(f)];
        let values = vec![Value::int(1), Value::new(1, 2), Value::int(1)];
        let gs = GenSeq::from_polys(Chart::new("T", 1), keys, values).unwrap();
        let r = validate(&gs);
        assert!(!r.passed);
        assert_eq!(r.first_failure().unwrap().i, 1);
        assert_eq!(r.entries[1].growth, Some(false));
    }
}
