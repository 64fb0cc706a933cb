//! Exponent-matrix reductions for monomial extensions `u = γ x^a y^b`, `v = τ x^c y^d`.
//!
//! - [`det_index`], [`smith_normal_form`]: the index `e = |det A|` of rank-2 extensions.
//! - [`euclidean_reduce`]: the substitution word making both first exponents `gcd`.
//! - [`graded_presentation_rank1`], [`graded_presentation_rank2`]: relation data of the graded rings.
//! - [`check_min_formula`], [`semigroup_decomposition`]: the value-level content of the presentations.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::algebra::{FieldElem, Poly2};
use crate::error::{Error, Result};
use crate::genseq::graded::ChartPoly;
use crate::genseq::{semigroup::semigroup_of, ValSemigroup};
use crate::transforms::{defect_from_stable, stable_form, StableForm};
use crate::values::{order_in_quotient, Value, ValueGroup};

/// `[[a, b], [c, d]]`: `u = x^a y^b`, `v = x^c y^d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Matrix2(pub [[i64; 2]; 2]);

impl Matrix2 {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Matrix2([[a, b], [c, d]])
    }

    pub fn det(&self) -> i64 {
        let [[a, b], [c, d]] = self.0;
        a * d - b * c
    }
}

impl fmt::Display for Matrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = self.0;
        write!(f, "({a} {b}; {c} {d})")
    }
}

impl std::str::FromStr for Matrix2 {
    type Err = Error;
    /// `a,b,c,d`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<i64> = s
            .split(',')
            .map(|t| t.trim().parse::<i64>().map_err(|e| Error::BadParams(format!("matrix entry {t:?}: {e}"))))
            .collect::<Result<_>>()?;
        match parts[..] {
            [a, b, c, d] => Ok(Matrix2::new(a, b, c, d)),
            _ => Err(Error::BadParams(format!("expected 4 matrix entries, got {}", parts.len()))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct MonomialExtension {
    pub matrix: Matrix2,
    pub unit_residues: Option<(FieldElem, FieldElem)>,
    /// `ν*(x_1)`, `ν*(y_1)`.
    pub values: (Value, Value),
}

impl MonomialExtension {
    /// `(ν(u), ν(v))`.
    pub fn lower_values(&self) -> (Value, Value) {
        let [[a, b], [c, d]] = self.matrix.0;
        let (x, y) = &self.values;
        (x.scale(a) + y.scale(b), x.scale(c) + y.scale(d))
    }
}

/// `|det A|`.
pub fn det_index(m: &Matrix2) -> Result<u64> {
    match m.det() {
        0 => Err(Error::Singular),
        d => Ok(d.unsigned_abs()),
    }
}

/// Invariant factors `(d_1, d_2)` with `d_1 | d_2` by row and column reduction.
pub fn smith_normal_form(m: &Matrix2) -> Result<(u64, u64)> {
    let mut a = m.0;
    if m.det() == 0 {
        return Err(Error::Singular);
    }
    loop {
        // move a smallest nonzero entry to (0, 0)
        let (mut bi, mut bj) = (0, 0);
        for i in 0..2 {
            for j in 0..2 {
                if a[i][j] != 0 && (a[bi][bj] == 0 || a[i][j].abs() < a[bi][bj].abs()) {
                    (bi, bj) = (i, j);
                }
            }
        }
        a.swap(0, bi);
        for row in a.iter_mut() {
            row.swap(0, bj);
        }
        let piv = a[0][0];
        let q = a[1][0].div_euclid(piv);
        a[1][0] -= q * piv;
        a[1][1] -= q * a[0][1];
        let q = a[0][1].div_euclid(piv);
        a[0][1] -= q * piv;
        a[1][1] -= q * a[1][0];
        if a[1][0] == 0 && a[0][1] == 0 {
            if a[1][1] % piv == 0 {
                return Ok((piv.unsigned_abs(), a[1][1].unsigned_abs()));
            }
            // fold the corner into the first row and continue
            a[0][1] = a[1][1];
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Substitution {
    /// `û_i = û_{i+1} v̂_{i+1}`.
    U,
    /// `v̂_i = û_{i+1} v̂_{i+1}`.
    V,
}

#[derive(Clone, Debug, Serialize)]
pub struct Reduction {
    pub s: i64,
    pub t1: i64,
    pub t2: i64,
    /// Run-length encoded substitution word, including the final division.
    pub word: Vec<(Substitution, u64)>,
    pub det: i64,
    /// `s |t1 - t2| = |det|`.
    pub identity_ok: bool,
}

impl Reduction {
    pub fn steps(&self) -> u64 {
        self.word.iter().map(|(_, k)| k).sum()
    }

    pub fn word_string(&self) -> String {
        self.word.iter().map(|(s, k)| format!("{s:?}^{k}")).collect::<Vec<_>>().join(" ")
    }
}

const MAX_ROUNDS: usize = 10_000;

/// Rows `(s_u, t_u)`, `(s_v, t_v)`: exponents of `x_1, y_1` in `u` and `v`.
pub fn euclidean_reduce(m: &Matrix2) -> Result<Reduction> {
    let [[mut su, mut tu], [mut sv, mut tv]] = m.0;
    if su <= 0 || sv <= 0 {
        return Err(Error::BadParams("first-column exponents must be positive".into()));
    }
    let mut word: Vec<(Substitution, u64)> = Vec::new();
    let mut push = |s: Substitution, k: u64| {
        if k == 0 {
            return;
        }
        match word.last_mut() {
            Some((last, n)) if *last == s => *n += k,
            _ => word.push((s, k)),
        }
    };
    let mut rounds = 0;
    while su != sv {
        rounds += 1;
        if rounds > MAX_ROUNDS {
            return Err(Error::NonTermination(MAX_ROUNDS));
        }
        if su > sv {
            // u <- u / v while the exponent stays positive
            let k = (su - 1) / sv;
            su -= k * sv;
            tu -= k * tv;
            push(Substitution::U, k as u64);
        } else {
            let k = (sv - 1) / su;
            sv -= k * su;
            tv -= k * tu;
            push(Substitution::V, k as u64);
        }
    }
    let det = m.det();
    if tu != tv {
        push(if tv > tu { Substitution::V } else { Substitution::U }, 1);
    }
    let identity_ok = su * (tu - tv).abs() == det.abs();
    let word = std::mem::take(&mut word);
    Ok(Reduction { s: su, t1: tu, t2: tv, word, det, identity_ok })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PresentationRelation {
    pub exps: Vec<u64>,
    /// Opaque class on the right-hand side, e.g. `[γ1]^-1[u1]`.
    pub class: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedPresentation {
    pub rank: u8,
    pub relations: Vec<PresentationRelation>,
    /// `[QF(S1) : QF(R1)]`.
    pub degree: u64,
}

/// `gr(S1) = (gr(R1) ⊗ k') [Z] / (Z^e - [γ1]^{-1}[u1])`.
pub fn graded_presentation_rank1(e: u64, f: u64) -> Result<GradedPresentation> {
    if e == 0 || f == 0 {
        return Err(Error::BadParams("e and f must be positive".into()));
    }
    Ok(GradedPresentation {
        rank: 1,
        relations: vec![PresentationRelation { exps: vec![e], class: "[γ1]^-1[u1]".into() }],
        degree: e * f,
    })
}

/// `(X^a Y^b - [γ1]^{-1}[u1], X^c Y^d - [τ1]^{-1}[v1])`.
pub fn graded_presentation_rank2(m: &Matrix2, f: u64) -> Result<GradedPresentation> {
    let e = det_index(m)?;
    if m.0.iter().flatten().any(|&x| x < 0) {
        return Err(Error::BadParams("exponents must be nonnegative".into()));
    }
    let [[a, b], [c, d]] = m.0;
    Ok(GradedPresentation {
        rank: 2,
        relations: vec![
            PresentationRelation { exps: vec![a as u64, b as u64], class: "[γ1]^-1[u1]".into() },
            PresentationRelation { exps: vec![c as u64, d as u64], class: "[τ1]^-1[v1]".into() },
        ],
        degree: e * f,
    })
}

/// The values `γ + j·ν*(y1)`, `γ ∈ gammas`, `0 <= j < e`, are pairwise distinct.
pub fn check_min_formula(gamma_nu: &ValueGroup, y_value: &Value, e: u64, gammas: &[Value]) -> Result<bool> {
    let order = order_in_quotient(y_value, gamma_nu)?;
    if order != e {
        return Err(Error::OrderMismatch { expected: e, actual: order });
    }
    if gammas.iter().any(|g| !gamma_nu.contains(g)) {
        return Ok(false);
    }
    let mut seen = BTreeSet::new();
    for j in 0..e {
        for g in gammas {
            if !seen.insert(g.clone() + y_value.scale(j as i64)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Each `τ ∈ S_big`, `τ <= B - e·y`, is `γ + i·y` for exactly one `0 <= i < e`
/// with `γ` in the group generated by `S_small`.
pub fn semigroup_decomposition(
    big: &ValSemigroup,
    small: &ValSemigroup,
    y_value: &Value,
    e: u64,
    bound: &Value,
) -> bool {
    let g = ValueGroup::generated_by(small.elements.iter());
    let limit = bound.clone() - y_value.scale(e as i64);
    big.elements
        .iter()
        .take_while(|t| **t <= limit)
        .all(|t| (0..e).filter(|&i| g.contains(&(t.clone() - y_value.scale(i as i64)))).count() == 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CaseLabel {
    /// Residue transcendence 1: a DVR.
    Dvr,
    /// Rational rank 2: monomial with `e = |det|`.
    Rank2Monomial,
    /// Rational rank 1, algebraic residue field.
    Rank1,
}

impl CaseLabel {
    /// The defect is forced to vanish.
    pub fn defectless(&self) -> bool {
        !matches!(self, CaseLabel::Rank1)
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseLabel::Dvr => "dvr",
            CaseLabel::Rank2Monomial => "rank-2-monomial",
            CaseLabel::Rank1 => "rank-1",
        })
    }
}

pub fn classify_case(rational_rank: u8, residue_trdeg: u8) -> Result<CaseLabel> {
    if rational_rank == 0 || rational_rank + residue_trdeg > 2 {
        return Err(Error::AbhyankarViolation { rank: rational_rank as u32, trdeg: residue_trdeg as u32 });
    }
    Ok(match (rational_rank, residue_trdeg) {
        (1, 1) => CaseLabel::Dvr,
        (2, _) => CaseLabel::Rank2Monomial,
        _ => CaseLabel::Rank1,
    })
}

/// A rank-1 monomial extension `u = γ x^a`, `v = x^b y^d` over `Γ_ν = (1/den) Z`.
#[derive(Clone, Debug)]
pub struct Rank1Instance {
    pub gamma_nu: ValueGroup,
    /// `ν*(x)`.
    pub x_value: Value,
    pub u: ChartPoly,
    pub v: ChartPoly,
}

impl Rank1Instance {
    /// `ν*(x) = k / (den·e)` with `gcd(k, e) = 1`; `e | a` so that `ν(u) ∈ Γ_ν`.
    pub fn new(den: u64, e: u64, k: u64, a: u32, b: u32, d: u32, gamma: Poly2) -> Result<Self> {
        if e == 0 || den == 0 || d == 0 || k.gcd(&e) != 1 || !gamma.is_unit() {
            return Err(Error::BadParams("need gcd(k, e) = 1, d > 0 and a unit γ".into()));
        }
        if a as u64 % e != 0 {
            return Err(Error::BadParams(format!("ν(u) = {a}·{k}/{} is not in Γ_ν", den * e)));
        }
        let field = gamma.field();
        let u = gamma.mul_monomial(field.one(), a, 0);
        let v = Poly2::monomial(field.one(), b, d);
        Ok(Rank1Instance {
            gamma_nu: ValueGroup::from_denominator(den),
            x_value: Value::new(k as i64, (den * e) as i64),
            u: ChartPoly::poly(u),
            v: ChartPoly::poly(v),
        })
    }

    /// `e = ` order of `ν*(x)` modulo `Γ_ν`.
    pub fn e(&self) -> Result<u64> {
        order_in_quotient(&self.x_value, &self.gamma_nu)
    }

    pub fn stable_form(&self) -> Result<StableForm> {
        stable_form(&self.u, &self.v)
    }

    /// `δ` from the degree formula with `f = f_res = 1`.
    pub fn defect(&self) -> Result<u32> {
        let sf = self.stable_form()?;
        let p = self.u.num.field().p() as u64;
        Ok(defect_from_stable(&sf, self.e()?, 1, 1, p)?.defect_exponent)
    }
}

/// Semigroups of `ν*` on `k[x, y]` and of `ν` on `k[u, v]` for `u = x^e`, `v = y`,
/// with `ν*(x) = k/e`, `ν*(y) = t`, below `bound`.
pub fn monomial_semigroups(e: u64, k: u64, t: u64, bound: &Value) -> Result<(ValSemigroup, ValSemigroup)> {
    let xv = Value::new(k as i64, e as i64);
    let yv = Value::int(t as i64);
    let big = semigroup_of(&[xv.clone(), yv.clone()], bound)?;
    let small = semigroup_of(&[xv.scale(e as i64), yv], bound)?;
    Ok((big, small))
}
