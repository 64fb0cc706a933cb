//! Composite quadratic transforms along a valuation and the invariants they expose.
//!
//! - [`composite_transform`]: one step `R_k -> R_{k+1}` of the sequence of quadratic
//!   transforms, carrying the generating sequence along.
//! - [`stable`]: stable forms `(a, ā, α, b, d, β)` and the defect they determine.
//! - [`ladder`]: the α/β table of the tower example over several levels.

pub mod ladder;
pub mod stable;

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{FieldElem, Poly2};
use crate::error::{Error, Result};
use crate::genseq::graded::{Element, Evaluator, KeyAtoms};
use crate::genseq::{compute_indices, Chart, Family, FamilyRule, GenSeq, Keys, Relation};
use crate::values::Value;

pub use ladder::{expected_parity, run_tower_ladder, Extension, LadderRow};
pub use stable::{defect_from_stable, stable_form, stable_form_in, ExtensionInvariants, StableForm};

/// The map from the chart of `R_k` to the chart of `R_{k+1}`.
///
/// New parameters: `x' = K_1` and `y'` with `K_0 = r · x'^n (y' + 1)`.
#[derive(Clone, Debug)]
pub struct ChartMap {
    pub source: Chart,
    pub target: Chart,
    pub n: u64,
    /// `r = 1 / c_1`, the residue of `K_0 / K_1^n`.
    pub residue: FieldElem,
    /// `x'` as a Laurent vector over the base keys.
    pub x_new: Vec<i64>,
    /// Closed-form keys rejected in favour of the generic ones.
    pub notes: Vec<String>,
}

impl ChartMap {
    /// `f(r x'^n (y'+1), x')`; only from a level-1 chart whose `K_1` is `y`.
    pub fn substitute(&self, f: &Poly2) -> Result<Poly2> {
        if self.source.level != 1 {
            return Err(Error::NotApplicable("explicit substitution only from level 1".into()));
        }
        let field = f.field();
        let y1 = &Poly2::y(field) + &Poly2::one(field);
        let mut out = Poly2::zero(field);
        for (c, a, b) in f.terms() {
            let coef = c * self.residue.pow(a as i64)?;
            let t = y1.pow(a as u64).mul_monomial(coef, self.n as u32 * a + b, 0);
            out = &out + &t;
        }
        Ok(out)
    }

    /// `f(...) / x'^order`; [`Error::NonPolynomial`] if `x'^order` does not divide.
    pub fn strict_transform(&self, f: &Poly2, order: u32) -> Result<Poly2> {
        let g = self.substitute(f)?;
        if g.is_zero() || g.x_order()? < order {
            return Err(Error::NonPolynomial(format!("x'^{order} does not divide the total transform")));
        }
        Ok(g.div_x_pow(order))
    }
}

fn unit(len: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; len];
    v[i] = 1;
    v
}

fn axpy(v: &mut [i64], k: i64, w: &[i64]) {
    for (a, b) in v.iter_mut().zip(w) {
        *a += k * b;
    }
}

/// One composite transform: `K'_0 = K_1`, `K'_j = K_{j+1} / K_1^{D_{j+1}}`.
pub fn composite_transform(gs: &GenSeq) -> Result<(ChartMap, GenSeq)> {
    if gs.len() < 3 {
        return Err(Error::SequenceTooShort { degree: gs.len() as u64, span: 3 });
    }
    let rel1 = gs.relations[1].as_ref().ok_or_else(|| Error::InvalidSequence("missing relation 1".into()))?;
    if rel1.exps != [1] {
        return Err(Error::NotApplicable(format!(
            "n_1·value(K_1) must equal value(K_0); relation 1 has exponents {:?}",
            rel1.exps
        )));
    }
    let n1 = gs.indices[1];
    let c1 = rel1.coeff;
    let base: Arc<GenSeq> = match &gs.keys {
        Keys::Poly(_) => Arc::new(gs.clone()),
        Keys::Over { base, .. } => base.clone(),
    };
    let blen = base.len();
    let vec1 = gs.key_vec(1);
    let d = &gs.degrees;

    let mut vecs = vec![vec1.clone()];
    let mut values = vec![gs.values[1].clone()];
    let mut degrees = vec![0u64];
    for j in 1..gs.len() - 1 {
        let mut v = gs.key_vec(j + 1);
        axpy(&mut v, -(d[j + 1] as i64), &vec1);
        vecs.push(v);
        values.push(gs.values[j + 1].clone() - gs.values[1].scale(d[j + 1] as i64));
        if d[j + 1] % n1 != 0 {
            return Err(Error::NonPolynomial(format!("D_{} = {} is not divisible by n_1 = {n1}", j + 1, d[j + 1])));
        }
        degrees.push(d[j + 1] / n1);
    }

    let mut relations: Vec<Option<Relation>> = vec![None];
    for i in 2..gs.len() {
        let rel = match gs.relations.get(i).and_then(|r| r.as_ref()) {
            Some(r) => r,
            None => {
                relations.push(None);
                continue;
            }
        };
        let r = &rel.exps;
        let dnext = if i + 1 < gs.len() { d[i + 1] } else { d[i] * gs.indices[i] };
        let r0 = n1 as i64 * r[0] + (1..r.len()).map(|l| d[l] as i64 * r[l]).sum::<i64>() - dnext as i64;
        if r0 < 0 {
            return Err(Error::NonPolynomial(format!("relation {i} acquires x'^{r0}")));
        }
        let mut exps = vec![r0];
        exps.extend_from_slice(&r[2..]);
        relations.push(Some(Relation { coeff: rel.coeff * c1.pow(-r[0])?, exps }));
    }

    let indices = compute_indices(&values)?;
    for j in 1..values.len() {
        if indices[j] != gs.indices[j + 1] {
            return Err(Error::Inconsistent(format!(
                "index {j} is {} after the transform, {} before",
                indices[j],
                gs.indices[j + 1]
            )));
        }
    }

    let level = gs.level() + 1;
    let mut notes = Vec::new();
    if let Some(rule) = base.rule {
        swap_in_closed_forms(&base, rule, level, &mut vecs, &mut notes)?;
    }
    let map = ChartMap {
        source: gs.chart.clone(),
        target: Chart::new(gs.chart.name.clone(), level),
        n: n1,
        residue: c1.inv()?,
        x_new: vecs[0].clone(),
        notes,
    };
    debug_assert!(vecs.iter().all(|v| v.len() == blen));
    let out = GenSeq {
        chart: map.target.clone(),
        field: gs.field,
        keys: Keys::Over { base, vecs },
        values,
        indices,
        degrees,
        relations,
        rule: gs.rule,
    };
    Ok((map, out))
}

/// Sequences at levels `1..=levels`, starting from a level-1 sequence.
pub fn transform_chain(gs: &GenSeq, levels: usize) -> Result<Vec<GenSeq>> {
    let mut out = vec![gs.clone()];
    while out.len() < levels {
        let (_, next) = composite_transform(out.last().expect("nonempty"))?;
        out.push(next);
    }
    Ok(out)
}

fn pw(p: u64, e: i64) -> Option<i64> {
    u32::try_from(e).ok().and_then(|e| (p as i64).checked_pow(e))
}

/// `e_a - x_pow·e_0 - m·e_b` over `len` base keys.
fn quot(len: usize, a: usize, x_pow: Option<i64>, b: Option<(usize, Option<i64>)>) -> Option<Vec<i64>> {
    if a >= len {
        return None;
    }
    let mut v = unit(len, a);
    v[0] -= x_pow?;
    if let Some((b, m)) = b {
        v[b] -= m?;
    }
    Some(v)
}

/// Closed-form keys of the family sequences at `level` (from level 2 on).
pub fn closed_form_keys(rule: FamilyRule, level: usize, base_len: usize) -> Vec<Option<Vec<i64>>> {
    let p = rule.p;
    let k = level as i64;
    let count = base_len.saturating_sub(level - 1);
    (0..count)
        .map(|i| {
            let j = i as i64;
            let a = i + level - 1;
            match (rule.family, level, i) {
                (_, 2, 0) => Some(unit(base_len, 1)),
                (Family::Q | Family::P, 2, _) => quot(base_len, i + 1, pw(p, 2 * (j - 1)), None),
                (Family::Q | Family::P, _, 0) => {
                    quot(base_len, level - 1, pw(p, 2 * (k - 3)), Some((level - 3, Some(1))))
                }
                (Family::Q | Family::P, _, _) => {
                    quot(base_len, a, pw(p, 2 * (j + k - 3)), Some((level - 2, pw(p, 2 * (j - 1)))))
                }
                (Family::U, 2, _) => {
                    let e = if i % 2 == 1 { 2 * j - 2 } else { 2 * j - 1 };
                    quot(base_len, i + 1, pw(p, e), None)
                }
                (Family::U, _, 0) => {
                    let e = if level % 2 == 1 { 2 * k - 6 } else { 2 * k - 5 };
                    quot(base_len, level - 1, pw(p, e), Some((level - 3, Some(1))))
                }
                (Family::U, _, _) => {
                    let (ex, eu) = match (level % 2 == 1, i % 2 == 1) {
                        (true, true) => (2 * (j + k) - 5, 2 * j - 2),
                        (true, false) => (2 * (j + k) - 6, 2 * j - 3),
                        (false, true) => (2 * (j + k) - 6, 2 * j - 2),
                        (false, false) => (2 * (j + k) - 5, 2 * j - 1),
                    };
                    quot(base_len, a, pw(p, ex), Some((level - 2, pw(p, eu))))
                }
            }
        })
        .collect()
}

/// Replaces generic keys by closed forms that differ by a unit with residue 1.
fn swap_in_closed_forms(
    base: &GenSeq,
    rule: FamilyRule,
    level: usize,
    vecs: &mut [Vec<i64>],
    notes: &mut Vec<String>,
) -> Result<()> {
    let closed = closed_form_keys(rule, level, base.len());
    let atoms = KeyAtoms::native(base);
    let mut ev = Evaluator::valuation(base, &atoms)?;
    for (j, cand) in closed.into_iter().enumerate().take(vecs.len()) {
        let Some(cand) = cand else { continue };
        let mut q = cand.clone();
        axpy(&mut q, -1, &vecs[j]);
        if q.iter().all(|&e| e == 0) {
            continue;
        }
        let data = ev.element(&Element::from_vec(&q))?;
        if data.value.is_zero() && data.mono.iter().all(|&m| m == 0) && data.residue == base.field.one() {
            vecs[j] = cand;
        } else {
            notes.push(format!(
                "level {level} key {j}: closed form differs from the generic key by value {} (residue {})",
                data.value, data.residue
            ));
        }
    }
    Ok(())
}

/// One row of the round-trip check: a new key pulled back to the base chart.
#[derive(Clone, Debug, Serialize)]
pub struct RoundTripRow {
    pub level: usize,
    pub j: usize,
    pub key: String,
    pub declared: Value,
    pub pulled_back: Value,
}

impl RoundTripRow {
    pub fn ok(&self) -> bool {
        self.declared == self.pulled_back
    }
}

/// Values of the keys of a derived sequence recomputed from the literal base polynomials.
pub fn verify_round_trip(gs: &GenSeq) -> Result<Vec<RoundTripRow>> {
    let base = gs.base();
    let atoms = KeyAtoms::explicit_only(base);
    let mut ev = Evaluator::valuation(base, &atoms)?;
    (0..gs.len())
        .map(|j| {
            let data = ev.element(&Element::from_vec(&gs.key_vec(j)))?;
            Ok(RoundTripRow {
                level: gs.level(),
                j,
                key: gs.key_string(j),
                declared: gs.values[j].clone(),
                pulled_back: data.value,
            })
        })
        .collect()
}
