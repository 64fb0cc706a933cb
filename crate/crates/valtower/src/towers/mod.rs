//! The Artin-Schreier tower `K -> K1 -> K*`.
//!
//! `K* = k(x, y)`, `K1 = k(x, v)` with `v = y^p - x^c y`, `K = k(u, v)` with
//! `u = x^p / (1 - x^{p-1})`.  The valuation on `K*` is given by the Q keys in
//! `S = k[x,y]`, its restriction to `K1` by the U keys in `A = k[x,v]` and to `K`
//! by the P keys in `R = k[u,v]`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{Field, Poly2};
use crate::error::{Error, Result};
use crate::genseq::graded::{ChartPoly, Element, Embed, Evaluator, KeyAtoms};
use crate::genseq::{build_tower_seq, validate, value_of, Family, FamilyRule, GenSeq};
use crate::transforms::transform_chain;
use crate::values::{beta_bar, group_join, stage_group, Value, ValueGroup};

#[derive(Clone, Debug)]
pub struct Tower {
    pub p: u64,
    pub c: u64,
    pub n: usize,
    pub field: Field,
    /// Q keys in `S`.
    pub q: GenSeq,
    /// U keys in `A`.
    pub u: GenSeq,
    /// P keys in `R`, values normalized by `ν(x) = 1` (so `ν(u) = p`).
    pub r: GenSeq,
}

/// Builds and validates the three sequences with keys `0..=n`.
pub fn build_tower(p: u64, c: u64, n: usize) -> Result<Tower> {
    if p < 2 || c == 0 || c % (p - 1) != 0 {
        return Err(Error::BadParams(format!("p - 1 must divide c (p = {p}, c = {c})")));
    }
    let q = build_tower_seq(Family::Q, p, 0, n)?;
    let u = build_tower_seq(Family::U, p, c, n)?;
    let r = build_tower_seq(Family::P, p, 0, n)?.scaled(&Value::int(p as i64));
    for gs in [&q, &u, &r] {
        let rep = validate(gs);
        if !rep.passed {
            let i = rep.first_failure().map(|e| e.i).unwrap_or(0);
            return Err(Error::InvalidSequence(format!("{} fails validation at i = {i}", gs.chart)));
        }
    }
    Ok(Tower { p, c, n, field: q.field, q, u, r })
}

impl Tower {
    /// The recursion of `family`; `c` also fixes the substitution `v = y^p - x^c y`.
    pub fn rule(&self, family: Family) -> FamilyRule {
        FamilyRule { family, p: self.p, c: self.c }
    }

    /// Keys of `family` as atoms in the chart of `embed`.
    pub fn atoms(&self, family: Family, embed: Embed) -> Result<KeyAtoms> {
        KeyAtoms::family_in(self.rule(family), embed)
    }

    /// `v = y^p - x^c y`.
    pub fn v_def(&self) -> Poly2 {
        &Poly2::y(self.field).pow(self.p) - &Poly2::monomial(self.field.one(), self.c as u32, 1)
    }

    /// `u = x^p / (1 - x^{p-1})`.
    pub fn u_def(&self) -> ChartPoly {
        ChartPoly { num: Poly2::x(self.field).pow(self.p), w_pow: -1 }
    }

    /// U keys `0..=n` written in `(x, y)`.
    pub fn u_keys_in_s(&self, n: usize) -> Result<Vec<Poly2>> {
        let atoms = self.atoms(Family::U, Embed::UinS)?;
        (0..=n).map(|i| atoms.explicit(i).map(|cp| cp.num)).collect()
    }

    /// `Γ_{i-1}` generated by the U values `γ_0..γ_{i-1}`.
    pub fn stage(&self, i: usize) -> ValueGroup {
        self.u.values[..i].iter().fold(ValueGroup::trivial(), |g, v| group_join(&g, v))
    }
}

/// `E_j` of the key comparison: `p^{2j-2} Σ_{t<=(j-1)/2} p^{-4t}` (j odd), `p^{2j-1} Σ_{t<j/2} p^{-4t}` (j even).
pub fn key_comparison_exponent(j: usize, p: u64) -> Value {
    let j = j as i64;
    let (lead, terms) = if j % 2 == 1 { (2 * j - 2, (j - 1) / 2 + 1) } else { (2 * j - 1, j / 2) };
    let sum: Value = (0..terms).map(|t| Value::pow_of(p, -4 * t)).sum();
    Value::pow_of(p, lead) * sum
}

#[derive(Clone, Debug, Serialize)]
pub struct KeyComparisonReport {
    pub j: usize,
    pub exponent: Value,
    pub precision: u32,
    /// x-order of `U_{j+1} - Q_{j+1}^{(p)}` mod `x^M`.
    pub x_order: u32,
    pub deg_y: u32,
    pub expected_deg_y: u64,
    pub difference: String,
    pub ok: bool,
}

fn key_difference(t: &Tower, j: usize) -> Result<Poly2> {
    if j == 0 || j + 1 > t.n {
        return Err(Error::SequenceTooShort { degree: j as u64 + 1, span: t.n as u64 });
    }
    let uj = t.u_keys_in_s(j + 1)?.pop().expect("nonempty");
    let qj = &t.q.poly_keys().expect("level 1")[j + 1];
    let qj = if j % 2 == 1 { qj.clone() } else { qj.pow(t.p) };
    Ok(&uj - &qj)
}

/// Least `M` for which the comparison is decisive mod `x^M`.
pub fn key_comparison_precision(t: &Tower, j: usize) -> Result<u32> {
    let diff = key_difference(t, j)?;
    let e = key_comparison_exponent(j, t.p);
    let e: u32 = e.numer().try_into().map_err(|_| Error::Overflow("exponent".into()))?;
    let top = diff.deg_y().ok_or(Error::Indeterminate)?;
    let lead_x = diff.y_coeff(top).x_order()?;
    Ok((lead_x + 1).max(e + 2))
}

/// Checks `U_{j+1} = Q_{j+1} + x^E f` (j odd) or `U_{j+1} = Q_{j+1}^p + x^E f` (j even)
/// with `x | f` and the stated `deg_y f`, modulo `x^M`.
pub fn verify_key_comparison(t: &Tower, j: usize, m: u32) -> Result<KeyComparisonReport> {
    let needed = key_comparison_precision(t, j)?;
    if m < needed {
        return Err(Error::PrecisionTooLow { given: m, needed });
    }
    let e = key_comparison_exponent(j, t.p);
    let diff = key_difference(t, j)?.truncate_x(m);
    let x_order = diff.x_order()?;
    let deg_y = diff.deg_y().unwrap_or(0);
    let expected_deg_y = if j % 2 == 1 { t.p.pow(2 * j as u32 - 1) } else { t.p.pow(2 * j as u32) };
    let ok = e.is_integer() && Value::int(x_order as i64) > e && deg_y as u64 == expected_deg_y;
    let difference = if diff.len() <= 8 { diff.to_string() } else { format!("{} terms", diff.len()) };
    Ok(KeyComparisonReport { j, exponent: e, precision: m, x_order, deg_y, expected_deg_y, difference, ok })
}

#[derive(Clone, Debug, Serialize)]
pub struct ValueComparison {
    pub j: usize,
    /// `ν*(U_{j+1})` computed in `S`.
    pub nu_u: Value,
    /// `β_{j+1}` (j odd) or `p·β_{j+1}` (j even).
    pub expected: Value,
    /// `E_j + 1`, the bound of the strict inequality.
    pub bound: Value,
    pub equality_ok: bool,
    pub inequality_ok: bool,
}

/// `ν*(U_{j+1}) = ν*(Q_{j+1})` (j odd) or `p ν*(Q_{j+1})` (j even), and `expected < E_j + 1`.
pub fn verify_value_comparison(t: &Tower, j: usize) -> Result<ValueComparison> {
    let uj = t.u_keys_in_s(j + 1)?.pop().expect("nonempty");
    let nu_u = value_of(&uj, &t.q)?;
    let b = beta_bar(j + 1, t.p);
    let expected = if j % 2 == 1 { b } else { b.scale(t.p as i64) };
    let bound = key_comparison_exponent(j, t.p) + Value::int(1);
    Ok(ValueComparison { j, equality_ok: nu_u == expected, inequality_ok: expected < bound, nu_u, expected, bound })
}

#[derive(Clone, Debug, Serialize)]
pub struct RestrictionMismatch {
    pub g: String,
    pub in_a: String,
    pub in_s: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RestrictionReport {
    pub samples: usize,
    pub checked: usize,
    pub mismatches: Vec<RestrictionMismatch>,
}

/// Random `g(x, v)` with x-degree at most `x_bound`: `ν1(g)` in `A` against `ν*(g(x, y^p - x^c y))` in `S`.
pub fn verify_restriction(t: &Tower, sample_size: usize, x_bound: u32, seed: u64) -> Result<RestrictionReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u_keys = t.u.poly_keys().expect("level 1");
    // keep deg_v g below the span of both sequences
    let span_a = t.u.degrees[t.n] * t.u.indices[t.n];
    let span_s = t.q.degrees[t.n] * t.q.indices[t.n] / t.p;
    let max_deg = span_a.min(span_s).saturating_sub(1).min(64) as u32;
    let v_s = t.v_def();
    let mut mismatches = Vec::new();
    let mut checked = 0;
    for s in 0..sample_size {
        let g = match s % 3 {
            // a product of keys plus noise of higher value
            0 => {
                let i = rng.gen_range(0..u_keys.len().min(4));
                let k = &u_keys[i] * &Poly2::monomial(t.field.one(), rng.gen_range(0..=x_bound), 0);
                let extra =
                    Poly2::monomial(t.field.from_int(rng.gen_range(1..t.p as i64)), x_bound + 1, rng.gen_range(0..4));
                &k + &extra
            }
            _ => {
                let terms = rng.gen_range(1..=5);
                Poly2::from_terms(
                    t.field,
                    (0..terms).map(|_| {
                        (
                            t.field.from_int(rng.gen_range(1..t.p as i64)),
                            rng.gen_range(0..=x_bound),
                            rng.gen_range(0..=max_deg),
                        )
                    }),
                )
            }
        };
        if g.is_zero() || g.deg_y().unwrap_or(0) > max_deg {
            continue;
        }
        let in_a = value_of(&g, &t.u);
        let in_s = value_of(&g.subs_y(&v_s), &t.q);
        checked += 1;
        match (&in_a, &in_s) {
            (Ok(a), Ok(b)) if a == b => {}
            _ => mismatches.push(RestrictionMismatch {
                g: g.display_with("x", "v"),
                in_a: in_a.map(|v| v.to_string()).unwrap_or_else(|e| e.to_string()),
                in_s: in_s.map(|v| v.to_string()).unwrap_or_else(|e| e.to_string()),
            }),
        }
    }
    Ok(RestrictionReport { samples: sample_size, checked, mismatches })
}

#[derive(Clone, Debug, Serialize)]
pub struct ParamCheck {
    pub relation: String,
    pub lhs: Value,
    pub rhs: Value,
    /// `lhs = factor · rhs` is expected.
    pub factor: u64,
    /// Residue of `lhs / rhs^factor` when it is a unit.
    pub residue: Option<String>,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ParamReport {
    pub j: usize,
    pub checks: Vec<ParamCheck>,
}

impl ParamReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

/// `lower / upper^k` evaluated in the valuation of `target` (level 1): value and residue.
fn unit_quotient(
    target: &GenSeq,
    lower_atoms: &KeyAtoms,
    lower: &[i64],
    upper: &[i64],
    k: i64,
) -> Result<(Value, Option<String>)> {
    let native = KeyAtoms::native(target);
    let mut ev_lo = Evaluator::valuation(target, lower_atoms)?;
    let mut ev_up = Evaluator::valuation(target, &native)?;
    let lo = ev_lo.element(&Element::from_vec(lower))?;
    let up = ev_up.element(&Element::from_vec(upper))?;
    let value = lo.value.clone() - up.value.scale(k);
    let mono: Vec<i64> = lo.mono.iter().zip(&up.mono).map(|(a, b)| a - k * b).collect();
    let (c, m) = ev_up.reduce(&mono)?;
    let residue = (value.is_zero() && m.iter().all(|&e| e == 0))
        .then(|| (lo.residue * up.residue.pow(-k).expect("nonzero") * c).to_string());
    Ok((value, residue))
}

/// Parameter relations between `S_{j+1}`, `A_{j+1}` and `R_{j+1}` at the level of values
/// and leading residues.
pub fn verify_param_relations(t: &Tower, j: usize) -> Result<ParamReport> {
    let lv = j + 1;
    let qc = transform_chain(&t.q, lv)?;
    let uc = transform_chain(&t.u, lv)?;
    let rc = transform_chain(&t.r, lv)?;
    let (s, a, r) = (&qc[lv - 1], &uc[lv - 1], &rc[lv - 1]);
    let p = t.p;
    let odd = j % 2 == 1;
    let u_in_s = t.atoms(Family::U, Embed::UinS)?;
    let p_in_a = t.atoms(Family::P, Embed::PinA)?;
    let mut checks = Vec::new();
    let mut push = |relation: &str,
                    target: &GenSeq,
                    atoms: &KeyAtoms,
                    lo: &GenSeq,
                    li: usize,
                    up: &GenSeq,
                    ui: usize,
                    factor: u64|
     -> Result<()> {
        let lhs = lo.values[li].clone();
        let rhs = up.values[ui].clone();
        let (q, residue) = unit_quotient(target, atoms, &lo.key_vec(li), &up.key_vec(ui), factor as i64)?;
        let ok = lhs == rhs.scale(factor as i64) && q.is_zero() && residue.is_some();
        checks.push(ParamCheck { relation: relation.into(), lhs, rhs, factor, residue, ok });
        Ok(())
    };
    let (fx, fv) = if odd { (p, 1) } else { (1, p) };
    push("x_A = τ x_S^k", &t.q, &u_in_s, a, 0, s, 0, fx)?;
    push("v_A = γ y_S^k + x_S Ω", &t.q, &u_in_s, a, 1, s, 1, fv)?;
    let (gx, gv) = if odd { (1, p) } else { (p, 1) };
    push("u_R = σ x_A^k", &t.u, &p_in_a, r, 0, a, 0, gx)?;
    push("v_R = λ v_A^k + x_A Λ", &t.u, &p_in_a, r, 1, a, 1, gv)?;
    Ok(ParamReport { j, checks })
}

/// `Γ_{i-1}` from the values against its closed form, for `1 <= i <= upto`.
pub fn verify_stages(t: &Tower, upto: usize) -> Vec<(usize, bool)> {
    (1..=upto.min(t.n + 1)).map(|i| (i, t.stage(i) == stage_group(i, t.p))).collect()
}
