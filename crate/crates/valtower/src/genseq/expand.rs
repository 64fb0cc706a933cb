//! Standard expansions in key polynomials and the valuation they define.

use crate::algebra::{FieldElem, Poly2};
use crate::error::{Error, Result};
use crate::values::Value;

use super::graded::{Element, Evaluator, KeyAtoms};
use super::GenSeq;

/// `f = sum c · x^{m_0} K_1^{m_1} ... K_k^{m_k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardExpansion {
    pub terms: Vec<(FieldElem, Vec<u32>)>,
}

impl StandardExpansion {
    pub fn term_value(values: &[Value], m: &[u32]) -> Value {
        m.iter().zip(values).map(|(&e, v)| v.scale(e as i64)).sum()
    }

    /// The unique term of least value.
    pub fn minimal_term(&self, values: &[Value]) -> Result<(FieldElem, Vec<u32>)> {
        let mut best: Option<(Value, usize, usize)> = None;
        for (k, (_, m)) in self.terms.iter().enumerate() {
            let v = Self::term_value(values, m);
            best = match best {
                None => Some((v, k, 1)),
                Some((bv, bk, n)) => match v.cmp(&bv) {
                    std::cmp::Ordering::Less => Some((v, k, 1)),
                    std::cmp::Ordering::Equal => Some((bv, bk, n + 1)),
                    std::cmp::Ordering::Greater => Some((bv, bk, n)),
                },
            };
        }
        match best {
            None => Err(Error::InvalidSequence("expansion of zero".into())),
            Some((_, _, n)) if n > 1 => {
                Err(Error::InvalidSequence(format!("{n} standard terms share the minimal value")))
            }
            Some((_, k, _)) => Ok(self.terms[k].clone()),
        }
    }

    /// Multiplies the expansion back out.
    pub fn sum(&self, keys: &[Poly2]) -> Poly2 {
        let field = keys[0].field();
        let mut out = Poly2::zero(field);
        for (c, m) in &self.terms {
            let mut t = Poly2::monomial(*c, m[0], 0);
            for (i, &e) in m.iter().enumerate().skip(1) {
                if e > 0 {
                    t = &t * &keys[i].pow(e as u64);
                }
            }
            out = &out + &t;
        }
        out
    }
}

fn rec(f: &Poly2, keys: &[Poly2], top: usize, digits: &mut [u32], out: &mut Vec<(FieldElem, Vec<u32>)>) -> Result<()> {
    if f.is_zero() {
        return Ok(());
    }
    if top == 0 {
        for (c, a, b) in f.terms() {
            debug_assert_eq!(b, 0, "remainder below K_1 must be free of y");
            let mut m = digits.to_vec();
            m[0] = a;
            out.push((c, m));
        }
        return Ok(());
    }
    if f.deg_y() < keys[top].deg_y() {
        digits[top] = 0;
        return rec(f, keys, top - 1, digits, out);
    }
    let mut q = f.clone();
    let mut k = 0u32;
    while !q.is_zero() {
        let (next, r) = q.divrem_y(&keys[top])?;
        digits[top] = k;
        rec(&r, keys, top - 1, digits, out)?;
        q = next;
        k += 1;
    }
    digits[top] = 0;
    Ok(())
}

/// Expansion in `keys[0..=top]` with unbounded exponent on `keys[top]`.
pub fn expand_top(f: &Poly2, keys: &[Poly2], top: usize, _bound: Option<u64>) -> Result<StandardExpansion> {
    let mut digits = vec![0u32; top + 1];
    let mut terms = Vec::new();
    rec(f, keys, top, &mut digits, &mut terms)?;
    Ok(StandardExpansion { terms })
}

fn require_valid(gs: &GenSeq) -> Result<&[Poly2]> {
    let keys = gs
        .poly_keys()
        .ok_or_else(|| Error::NotApplicable("expansion needs polynomial keys; use the graded evaluator".into()))?;
    let report = super::validate(gs);
    if !report.passed {
        let i = report.first_failure().map(|e| e.i).unwrap_or(0);
        return Err(Error::InvalidSequence(format!("validation fails at i = {i}")));
    }
    Ok(keys)
}

/// Standard expansion with `0 <= m_i < n_i` for `i >= 1`.
pub fn expand(f: &Poly2, gs: &GenSeq) -> Result<StandardExpansion> {
    let keys = require_valid(gs)?;
    let n = gs.top();
    let span = gs.degrees[n] * gs.indices[n];
    let degree = f.deg_y().unwrap_or(0) as u64;
    if n >= 1 && degree >= span {
        return Err(Error::SequenceTooShort { degree, span });
    }
    expand_top(f, keys, n, None)
}

/// `nu(f)`: the least value among standard terms.
pub fn value_of(f: &Poly2, gs: &GenSeq) -> Result<Value> {
    if f.is_zero() {
        return Err(Error::Indeterminate);
    }
    let e = expand(f, gs)?;
    let (_, m) = e.minimal_term(&gs.values)?;
    Ok(StandardExpansion::term_value(&gs.values, &m))
}

/// `nu(num / den)` for a unit `den`.
pub fn value_of_unit_fraction(num: &Poly2, den: &Poly2, gs: &GenSeq) -> Result<Value> {
    if !den.is_unit() {
        return Err(Error::NotAUnit);
    }
    value_of(num, gs)
}

/// Residue of `f/g` when `nu(f) = nu(g)`.
pub fn residue_of_quotient(f: &Poly2, g: &Poly2, gs: &GenSeq) -> Result<FieldElem> {
    let (vf, vg) = (value_of(f, gs)?, value_of(g, gs)?);
    if vf != vg {
        return Err(Error::ValueMismatch(vf.to_string(), vg.to_string()));
    }
    let (cf, mf) = expand(f, gs)?.minimal_term(&gs.values)?;
    let (cg, mg) = expand(g, gs)?.minimal_term(&gs.values)?;
    if mf == mg {
        return Ok(cf / cg);
    }
    // distinct standard monomials of equal value: normalize the quotient in the graded ring
    let atoms = KeyAtoms::explicit_only(gs);
    let mut ev = Evaluator::valuation(gs, &atoms)?;
    let q = Element::poly(f.clone()).times(&Element::poly(g.clone()).inverse());
    let data = ev.element(&q)?;
    if data.mono.iter().any(|&m| m != 0) {
        return Err(Error::NotInField);
    }
    Ok(data.residue)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;
    use crate::genseq::{build_tower_seq, Family};

    #[test]
    fn expansion_examples() {
        let q = build_tower_seq(Family::Q, 2, 0, 3).unwrap();
        let f = q.field;
        let (x, y) = (Poly2::x(f), Poly2::y(f));
        let e = expand(&x.pow(3), &q).unwrap();
        assert_eq!(e.terms, vec![(f.one(), vec![3, 0, 0, 0])]);
        let e = expand(&y.pow(4), &q).unwrap();
        let mut t = e.terms.clone();
        t.sort_by(|a, b| a.1.cmp(&b.1));
        assert_eq!(t, vec![(f.one(), vec![0, 0, 1, 0]), (f.one(), vec![1, 0, 0, 0])]);
        let keys = q.poly_keys().unwrap();
        let e = expand(&(&keys[2] * &y), &q).unwrap();
        assert_eq!(e.terms, vec![(f.one(), vec![0, 1, 1, 0])]);
    }

    #[test]
    fn value_examples() {
        let u = build_tower_seq(Family::U, 2, 1, 3).unwrap();
        let f = u.field;
        assert_eq!(value_of(&Poly2::x(f), &u).unwrap(), Value::int(1));
        assert_eq!(value_of(&Poly2::y(f), &u).unwrap(), Value::new(1, 2));
        let q = build_tower_seq(Family::Q, 2, 0, 3).unwrap();
        assert_eq!(value_of(&Poly2::y(f).pow(4), &q).unwrap(), Value::int(1));
        let big = Poly2::y(f).pow(64);
        assert!(matches!(value_of(&big, &q), Err(Error::SequenceTooShort { .. })));
    }

    #[test]
    fn residue_examples() {
        let u = build_tower_seq(Family::U, 2, 1, 3).unwrap();
        let f = u.field;
        let v = Poly2::y(f);
        assert_eq!(residue_of_quotient(&v.pow(2), &Poly2::x(f), &u).unwrap(), f.one());
        let u3 = build_tower_seq(Family::Q, 3, 0, 3).unwrap();
        let f3 = u3.field;
        let g = &Poly2::y(f3) + &Poly2::x(f3);
        assert_eq!(residue_of_quotient(&g.scale(f3.from_int(2)), &g, &u3).unwrap(), f3.from_int(2));
        assert!(matches!(residue_of_quotient(&Poly2::x(f), &Poly2::y(f), &u), Err(Error::ValueMismatch(_, _))));
        let _ = Field::prime(2);
    }
}
