//! Stable forms `u = γ x^{ā p^α}`, `v = x^b f`, `d = ν̄(f mod x) = p^β`.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::algebra::FieldElem;
use crate::error::{Error, Result};
use crate::genseq::graded::{ChartPoly, Element, Evaluator, KeyAtoms};
use crate::genseq::GenSeq;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StableForm {
    pub a: u64,
    pub a_bar: u64,
    pub alpha: u32,
    pub b: u64,
    pub d: u64,
    pub beta: u32,
    /// Residue of `γ = u / x^a`.
    #[serde(serialize_with = "ser_elem")]
    pub unit_witness: FieldElem,
}

fn ser_elem<S: serde::Serializer>(e: &FieldElem, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&e.to_string())
}

/// `(k, m)` with `n = m p^k`, `p ∤ m`.
pub fn split_p(n: u64, p: u64) -> (u32, u64) {
    let (mut k, mut m) = (0, n);
    while m > 0 && m % p == 0 {
        m /= p;
        k += 1;
    }
    (k, m)
}

fn log_p(d: u64, p: u64) -> Result<u32> {
    match split_p(d, p) {
        (k, 1) => Ok(k),
        _ => Err(Error::DNotPPower { d, p }),
    }
}

fn assemble(a: u64, b: u64, d: u64, p: u64, unit_witness: FieldElem) -> Result<StableForm> {
    if a == 0 {
        return Err(Error::NotMonomial("u is a unit".into()));
    }
    let (alpha, a_bar) = split_p(a, p);
    let beta = log_p(d, p)?;
    Ok(StableForm { a, a_bar, alpha, b, d, beta, unit_witness })
}

/// Stable form of `(u, v)` given explicitly in a level-1 chart `(x, y)`.
pub fn stable_form(u: &ChartPoly, v: &ChartPoly) -> Result<StableForm> {
    let field = u.num.field();
    let p = field.p() as u64;
    let a = u.num.x_order()?;
    let gamma = u.num.div_x_pow(a);
    if !gamma.is_unit() {
        return Err(Error::NotMonomial(format!("u / x^{a} is not a unit")));
    }
    let b = v.num.x_order()?;
    let f = v.num.div_x_pow(b);
    let d = f.y_order_mod_x()?;
    assemble(a as u64, b as u64, d as u64, p, gamma.constant_term())
}

fn nonneg_int(q: Option<BigInt>, what: &str) -> Result<u64> {
    match q {
        Some(n) if !n.is_negative() => n.to_u64().ok_or_else(|| Error::Overflow(what.into())),
        _ => Err(Error::NotMonomial(format!("{what} is not a nonnegative integer"))),
    }
}

/// Stable form of `(u, v)` in the chart of `target` (any level), with `u`, `v` products of
/// `atoms` (keys of the lower ring embedded in the target's level-1 chart).
pub fn stable_form_in(target: &GenSeq, atoms: &KeyAtoms, u: &Element, v: &Element) -> Result<StableForm> {
    let base = target.base();
    let p = target.p();
    let mut ev = Evaluator::divisor(base, target.level() - 1, atoms)?;
    let xv = &target.values[0];
    let du = ev.element(u)?;
    if du.mult != 0 {
        return Err(Error::NotMonomial(format!("u meets the exceptional divisor off x = 0 (order {})", du.mult)));
    }
    let a = nonneg_int(du.value.div_exact(xv), "order of u")?;
    let dv = ev.element(v)?;
    let b = nonneg_int(dv.value.div_exact(xv), "order of v")?;
    let d = u64::try_from(dv.mult).map_err(|_| Error::NotMonomial("negative order at the center".into()))?;
    assemble(a, b, d, p, du.residue)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionInvariants {
    pub e: u64,
    pub f: u64,
    pub defect_exponent: u32,
}

/// `δ` with `a·d·f_res = e·f·p^δ`.
pub fn defect_from_stable(sf: &StableForm, e: u64, f: u64, f_res: u64, p: u64) -> Result<ExtensionInvariants> {
    if e == 0 || f == 0 || f_res == 0 {
        return Err(Error::BadParams("e, f and f_res must be positive".into()));
    }
    let num = sf.a as u128 * sf.d as u128 * f_res as u128;
    let den = e as u128 * f as u128;
    if num % den != 0 {
        return Err(Error::Inconsistent(format!("a·d·f_res = {num} is not divisible by e·f = {den}")));
    }
    let q = u64::try_from(num / den).map_err(|_| Error::Overflow("defect quotient".into()))?;
    match split_p(q, p) {
        (k, 1) => Ok(ExtensionInvariants { e, f, defect_exponent: k }),
        _ => Err(Error::Inconsistent(format!("a·d·f_res / (e·f) = {q} is not a power of {p}"))),
    }
}
