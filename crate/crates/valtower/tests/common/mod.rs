#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use rand::Rng;
use valtower::algebra::{Field, FieldElem, Poly2};
use valtower::genseq::Family;
use valtower::values::Value;

/// `(n_k, e_k)` with `K_k^{n_k} = K_{k+1} + x^{e_k} K_{k-1}`, written out per family.
pub fn step_big(family: Family, p: u64, k: usize) -> (BigInt, BigInt) {
    let pw = |e: usize| BigInt::from(p).pow(e as u32);
    match (family, k) {
        (Family::U, 1) => (pw(1), pw(0) - 1),
        (Family::U, k) if k % 2 == 1 => (pw(1), pw(2 * k - 2)),
        (Family::U, k) => (pw(3), pw(2 * k - 1)),
        (_, 1) => (pw(2), pw(0) - 1),
        (_, k) => (pw(2), pw(2 * k - 2)),
    }
}

/// [`step_big`] for small `k`.
pub fn step_table(family: Family, p: u64, k: usize) -> (u32, u32) {
    let (n, e) = step_big(family, p, k);
    (u32::try_from(n).expect("small index"), u32::try_from(e).expect("small exponent"))
}

/// Values from `n_k v_k = e_k + v_{k-1}`, `v_0 = 1`, over `BigRational`.
pub fn oracle_values(family: Family, p: u64, n: usize) -> Vec<Value> {
    let mut v = vec![BigRational::from_integer(BigInt::from(1))];
    for k in 1..=n {
        let (nk, ek) = step_big(family, p, k);
        let next = (BigRational::from_integer(ek) + v[k - 1].clone()) / nk;
        v.push(next);
    }
    v.into_iter().map(Value::from_ratio).collect()
}

/// Rewrites `f(x, y)` in keys by `K_k^{n_k} -> K_{k+1} + x^{e_k} K_{k-1}` until every
/// exponent `m_k < n_k` for `1 <= k < n`, combining like terms.
pub fn rewrite_expansion(f: &Poly2, family: Family, p: u64, n: usize) -> BTreeMap<Vec<u32>, FieldElem> {
    let mut work: Vec<(FieldElem, Vec<u32>)> = f
        .terms()
        .map(|(c, i, j)| {
            let mut m = vec![0u32; n + 1];
            m[0] = i;
            m[1] = j;
            (c, m)
        })
        .collect();
    let mut out: BTreeMap<Vec<u32>, FieldElem> = BTreeMap::new();
    while let Some((c, m)) = work.pop() {
        let over = (1..n).find(|&k| m[k] >= step_table(family, p, k).0);
        match over {
            None => {
                let e = out.entry(m.clone()).or_insert_with(|| c.field().zero());
                *e = *e + c;
                if e.is_zero() {
                    out.remove(&m);
                }
            }
            Some(k) => {
                let (nk, ek) = step_table(family, p, k);
                let mut a = m.clone();
                a[k] -= nk;
                a[k + 1] += 1;
                let mut b = m;
                b[k] -= nk;
                b[k - 1] += 1;
                b[0] += ek;
                work.push((c, a));
                work.push((c, b));
            }
        }
    }
    out
}

pub fn term_value(values: &[Value], m: &[u32]) -> Value {
    m.iter().zip(values).map(|(&e, v)| v.scale(e as i64)).fold(Value::zero(), |a, b| a + b)
}

pub fn random_poly<R: Rng>(rng: &mut R, field: Field, max_x: u32, max_y: u32, max_terms: usize) -> Poly2 {
    loop {
        let k = rng.gen_range(1..=max_terms);
        let terms = (0..k)
            .map(|_| (field.elem(rng.gen_range(1..field.p())), rng.gen_range(0..=max_x), rng.gen_range(0..=max_y)));
        let f = Poly2::from_terms(field, terms);
        if !f.is_zero() {
            return f;
        }
    }
}

/// `(gcd of entries, |det| / gcd)`: the invariant factors of a nonsingular 2x2 matrix.
pub fn snf_oracle(m: [[i64; 2]; 2]) -> (u64, u64) {
    let g = m[0][0].gcd(&m[0][1]).gcd(&m[1][0]).gcd(&m[1][1]);
    let det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).abs();
    (g as u64, (det / g) as u64)
}
