mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{oracle_values, random_poly, rewrite_expansion, snf_oracle, step_table, term_value};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use valtower::algebra::{Field, Poly2};
use valtower::genseq::{build_tower_seq, validate, value_of, Family};
use valtower::monomial::{
    check_min_formula, det_index, monomial_semigroups, semigroup_decomposition, smith_normal_form, Matrix2,
    Rank1Instance,
};
use valtower::towers::{
    build_tower, key_comparison_exponent, key_comparison_precision, verify_key_comparison, verify_restriction,
};
use valtower::transforms::{run_tower_ladder, transform_chain, verify_round_trip, Extension};
use valtower::values::{gamma_bar, gamma_bar_closed, group_index, group_join, Value, ValueGroup};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn pow(p: u64, k: i64) -> Value {
    if k >= 0 {
        Value::int(p.pow(k as u32) as i64)
    } else {
        Value::new(1, p.pow((-k) as u32) as i64)
    }
}

/// Family keys `K_0..=K_n` in `(x, y)` by the recursion, with `K_1 = y1`.
fn keys_by_recursion(family: Family, p: u64, y1: Poly2, n: usize) -> Vec<Poly2> {
    let f = y1.field();
    let mut k = vec![Poly2::x(f), y1];
    for i in 1..n {
        let (ni, ei) = step_table(family, p, i);
        let next = &k[i].pow(ni as u64) - &k[i - 1].mul_monomial(f.one(), ei, 0);
        k.push(next);
    }
    k
}

/// `v = y^p - x^c y`.
fn v_in_s(p: u64, c: u32, f: Field) -> Poly2 {
    &Poly2::monomial(f.one(), 0, p as u32) - &Poly2::monomial(f.one(), c, 1)
}

fn ac1() -> Check {
    for p in [2u64, 3, 5] {
        let oracle = oracle_values(Family::U, p, 20);
        for j in 0..=20 {
            let (r, c) = (gamma_bar(j, p), gamma_bar_closed(j, p));
            ensure(r == c && r == oracle[j], || format!("p={p} j={j}: {r} vs {c} vs {}", oracle[j]))?;
        }
    }
    Ok("j <= 20, p in {2,3,5}".into())
}

fn ac2() -> Check {
    for p in [2u64, 3, 5] {
        let vals = oracle_values(Family::U, p, 10);
        let mut prev = ValueGroup::generated_by(&vals[..1]);
        for i in 1..=10usize {
            let stage_exp = if i % 2 == 1 { 2 * i as i64 - 2 } else { 2 * i as i64 - 3 };
            ensure(prev.generator() == pow(p, -stage_exp), || format!("p={p}: G_{} = {prev}", i - 1))?;
            let next = group_join(&prev, &vals[i]);
            let idx = group_index(&next, &prev).map_err(|e| e.to_string())?;
            let want = if i % 2 == 1 { p } else { p * p * p };
            ensure(idx == want, || format!("p={p} i={i}: index {idx}, want {want}"))?;
            prev = next;
        }
    }
    Ok("i <= 10".into())
}

fn ac3() -> Check {
    for (p, c) in [(2u64, 1u64), (2, 2), (3, 2)] {
        for family in [Family::Q, Family::P, Family::U] {
            let gs = build_tower_seq(family, p, c, 5).map_err(|e| e.to_string())?;
            let rep = validate(&gs);
            ensure(rep.passed, || format!("{family} p={p} c={c}: {:?}", rep.first_failure()))?;
            let want: Vec<u64> = (0..=5).map(|i| if i == 0 { 1 } else { step_table(family, p, i).0 as u64 }).collect();
            ensure(gs.indices == want, || format!("{family} p={p}: indices {:?}", gs.indices))?;
        }
    }
    Ok("N = 5, 9 sequences".into())
}

fn ac4() -> Check {
    let mut count = 0;
    for (p, family, seed) in [(2u64, Family::Q, 1u64), (2, Family::U, 2), (3, Family::Q, 3), (3, Family::U, 4)] {
        let gs = build_tower_seq(family, p, p - 1, 4).map_err(|e| e.to_string())?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..150 {
            let f = random_poly(&mut rng, gs.field, 6, 16, 6);
            let terms = rewrite_expansion(&f, family, p, gs.len() - 1);
            let min = terms.keys().map(|m| term_value(&gs.values, m)).min().ok_or("empty oracle expansion")?;
            let got = value_of(&f, &gs).map_err(|e| e.to_string())?;
            ensure(got == min, || format!("{family} p={p} f={f}: {got} vs oracle {min}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} polynomials, 0 mismatches"))
}

fn ac5() -> Check {
    let mut rows = Vec::new();
    for (p, c, jmax) in [(2u64, 1u32, 4usize), (3, 2, 3)] {
        let t = build_tower(p, c as u64, jmax + 1).map_err(|e| e.to_string())?;
        let f = t.field;
        let q = keys_by_recursion(Family::Q, p, Poly2::y(f), jmax + 1);
        let u = keys_by_recursion(Family::U, p, v_in_s(p, c, f), jmax + 1);
        let mut e_prev = 0u64;
        for j in 1..=jmax {
            // E_1 = 1, E_j = p^3 E_{j-1} (j even), p E_{j-1} + 1 (j odd)
            let e = match j {
                1 => 1,
                j if j % 2 == 0 => p.pow(3) * e_prev,
                _ => p * e_prev + 1,
            };
            e_prev = e;
            ensure(key_comparison_exponent(j, p) == Value::int(e as i64), || {
                format!("p={p} j={j}: E = {}", key_comparison_exponent(j, p))
            })?;
            let qj = if j % 2 == 1 { q[j + 1].clone() } else { q[j + 1].pow(p) };
            let diff = &u[j + 1] - &qj;
            let xo = diff.x_order().map_err(|e| e.to_string())? as u64;
            let dy = diff.deg_y().unwrap_or(0) as u64;
            let want_dy = if j % 2 == 1 { p.pow(2 * j as u32 - 1) } else { p.pow(2 * j as u32) };
            ensure(xo > e, || format!("p={p} j={j}: x-order {xo} <= E = {e}"))?;
            ensure(dy == want_dy, || format!("p={p} j={j}: deg_y {dy}, want {want_dy}"))?;
            let m = key_comparison_precision(&t, j).map_err(|e| e.to_string())?;
            let rep = verify_key_comparison(&t, j, m).map_err(|e| e.to_string())?;
            ensure(rep.ok && rep.x_order as u64 == xo && rep.deg_y as u64 == dy, || format!("p={p} j={j}: {rep:?}"))?;
            rows.push(format!("p={p},j={j}:E={e}"));
        }
    }
    Ok(rows.join(" "))
}

fn ac6() -> Check {
    let p = 2u64;
    let t = build_tower(p, 1, 5).map_err(|e| e.to_string())?;
    let q = build_tower_seq(Family::Q, p, 0, 6).map_err(|e| e.to_string())?;
    let u = keys_by_recursion(Family::U, p, v_in_s(p, 1, t.field), 5);
    let beta = oracle_values(Family::Q, p, 5);
    let mut out = Vec::new();
    for j in 1..=4 {
        let got = value_of(&u[j + 1], &q).map_err(|e| e.to_string())?;
        let want = if j % 2 == 1 { beta[j + 1].clone() } else { beta[j + 1].scale(p as i64) };
        ensure(got == want, || format!("j={j}: nu*(U) = {got}, want {want}"))?;
        let bound = key_comparison_exponent(j, p) + Value::int(1);
        ensure(want < bound, || format!("j={j}: {want} >= E + 1 = {bound}"))?;
        out.push(got.to_string());
    }
    Ok(out.join(", "))
}

fn ac7() -> Check {
    let mut out = Vec::new();
    for (p, c) in [(2u64, 1u32), (3, 2)] {
        let t = build_tower(p, c as u64, 5).map_err(|e| e.to_string())?;
        let rep = verify_restriction(&t, 200, 4, 7).map_err(|e| e.to_string())?;
        ensure(rep.mismatches.is_empty(), || format!("p={p}: {:?}", rep.mismatches.first()))?;
        // independent sample: substitute v = y^p - x^c y by hand
        let v = v_in_s(p, c, t.field);
        let mut rng = ChaCha8Rng::seed_from_u64(100 + p);
        let max_v = if p == 2 { 12 } else { 6 };
        for _ in 0..200 {
            let g = random_poly(&mut rng, t.field, 4, max_v, 5);
            let lhs = value_of(&g, &t.u).map_err(|e| e.to_string())?;
            let rhs = value_of(&g.subs_y(&v), &t.q).map_err(|e| e.to_string())?;
            ensure(lhs == rhs, || format!("p={p} g={g}: {lhs} vs {rhs}"))?;
        }
        out.push(format!("p={p}: {}+200 samples", rep.checked));
    }
    Ok(out.join(", "))
}

fn ac8() -> Check {
    for p in [2u64, 3] {
        let t = build_tower(p, p - 1, 5).map_err(|e| e.to_string())?;
        let rows = run_tower_ladder(&t, 4).map_err(|e| e.to_string())?;
        for j in 1..=4usize {
            let odd = j % 2 == 1;
            let get = |e| rows.iter().find(|r| r.j == j && r.extension == e).ok_or(format!("missing j={j} {e}"));
            let (up, low, tot) = (get(Extension::SOverA)?, get(Extension::AOverR)?, get(Extension::SOverR)?);
            let table =
                [(up, if odd { (0, 1) } else { (1, 0) }), (low, if odd { (1, 0) } else { (0, 1) }), (tot, (1, 1))];
            for (row, want) in table {
                let got = (row.form.alpha, row.form.beta);
                ensure(got == want, || format!("p={p} j={j} {}: {got:?}, want {want:?}", row.extension))?;
            }
            ensure((up.defect, low.defect, tot.defect) == (1, 1, 2), || {
                format!("p={p} j={j}: defects {} {} {}", up.defect, low.defect, tot.defect)
            })?;
            ensure(p.pow(tot.defect) == p.pow(up.defect) * p.pow(low.defect), || "multiplicativity".into())?;
        }
    }
    Ok("p in {2,3}, j <= 4".into())
}

fn ac9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut defectless, mut built) = (0, 0);
    while built < 100 {
        let p = [2u32, 3, 5][rng.gen_range(0..3)];
        let f = Field::prime(p).map_err(|e| e.to_string())?;
        let e = rng.gen_range(1..=6u64);
        let k = rng.gen_range(1..=20u64);
        if num_integer::gcd(k, e) != 1 {
            continue;
        }
        let den = rng.gen_range(1..=8u64);
        let a = (e * [1, p as u64][rng.gen_range(0..2)]) as u32;
        let d = [1, p][rng.gen_range(0..2)];
        let b = rng.gen_range(0..4u32);
        let gamma = &Poly2::one(f) + &random_poly(&mut rng, f, 3, 3, 3).mul_monomial(f.one(), 1, 0);
        let inst = Rank1Instance::new(den, e, k, a, b, d, gamma).map_err(|e| e.to_string())?;
        built += 1;
        let sf = inst.stable_form().map_err(|e| e.to_string())?;
        ensure(sf.a == a as u64 && sf.d == d as u64 && sf.b == b as u64, || {
            format!("read-off {sf:?} for a={a} b={b} d={d}")
        })?;
        ensure(inst.e().map_err(|e| e.to_string())? == e, || format!("e mismatch for k={k} e={e}"))?;
        if inst.defect().map_err(|e| e.to_string())? == 0 {
            defectless += 1;
            ensure(sf.a == e && sf.d == 1, || format!("defectless with a={} d={} e={e}", sf.a, sf.d))?;
        }
    }
    ensure(defectless > 0, || "no defectless instance generated".into())?;
    Ok(format!("{built} instances, {defectless} defectless"))
}

fn ac10() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut n = 0;
    while n < 200 {
        let m = [[0; 2]; 2].map(|r: [i64; 2]| r.map(|_| rng.gen_range(-50..=50)));
        if m[0][0] * m[1][1] - m[0][1] * m[1][0] == 0 {
            continue;
        }
        let mm = Matrix2(m);
        let oracle = snf_oracle(m);
        let snf = smith_normal_form(&mm).map_err(|e| e.to_string())?;
        let e = det_index(&mm).map_err(|e| e.to_string())?;
        ensure(snf == oracle && e == oracle.0 * oracle.1, || {
            format!("{mm}: det_index {e}, snf {snf:?}, oracle {oracle:?}")
        })?;
        n += 1;
    }
    Ok("200 matrices".into())
}

fn ac11() -> Check {
    let mut n = 0;
    for e in 1..=6u64 {
        for k in 1..=7u64 {
            for t in 1..=5u64 {
                if num_integer::gcd(k, e) != 1 || num_integer::gcd(k, t) != 1 {
                    continue;
                }
                for b in 1..=10i64 {
                    let bound = Value::int(b);
                    let (big, small) = monomial_semigroups(e, k, t, &bound).map_err(|e| e.to_string())?;
                    // brute-force a·k/e + c·t <= B
                    let mut oracle: Vec<Value> = (0..=b * e as i64)
                        .flat_map(|i| {
                            (0..=b).map(move |j| Value::new(i * k as i64, e as i64) + Value::int(j * t as i64))
                        })
                        .filter(|v| *v <= bound)
                        .collect();
                    oracle.sort();
                    oracle.dedup();
                    ensure(big.elements == oracle, || format!("e={e} k={k} t={t} B={b}: semigroup differs"))?;
                    let y = Value::new(k as i64, e as i64);
                    let min_ok = check_min_formula(&ValueGroup::integers(), &y, e, &small.elements)
                        .map_err(|e| e.to_string())?;
                    let dec_ok = semigroup_decomposition(&big, &small, &y, e, &bound);
                    ensure(min_ok && dec_ok, || {
                        format!("e={e} k={k} t={t} B={b}: min {min_ok} decomposition {dec_ok}")
                    })?;
                    n += 1;
                }
            }
        }
    }
    Ok(format!("{n} extensions"))
}

fn ac12() -> Check {
    let mut rows = 0;
    for p in [2u64, 3] {
        for family in [Family::Q, Family::P, Family::U] {
            let gs = build_tower_seq(family, p, p - 1, 6).map_err(|e| e.to_string())?;
            let chain = transform_chain(&gs, 4).map_err(|e| e.to_string())?;
            // level 2 by hand: key 0 = K_1, key j = K_{j+1} / x^{deg_y K_{j+1} / n_1}
            let l2 = &chain[1];
            let n1 = gs.degrees[2];
            for j in 0..l2.len() {
                let want = if j == 0 {
                    gs.values[1].clone()
                } else {
                    gs.values[j + 1].clone() - gs.values[0].scale((gs.degrees[j + 1] / n1) as i64)
                };
                ensure(l2.values[j] == want, || format!("{family} p={p} level 2 key {j}: {} vs {want}", l2.values[j]))?;
            }
            for level in &chain {
                for row in verify_round_trip(level).map_err(|e| e.to_string())? {
                    ensure(row.ok(), || {
                        format!(
                            "{family} p={p} level {} key {}: {} vs {}",
                            row.level, row.key, row.declared, row.pulled_back
                        )
                    })?;
                    rows += 1;
                }
            }
        }
    }
    Ok(format!("{rows} keys pulled back"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check, Duration); 12] = [
        ("AC1 gamma recursion = closed form", ac1, Duration::from_secs(1)),
        ("AC2 stage indices and groups", ac2, Duration::from_secs(1)),
        ("AC3 generating-sequence validity", ac3, Duration::from_secs(10)),
        ("AC4 value_of = rewrite oracle", ac4, Duration::from_secs(60)),
        ("AC5 key comparison identities", ac5, Duration::from_secs(300)),
        ("AC6 value comparison and bounds", ac6, Duration::from_secs(60)),
        ("AC7 restriction property", ac7, Duration::from_secs(60)),
        ("AC8 alpha/beta ladder and defect", ac8, Duration::from_secs(300)),
        ("AC9 degree formula on monomial forms", ac9, Duration::from_secs(10)),
        ("AC10 det index = SNF index", ac10, Duration::from_secs(5)),
        ("AC11 min formula and decomposition", ac11, Duration::from_secs(30)),
        ("AC12 transform round trip", ac12, Duration::from_secs(120)),
    ];
    let mut failed = 0;
    for (name, f, budget) in criteria {
        let start = Instant::now();
        let res = f();
        let took = start.elapsed();
        let res = match res {
            Ok(info) if took > budget => Err(format!("{info}; took {took:?}, budget {budget:?}")),
            r => r,
        };
        match res {
            Ok(info) => println!("PASS {name} ({info}; {took:.2?})"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    println!("{} of 12 acceptance criteria passed", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
