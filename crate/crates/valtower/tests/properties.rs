mod common;

use common::snf_oracle;
use proptest::prelude::*;
use valtower::algebra::{invert_unit, Field, Poly2};
use valtower::monomial::{
    check_min_formula, det_index, euclidean_reduce, graded_presentation_rank1, graded_presentation_rank2,
    monomial_semigroups, semigroup_decomposition, smith_normal_form, Matrix2,
};
use valtower::values::{gamma_bar, gamma_bar_closed, group_index, group_join, order_in_quotient, Value, ValueGroup};

fn poly_from(p: u32, terms: Vec<(u32, u32, u32)>) -> Poly2 {
    let field = Field::prime(p).unwrap();
    Poly2::from_terms(field, terms.into_iter().map(|(c, i, j)| (field.elem(c % p), i, j)))
}

fn arb_terms(max_x: u32, max_y: u32) -> impl Strategy<Value = Vec<(u32, u32, u32)>> {
    prop::collection::vec((0u32..5, 0..=max_x, 0..=max_y), 0..8)
}

fn arb_prime() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![2u32, 3])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn divrem_round_trip(p in arb_prime(), f in arb_terms(6, 8), g in arb_terms(6, 7), d in 1u32..=8) {
        let f = poly_from(p, f);
        // monic in y of degree d
        let g = &poly_from(p, g).truncate(7, d) + &poly_from(p, vec![(1, 0, d)]);
        let (q, r) = f.divrem_y(&g).unwrap();
        prop_assert_eq!(&(&q * &g) + &r, f);
        prop_assert!(r.is_zero() || r.deg_y().unwrap() < d);
    }

    #[test]
    fn unit_inverse(p in arb_prime(), t in arb_terms(5, 3), m in 1u32..=32) {
        let u = &poly_from(p, t).mul_monomial(Field::prime(p).unwrap().one(), 1, 0) + &poly_from(p, vec![(1, 0, 0)]);
        let inv = invert_unit(&u, m).unwrap();
        let prod = (&inv.poly * &u).truncate(m, inv.prec_y.unwrap_or(u32::MAX));
        prop_assert_eq!(prod, poly_from(p, vec![(1, 0, 0)]));
    }

    #[test]
    fn frobenius_additive(p in arb_prime(), f in arb_terms(4, 4), g in arb_terms(4, 4)) {
        let (f, g) = (poly_from(p, f), poly_from(p, g));
        prop_assert_eq!((&f + &g).pow(p as u64), &f.pow(p as u64) + &g.pow(p as u64));
    }

    #[test]
    fn x_order_additive(p in arb_prime(), f in arb_terms(6, 4), g in arb_terms(6, 4)) {
        let (f, g) = (poly_from(p, f), poly_from(p, g));
        prop_assume!(!f.is_zero() && !g.is_zero());
        prop_assert_eq!((&f * &g).x_order().unwrap(), f.x_order().unwrap() + g.x_order().unwrap());
    }

    #[test]
    fn order_is_index(den in 1i64..200, num in -500i64..500, vden in 1i64..300) {
        let g = ValueGroup::from_denominator(den);
        let v = Value::new(num, vden);
        let ord = order_in_quotient(&v, &g).unwrap();
        let idx = group_index(&group_join(&g, &v), &g).unwrap();
        prop_assert_eq!(ord, idx);
        prop_assert!(g.contains(&v.scale(ord as i64)));
    }

    #[test]
    fn det_index_is_lattice_index(a in -50i64..=50, b in -50i64..=50, c in -50i64..=50, d in -50i64..=50) {
        let m = Matrix2::new(a, b, c, d);
        prop_assume!(m.det() != 0);
        let snf = smith_normal_form(&m).unwrap();
        prop_assert_eq!(snf, snf_oracle(m.0));
        prop_assert_eq!(det_index(&m).unwrap(), snf.0 * snf.1);
        prop_assert_eq!(snf.1 % snf.0, 0);
    }

    #[test]
    fn euclid_identity(a in 1i64..200, b in -50i64..50, c in 1i64..200, d in -50i64..50) {
        let m = Matrix2::new(a, b, c, d);
        let r = euclidean_reduce(&m).unwrap();
        prop_assert!(r.identity_ok);
        prop_assert_eq!(r.s, num_integer::gcd(a, c));
        prop_assert_eq!(r.s * (r.t1 - r.t2).abs(), m.det().abs());
    }

    #[test]
    fn presentation_degree(e in 1u64..50, f in 1u64..50, a in 0i64..20, b in 0i64..20, c in 0i64..20, d in 0i64..20) {
        prop_assert_eq!(graded_presentation_rank1(e, f).unwrap().degree, e * f);
        let m = Matrix2::new(a, b, c, d);
        prop_assume!(m.det() != 0);
        prop_assert_eq!(graded_presentation_rank2(&m, f).unwrap().degree, m.det().unsigned_abs() * f);
    }

    #[test]
    fn min_formula_at_order(den in 1i64..20, k in 1i64..40, e in 1u64..7) {
        let g = ValueGroup::from_denominator(den);
        prop_assume!(num_integer::gcd(k, e as i64) == 1);
        let y = Value::new(k, den * e as i64);
        let gammas: Vec<Value> = (0..6).map(|i| Value::new(i, den)).collect();
        prop_assert!(check_min_formula(&g, &y, e, &gammas).unwrap());
    }

    #[test]
    fn decomposition_holds(e in 1u64..=6, k in 1u64..8, t in 1u64..6) {
        prop_assume!(num_integer::gcd(k, e) == 1 && num_integer::gcd(k, t) == 1);
        let bound = Value::int(10);
        let (big, small) = monomial_semigroups(e, k, t, &bound).unwrap();
        prop_assert!(semigroup_decomposition(&big, &small, &Value::new(k as i64, e as i64), e, &bound));
    }
}

#[test]
fn gamma_forms_agree() {
    for p in [2, 3, 5] {
        for j in 0..=20 {
            assert_eq!(gamma_bar(j, p), gamma_bar_closed(j, p), "j={j} p={p}");
        }
    }
}
