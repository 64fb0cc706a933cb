use valtower::genseq::{build_tower_seq, validate, Family};
use valtower::towers::{build_tower, key_comparison_precision, verify_key_comparison, verify_stages};
use valtower::transforms::{run_tower_ladder, transform_chain, verify_round_trip, Extension};
use valtower::values::{Value, ValueGroup};
use valtower::Error;

#[test]
fn sequences_valid_for_all_configs() {
    for (p, c) in [(2, 1), (2, 2), (3, 2), (5, 4)] {
        for family in [Family::Q, Family::P, Family::U] {
            let gs = build_tower_seq(family, p, c, 5).unwrap();
            assert!(validate(&gs).passed, "{family} p={p} c={c}");
        }
    }
}

#[test]
fn stage_groups_written_out() {
    let t = build_tower(2, 1, 6).unwrap();
    assert!(verify_stages(&t, 6).iter().all(|(_, ok)| *ok));
    // generated by 1, 1/2, 17/16, 273/32
    let g = ValueGroup::generated_by(&t.u.values[..4]);
    assert_eq!(g, ValueGroup::from_denominator(32));
    let g = ValueGroup::generated_by(&t.u.values[..3]);
    assert_eq!(g.generator(), Value::new(1, 16));
}

#[test]
fn ladder_oscillates() {
    for (p, c) in [(2, 1), (3, 2), (5, 4)] {
        let t = build_tower(p, c, 5).unwrap();
        let rows = run_tower_ladder(&t, 4).unwrap();
        for j in 1..=4 {
            let get = |e| rows.iter().find(|r| r.j == j && r.extension == e).unwrap();
            let (up, low, tot) = (get(Extension::SOverA), get(Extension::AOverR), get(Extension::SOverR));
            assert_eq!(up.form.alpha + up.form.beta, 1);
            assert_eq!(low.form.alpha + low.form.beta, 1);
            assert_eq!(up.form.alpha, 1 - low.form.alpha);
            assert_eq!((tot.form.alpha, tot.form.beta), (1, 1));
            assert_eq!(tot.defect, up.defect + low.defect);
            // odd levels: the upper extension is inseparable in y, even levels in x
            assert_eq!(up.form.beta, (j % 2) as u32, "p={p} j={j}");
        }
    }
}

#[test]
fn ladder_needs_keys() {
    let t = build_tower(2, 1, 3).unwrap();
    assert!(matches!(run_tower_ladder(&t, 3), Err(Error::BadParams(_))));
}

#[test]
fn key_comparison_rejects_low_precision() {
    let t = build_tower(2, 1, 4).unwrap();
    let m = key_comparison_precision(&t, 2).unwrap();
    assert!(verify_key_comparison(&t, 2, m).unwrap().ok);
    assert!(matches!(verify_key_comparison(&t, 2, 2), Err(Error::PrecisionTooLow { .. })));
}

#[test]
fn round_trip_at_p3() {
    for family in [Family::Q, Family::P, Family::U] {
        let gs = build_tower_seq(family, 3, 2, 6).unwrap();
        for level in transform_chain(&gs, 4).unwrap() {
            for row in verify_round_trip(&level).unwrap() {
                assert!(row.ok(), "{family} level {} key {}", row.level, row.key);
            }
        }
    }
}
