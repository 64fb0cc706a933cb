//! Key comparison, value comparison, restriction and parameter relations in the tower.
use valtower::towers::{
    build_tower, key_comparison_precision, verify_key_comparison, verify_param_relations, verify_restriction,
    verify_value_comparison,
};

fn main() -> valtower::Result<()> {
    let t = build_tower(2, 1, 5)?;
    for j in 1..=4 {
        let l = verify_key_comparison(&t, j, key_comparison_precision(&t, j)?)?;
        let v = verify_value_comparison(&t, j)?;
        println!("j={j}: E={} deg_y={} ok={}  nu(U)={} expected={}", l.exponent, l.deg_y, l.ok, v.nu_u, v.expected);
    }
    let r = verify_restriction(&t, 200, 4, 1)?;
    println!("restriction: {} checked, {} mismatches", r.checked, r.mismatches.len());
    for j in 1..=3 {
        println!("parameter relations at j={j}: ok={}", verify_param_relations(&t, j)?.ok());
    }
    Ok(())
}
