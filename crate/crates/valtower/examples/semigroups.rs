//! Value semigroups below a bound.
use valtower::genseq::semigroup::semigroup_of;
use valtower::genseq::{build_tower_seq, semigroup, Family};
use valtower::values::Value;

fn main() -> valtower::Result<()> {
    let s = semigroup_of(&[Value::int(3), Value::int(5)], &Value::int(12))?;
    println!("<3, 5> up to 12: {:?}", s.elements);

    let u = build_tower_seq(Family::U, 2, 1, 4)?;
    let s = semigroup(&u, &Value::int(2))?;
    println!("U-sequence semigroup up to 2: {} elements", s.elements.len());
    println!("minimal generators: {:?}", s.minimal_generators());
    Ok(())
}
