//! Validity tables for the three tower families.
use valtower::genseq::{build_tower_seq, validate, Family};

fn main() -> valtower::Result<()> {
    for (p, c) in [(2, 1), (2, 2), (3, 2)] {
        for fam in [Family::Q, Family::P, Family::U] {
            let gs = build_tower_seq(fam, p, c, 5)?;
            let rep = validate(&gs);
            println!("p={p} c={c} {fam}: indices {:?} passed={}", gs.indices, rep.passed);
        }
    }
    Ok(())
}
