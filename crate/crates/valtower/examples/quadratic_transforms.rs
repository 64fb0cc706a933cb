//! Composite quadratic transforms along the Q, P and U sequences.
use valtower::genseq::{build_tower_seq, Family};
use valtower::transforms::{composite_transform, transform_chain, verify_round_trip};

fn main() -> valtower::Result<()> {
    let q = build_tower_seq(Family::Q, 2, 0, 5)?;
    let (map, q2) = composite_transform(&q)?;
    println!("first map: new x as a Laurent vector {:?}, notes {:?}", map.x_new, map.notes);
    for row in q2.table() {
        println!("  level 2 key {}: {:<16} value {}", row.i, row.key, row.value);
    }

    for fam in [Family::Q, Family::P, Family::U] {
        let chain = transform_chain(&build_tower_seq(fam, 2, 1, 6)?, 4)?;
        let bad: usize = chain
            .iter()
            .map(|gs| verify_round_trip(gs).map(|rows| rows.iter().filter(|r| !r.ok()).count()))
            .sum::<valtower::Result<usize>>()?;
        let top = chain.last().expect("four levels");
        println!(
            "{fam}: level {} keys {:?}, round-trip failures {bad}",
            top.level(),
            (0..top.len()).map(|i| top.key_string(i)).collect::<Vec<_>>()
        );
    }
    Ok(())
}
