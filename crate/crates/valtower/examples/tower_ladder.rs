//! The alternating (alpha, beta) table of the Artin-Schreier tower.
use valtower::towers::build_tower;
use valtower::transforms::run_tower_ladder;

fn main() -> valtower::Result<()> {
    for (p, c) in [(2, 1), (3, 2)] {
        let t = build_tower(p, c, 5)?;
        println!("p = {p}, c = {c}");
        for r in run_tower_ladder(&t, 4)? {
            println!(
                "  j={} {:<4} alpha={} beta={} defect={}",
                r.j,
                r.extension.to_string(),
                r.form.alpha,
                r.form.beta,
                r.defect
            );
        }
    }
    Ok(())
}
