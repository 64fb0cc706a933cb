//! Values and standard expansions under the Q and U sequences.
use valtower::algebra::parse_poly;
use valtower::genseq::{build_tower_seq, expand, value_of, Family};

fn main() -> valtower::Result<()> {
    let q = build_tower_seq(Family::Q, 2, 0, 4)?;
    for row in q.table() {
        println!("Q_{}: {:<28} value {}", row.i, row.key, row.value);
    }
    for text in ["x", "y", "y^4", "y^4 + x", "y^5 + x^2*y + x^3"] {
        let f = parse_poly(text, q.field)?;
        let exp = expand(&f, &q)?;
        println!("nu({text}) = {}   ({} standard terms)", value_of(&f, &q)?, exp.terms.len());
    }

    let u = build_tower_seq(Family::U, 2, 1, 4)?;
    for text in ["v", "v^2 + x", "v^2*x + v^3"] {
        let f = parse_poly(text, u.field)?;
        println!("nu1({text}) = {}", value_of(&f, &u)?);
    }
    Ok(())
}
