//! Stable forms of explicit extensions and the defect they imply.
use valtower::algebra::{parse_poly, Field};
use valtower::genseq::graded::ChartPoly;
use valtower::transforms::{defect_from_stable, stable_form};

fn main() -> valtower::Result<()> {
    let f2 = Field::prime(2)?;
    // u = x^2 / (1 - x), v = y^2 + x*y
    let u = ChartPoly { num: parse_poly("x^2", f2)?, w_pow: 1 };
    let v = ChartPoly::poly(parse_poly("y^2 + x*y", f2)?);
    let sf = stable_form(&u, &v)?;
    println!("{sf:?}");
    let inv = defect_from_stable(&sf, 1, 1, 1, 2)?;
    println!("with e = f = 1: defect exponent {}", inv.defect_exponent);
    let inv = defect_from_stable(&sf, 2, 1, 1, 2)?;
    println!("with e = 2, f = 1: defect exponent {}", inv.defect_exponent);
    Ok(())
}
