//! Parsing, Frobenius and unit inversion mod x^M.
use valtower::algebra::{invert_unit, parse_poly, Field, XSeries};

fn main() -> valtower::Result<()> {
    let f3 = Field::prime(3)?;
    let f = parse_poly("y^2 + x*y + x^7", f3)?;
    let g = parse_poly("2*y - x^2", f3)?;
    println!("f = {f}\ng = {g}\nf*g = {}", &f * &g);
    println!("(f + g)^3 = {}", (&f + &g).pow(3));
    println!("f^3 + g^3 = {}", &f.pow(3) + &g.pow(3));

    let w = parse_poly("1 - x^2", f3)?;
    let inv = invert_unit(&w, 12)?;
    let check = XSeries::new(&w, 12).mul(&inv);
    println!("1/(1 - x^2) mod x^12 = {}", inv.poly);
    println!("product mod x^12 = {}", check.poly);
    Ok(())
}
