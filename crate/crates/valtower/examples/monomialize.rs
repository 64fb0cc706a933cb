//! Index, Smith form, substitution word and graded presentation of exponent matrices.
use valtower::algebra::{Field, Poly2};
use valtower::monomial::{
    classify_case, det_index, euclidean_reduce, graded_presentation_rank1, graded_presentation_rank2,
    smith_normal_form, Matrix2, Rank1Instance,
};

fn main() -> valtower::Result<()> {
    for m in [Matrix2::new(1, 0, 1, 1), Matrix2::new(2, 1, 1, 3), Matrix2::new(4, 1, 6, 2)] {
        let red = euclidean_reduce(&m)?;
        println!(
            "{m}: e = {}, snf = {:?}, s = {}, word = {}, identity {}",
            det_index(&m)?,
            smith_normal_form(&m)?,
            red.s,
            red.word_string(),
            red.identity_ok
        );
        println!("  {:?}", graded_presentation_rank2(&m, 1)?);
    }
    println!("{:?}", graded_presentation_rank1(3, 2)?);
    println!("rank 1, trdeg 0: {}", classify_case(1, 0)?);

    let f = Field::prime(3)?;
    let gamma = &Poly2::one(f) + &Poly2::x(f);
    let inst = Rank1Instance::new(2, 3, 1, 3, 1, 1, gamma)?;
    let sf = inst.stable_form()?;
    println!("u = (1 + x) x^3, v = x y: a = {}, d = {}, e = {}, defect {}", sf.a, sf.d, inst.e()?, inst.defect()?);
    Ok(())
}
