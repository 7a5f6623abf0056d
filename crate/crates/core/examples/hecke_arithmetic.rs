//! Exact Hecke algebra arithmetic, characters and the parameter flip.

use rahecke::catalog;
use rahecke::hecke::HeckeAlgebra;
use rahecke::params::{rat, Rational};
use rahecke::{MultiParameter, SignPattern};

fn main() -> rahecke::Result<()> {
    let d = catalog::diagram_a();
    // exact mode needs square parameters: the roots 1/2, 3, 1/3 are rational
    let q = MultiParameter::new(&d, vec![rat(1, 4), rat(9, 1), rat(1, 9)])?;
    let alg = HeckeAlgebra::<Rational>::new(&d, &q)?;

    let x = alg.parse_element("T(ab) + 2*T(c)")?;
    let y = alg.parse_element("T(a) - T(bc)")?;
    let xy = alg.mul(&x, &y);
    println!("x = {}", x.display(&d));
    println!("y = {}", y.display(&d));
    println!("xy = {}", xy.display(&d));
    println!("tau(xy) = {}, tau(yx) = {}", alg.trace(&xy), alg.trace(&alg.mul(&y, &x)));
    println!("<x, y> = {}, |x|² = {}", alg.l2_inner(&x, &y), alg.l2_norm_sq(&x));

    let a = alg.generator(0);
    println!("T_a² = {}", alg.mul(&a, &a).display(&d));

    for eps in SignPattern::all(d.rank()) {
        let flipped = alg.flipped_algebra(&eps);
        let image = alg.flip_parameters(&xy, &eps);
        println!(
            "eps {eps}: chi(xy) = {}, chi(x)chi(y) = {}, via flip = {}",
            alg.char_value(&eps, &xy),
            alg.char_value(&eps, &x) * alg.char_value(&eps, &y),
            flipped.char_value(&SignPattern::all_positive(d.rank()), &image),
        );
    }
    Ok(())
}
