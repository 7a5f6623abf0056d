//! Partial sums of the central projections on the free product of three
//! order-two groups at q = 1/4.

use rahecke::catalog;
use rahecke::central::{generator_residual_sq, projection_inner, RadialAlgebra};
use rahecke::hecke::HeckeAlgebra;
use rahecke::params::{rat, to_f64, Rational};
use rahecke::{MultiParameter, SignPattern};

fn main() -> rahecke::Result<()> {
    let d = catalog::free_product(3);
    let alg = HeckeAlgebra::<Rational>::new(&d, &MultiParameter::uniform(&d, rat(1, 4))?)?;
    let plus = SignPattern::all_positive(3);
    let w = alg.projection_normalizer(&plus)?;
    let chi = alg.char_generator(&plus, 0);
    println!("1/W = {w}, chi(T_s) = {chi}");

    let e = alg.central_projection_partial(&plus, 6)?;
    println!("E^(6) has {} terms and trace {}", e.support_len(), alg.trace(&e));

    let radial = RadialAlgebra::from_algebra(&alg)?;
    let idem = radial.idempotency_residuals_sq(&w, &chi, 40);
    for i in [1, 5, 10, 20, 30, 40] {
        let gen = generator_residual_sq(&alg, &plus, 0, i)?;
        println!(
            "i = {i:2}: |E² − E|₂ = {:.3e}, |T_a E − chi E|₂ = {:.3e}",
            to_f64(&idem[i]).sqrt(),
            to_f64(&gen).sqrt()
        );
    }

    // a second pattern whose flipped parameter is also inside the region
    let q = MultiParameter::new(&d, vec![rat(1, 1), rat(1, 9), rat(1, 9)])?;
    let alg = HeckeAlgebra::<Rational>::new(&d, &q)?;
    let (a, b) = (SignPattern::parse(3, "+++")?, SignPattern::parse(3, "-++")?);
    for i in [5, 20, 40] {
        println!("<E_+++, E_-++> at i = {i}: {:.3e}", to_f64(&projection_inner(&alg, &a, &b, i)?));
    }
    Ok(())
}
