//! Truncated operators on a ball: the left regular representation, the
//! projections P_w and the clique decomposition of T_w.

use std::sync::Arc;

use rahecke::catalog;
use rahecke::enumeration::ball;
use rahecke::hecke::HeckeAlgebra;
use rahecke::operator::{op_norm, proj_p, rep_hecke, verify_cliq_identity, verify_power_split};
use rahecke::params::{rat, Rational};
use rahecke::MultiParameter;

fn main() -> rahecke::Result<()> {
    let d = catalog::diagram_a();
    let alg = HeckeAlgebra::<Rational>::new(&d, &MultiParameter::uniform(&d, rat(1, 4))?)?;
    let b = Arc::new(ball(&d, 8)?);
    println!("ball(8): {} elements", b.len());

    let x = alg.parse_element("T(a) + T(bc)")?;
    let op = rep_hecke(&alg, &x, &b);
    println!(
        "lambda(x): {} nonzeros, exact up to radius {}, norm >= {:.6}",
        op.nnz(),
        op.exactness_radius(),
        op_norm(&op)
    );

    let (v, w) = (d.parse_elem("a")?, d.parse_elem("b")?);
    let pv = proj_p::<Rational>(&v, &b);
    let pw = proj_p::<Rational>(&w, &b);
    let j = d.join(&v, &w).expect("a and b commute");
    println!("P_a P_b = P_{}: {}", d.format(&j), pv.mul(&pw).agrees_on_domain(&proj_p(&j, &b)));

    for w in ["acb", "abca", "cbcac"] {
        let w = d.parse_elem(w)?;
        let terms = alg.cliq_decomposition(&w);
        let residual = verify_cliq_identity(&alg, &w, &b)?;
        println!("T_{}: {} clique terms, residual {residual}", d.format(&w), terms.len());
    }

    let g = d.parse_elem("acbc")?;
    let split = verify_power_split(&alg, &g, 1, &b)?;
    println!(
        "T_g = T_g^(1) + P_a x with {} terms: residual {} (exact to radius {})",
        split.terms.len(),
        split.residual,
        split.exactness_radius
    );
    Ok(())
}
