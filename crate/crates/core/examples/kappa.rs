//! Prefix counts κ_w(l) and the diagonal operator Q_q^u.

use std::sync::Arc;

use rahecke::catalog;
use rahecke::enumeration::{ball, fitted_kappa_constant, kappa_profile};
use rahecke::operator::q_operator;
use rahecke::params::rat;

fn main() -> rahecke::Result<()> {
    let d = catalog::diagram_a();
    let b = Arc::new(ball(&d, 10)?);
    for w in ["ab", "acbc", "acbcacbc"] {
        let w = d.parse_elem(w)?;
        println!("kappa profile of {}: {:?}", d.format(&w), kappa_profile(&d, &w));
    }
    println!("fitted C on ball(10): {}", fitted_kappa_constant(&b));

    let u = d.parse_elem("c")?;
    let mut last = None;
    for cutoff in 4..=10 {
        let q = q_operator(&u, &rat(1, 2), &b, cutoff)?;
        let step = last.as_ref().map(|prev: &rahecke::operator::TruncatedOperator<_>| {
            let diff = q.op.sub(prev);
            rahecke::operator::op_norm(&diff)
        });
        println!("cutoff {cutoff:2}: step {step:?}, tail bound {:.3e}", q.tail_bound);
        last = Some(q.op);
    }
    Ok(())
}
