//! Sphere-norm growth on the pentagon: `‖x‖/(l‖x‖₂)` for random `x`
//! supported on the `l`-sphere.

use std::sync::Arc;

use rahecke::catalog;
use rahecke::enumeration::ball;
use rahecke::hecke::HeckeAlgebra;
use rahecke::operator::haagerup_ratio;
use rahecke::params::rat;
use rahecke::MultiParameter;

fn main() -> rahecke::Result<()> {
    let d = catalog::pentagon();
    let q = MultiParameter::uniform(&d, rat(7, 10))?;
    let alg = HeckeAlgebra::<f64>::new(&d, &q)?;
    let n: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(8);
    let trials: usize = std::env::args().nth(2).and_then(|a| a.parse().ok()).unwrap_or(10);
    let b = Arc::new(ball(&d, n)?);
    println!("ball({n}) has {} elements", b.len());
    for l in 1..=(n - 2).min(6) {
        let t = std::time::Instant::now();
        let s = haagerup_ratio(&alg, &b, l, trials, 0)?;
        println!("l = {l}: max ratio {:.6} ({:.2?})", s.max_ratio, t.elapsed());
    }
    Ok(())
}
