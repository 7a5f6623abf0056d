//! Spectra of compressed positive operators against the product windows.

use std::sync::Arc;

use rahecke::catalog;
use rahecke::enumeration::ball;
use rahecke::hecke::HeckeAlgebra;
use rahecke::operator::{positivity_window, positivity_window_exact};
use rahecke::params::{rat, Rational};
use rahecke::MultiParameter;

fn main() -> rahecke::Result<()> {
    let d = catalog::diagram_a();
    let q = MultiParameter::new(&d, vec![rat(1, 4), rat(1, 9), rat(1, 1)])?;
    let alg = HeckeAlgebra::<Rational>::new(&d, &q)?;
    let b = Arc::new(ball(&d, 8)?);
    for w in ["a", "b", "ac", "acb", "abca"] {
        let w = d.parse_elem(w)?;
        let win = positivity_window(&alg, &w, &b)?;
        println!(
            "{:5} spectrum [{:.6}, {:.6}] within [{}, {}]: {} (exact check: {})",
            d.format(&w),
            win.lo,
            win.hi,
            win.bound_lo,
            win.bound_hi,
            win.within(1e-9),
            positivity_window_exact(&alg, &w, &b)?
        );
    }
    Ok(())
}
