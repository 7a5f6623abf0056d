//! Growth series along a ray and the simplicity verdict.
//!
//!     cargo run --example classify -- free3 1/2

use rahecke::catalog;
use rahecke::growth::{classify_simplicity, pole_and_rho};
use rahecke::params::format_rational;
use rahecke::MultiParameter;

fn main() -> rahecke::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "pentagon".into());
    let q = args.next().unwrap_or_else(|| "1".into());
    let d = match name.as_str() {
        "d_infty" => catalog::d_infinity(),
        "A" => catalog::diagram_a(),
        "free3" => catalog::free_product(3),
        _ => catalog::pentagon(),
    };
    let q = MultiParameter::parse(&d, &format!("all={q}"))?;

    let g = pole_and_rho(&d, &q);
    println!("{name} at q = {}", q.display(&d));
    println!("  1/W(q) = {}", format_rational(&g.reciprocal_value));
    println!("  N(t) = {:?}", g.cleared_polynomial.to_strings());
    println!("  rho in [{:.10}, {:.10}], region {}", rahecke::params::to_f64(&g.rho.lo), rahecke::params::to_f64(&g.rho.hi), g.region.as_str());

    let v = classify_simplicity(&d, &q);
    println!("  verdict: {}", v.status.as_str());
    let smallest = v
        .per_flip
        .iter()
        .min_by(|a, b| a.report.rho.midpoint_f64().total_cmp(&b.report.rho.midpoint_f64()));
    if let Some(f) = smallest {
        println!("  smallest flip {}: rho ~ {:.6} ({})", f.eps, f.report.rho.midpoint_f64(), f.report.region.as_str());
    }
    if !v.witnesses.is_empty() {
        let w: Vec<String> = v.witnesses.iter().map(|e| e.to_string()).collect();
        println!("  witnesses {w:?}, exact boundary: {}", v.exact_boundary);
    }
    Ok(())
}
