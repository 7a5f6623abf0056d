//! Words in a right-angled Coxeter group: normal forms, the weak order,
//! joins and covering closed paths.
//!
//!     cargo run --example normal_forms -- bacbab

use rahecke::catalog;
use rahecke::enumeration::ball;

fn main() -> rahecke::Result<()> {
    let d = catalog::diagram_a();
    println!("diagram: {}", d.to_json());
    let word = std::env::args().nth(1).unwrap_or_else(|| "bacb".into());
    let w = d.parse_elem(&word)?;
    println!("{word} -> {} (length {})", d.format(&w), w.len());
    println!("inverse: {}", d.format(&d.inverse(&w)));

    let prefixes: Vec<String> = d.prefixes(&w).iter().map(|v| d.format(v)).collect();
    println!("prefixes in the weak order: {prefixes:?}");

    for (v, u) in [("a", "c"), ("a", "b"), ("ab", "cb")] {
        let (v, u) = (d.parse_elem(v)?, d.parse_elem(u)?);
        let join = d.join(&v, &u).map_or("none".into(), |j| d.format(&j));
        println!("{} v {} = {join}, meet = {}", d.format(&v), d.format(&u), d.format(&d.meet(&v, &u)));
    }

    if let Some(g) = d.find_covering_closed_path() {
        let g2 = d.multiply(&g, &g);
        println!("covering closed path g = {}, |g²| = {}", d.format(&g), g2.len());
    }

    let b = ball(&d, 8)?;
    println!("sphere sizes up to 8: {:?}", b.sphere_sizes());
    Ok(())
}
