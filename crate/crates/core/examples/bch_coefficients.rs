//! BCH coefficients z_i in the classical Hall basis through degree 9.
//!
//! `cargo run --example bch_coefficients -- 9`

use bchkit::basis::BasisKind;
use bchkit::bch::bch_series;

fn main() -> bchkit::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(9);
    let c = bch_series(BasisKind::Hall, n)?;
    for e in c.entries.iter().filter(|e| e.degree <= 5) {
        println!("z_{:<3} = {:>8}   [{}, {}]  {}", e.index, e.value.to_string(), e.left, e.right, e.word);
    }
    println!("...");
    println!("{} coefficients through degree {n}, {} of them zero", c.len(), c.zero_count());
    let last = c.entries.last().unwrap();
    println!("last: z_{} = {}", last.index, last.value);
    Ok(())
}
