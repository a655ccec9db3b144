//! Zero coefficients of the BCH series: per-degree statistics and the
//! structural zeros of the Lyndon basis at even degrees.

use bchkit::analysis::{compute, lyndon_zero_check, stats};
use bchkit::basis::BasisKind;
use bchkit::report::SeriesKind;

fn main() -> bchkit::Result<()> {
    let hall = compute(BasisKind::Hall, SeriesKind::Bch, 12, None)?;
    println!("{}\n", stats(&hall));
    let lyndon = compute(BasisKind::Lyndon, SeriesKind::Bch, 12, None)?;
    println!("{}\n", stats(&lyndon));
    println!("{}", lyndon_zero_check(&lyndon.coefficients));
    Ok(())
}
