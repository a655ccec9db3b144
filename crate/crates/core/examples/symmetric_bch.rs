//! log(e^{X/2} e^Y e^{X/2}) has no even-degree terms.

use bchkit::basis::BasisKind;
use bchkit::bch::symmetric_bch_series;
use num_traits::Zero;

fn main() -> bchkit::Result<()> {
    let w = symmetric_bch_series(BasisKind::Hall, 9)?;
    for d in 1..=9 {
        let nonzero = w.entries.iter().filter(|e| e.degree == d && !e.value.is_zero()).count();
        println!("degree {d}: {nonzero} nonzero");
    }
    for i in [1, 2, 4, 5] {
        println!("w_{i} = {}", w.get(i).unwrap());
    }
    Ok(())
}
