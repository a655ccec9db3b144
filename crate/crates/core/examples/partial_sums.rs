//! How fast the truncated series reproduces e^{eps X} e^{eps Y}.

use bchkit::basis::BasisKind;
use bchkit::bch::bch_series;
use bchkit::convergence::scan::{example_nilpotent_pair, partial_sum_residual, partial_sum_residual_numeric};
use bchkit::convergence::C64;

fn main() -> bchkit::Result<()> {
    let (x, y) = example_nilpotent_pair(2.0);
    let c = bch_series(BasisKind::Hall, 15)?;
    let eps = C64::new(0.25, 0.0);
    for n in [4, 6, 8, 10, 12, 15] {
        println!("eps = 1/4, N = {n:>3}: {:.2e}", partial_sum_residual(&x, &y, eps, n, &c)?);
    }
    // near the radius r = 1 exact coefficients are out of reach; the matrix recursion is not
    let eps = C64::new(0.9, 0.0);
    for n in [50, 100, 150, 200] {
        println!("eps = 0.9, N = {n:>3}: {:.2e}", partial_sum_residual_numeric(&x, &y, eps, n)?);
    }
    Ok(())
}
