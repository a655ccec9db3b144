//! Radius of convergence of log(e^{eps X} e^{eps Y}) for 2x2 pairs.

use bchkit::convergence::scan::{example_diagonal_nilpotent, example_nilpotent_pair, short_complex};
use bchkit::convergence::{radius, CMatrix, ScanParams};

fn show(name: &str, x: &CMatrix, y: &CMatrix) -> bchkit::Result<()> {
    let rep = radius(x, y, &ScanParams::default())?;
    println!("{name}: r = {:.10}  magnus bound {:.6}", rep.radius, rep.magnus_bound);
    for c in &rep.collisions {
        println!("    {:<24} p={} q={} {:?}", short_complex(c.epsilon), c.p, c.q, c.class);
    }
    Ok(())
}

fn main() -> bchkit::Result<()> {
    let (x, y) = example_nilpotent_pair(2.0);
    show("nilpotent pair, alpha = 2", &x, &y)?;
    let (x, y) = example_diagonal_nilpotent(2.0, 1.0);
    show("diag(2,-2) with nilpotent Y", &x, &y)?;
    let x = CMatrix::parse("2\n0.3 1.1\n-0.4 0.2")?;
    let y = CMatrix::parse("2\n0.5-0.2i 0\n0.7 -0.1")?;
    show("complex pair", &x, &y)
}
