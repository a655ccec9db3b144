//! rho(X,Y) with Z = e^{ad_rho(X,Y)} X + e^{ad_rho(-Y,-X)} Y, and its free parameters.

use std::collections::BTreeMap;

use bchkit::basis::BasisKind;
use bchkit::rational::q;
use bchkit::thompson::{free_parameters_by_degree, single_y_projection, ThompsonSolver};

fn main() -> bchkit::Result<()> {
    let solver = ThompsonSolver::new(BasisKind::Hall, 7)?;
    let sol = solver.solve()?;
    for e in sol.particular.entries.iter().filter(|e| e.degree <= 5) {
        println!("rho_{:<2} = {}", e.index, e.value);
    }
    println!("free parameters by degree: {:?}", free_parameters_by_degree(&sol));

    let params: BTreeMap<usize, _> = sol.free_indices.iter().map(|&f| (f, q(1, 3))).collect();
    let rho = solver.solve_with(&params)?;
    println!("residual vanishes for a non-zero choice: {}", solver.residual(&rho)?.is_zero());

    let f: Vec<String> = single_y_projection(&sol.particular).iter().map(|r| r.to_string()).collect();
    println!("f(z) coefficients: {}", f.join(", "));
    Ok(())
}
