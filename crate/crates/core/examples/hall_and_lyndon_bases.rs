//! The two Hall-Viennot bases side by side, with the Witt dimension check.

use bchkit::basis::{homogeneous_dimension, BasisKind, BasisTable};

fn main() -> bchkit::Result<()> {
    for kind in [BasisKind::Hall, BasisKind::Lyndon] {
        let t = BasisTable::build(kind, 5);
        t.validate()?;
        println!("{kind} basis");
        for (i, e) in t.entries() {
            println!("  {i:>2}  |i|={}  ({:>2},{:>2})  {:<6} {}", e.degree, e.left, e.right, e.word, t.element_expression(i)?);
        }
    }
    let t = BasisTable::build(BasisKind::Lyndon, 12);
    for n in 1..=12 {
        assert_eq!(t.degree_range(n).len() as u64, homogeneous_dimension(n));
    }
    println!("dimensions through degree 12: {:?}", (1..=12).map(homogeneous_dimension).collect::<Vec<_>>());
    Ok(())
}
