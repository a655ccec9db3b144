//! Bicoloured rooted trees: grafting, splitting sequences, symmetry numbers,
//! and the closure set the engine works on.

use bchkit::basis::BasisKind;
use bchkit::context::Context;
use bchkit::trees::{Color, TreeRegistry};

fn main() -> bchkit::Result<()> {
    let mut reg = TreeRegistry::new();
    let b = reg.leaf(Color::Black);
    let w = reg.leaf(Color::White);
    let bw = reg.graft(b, w)?;
    let u = reg.build(Color::Black, &[w, w, bw])?;
    println!("u = {}  ({} vertices, sigma = {})", reg.canonical_string(u), reg.degree(u), reg.automorphism_count(u));
    for (root, cut) in reg.splitting_sequence(u)? {
        println!("  split: {} | {}", reg.canonical_string(root), reg.canonical_string(cut));
    }

    let ctx = Context::new(BasisKind::Hall, 8);
    let hall = ctx.hall();
    for i in 1..=8 {
        println!("u_{i} = {:<16} sigma = {}", ctx.registry().canonical_string(hall.tree(i)), hall.sigma(i));
    }
    let set = ctx.set();
    println!("closure set for N = 8: {} trees", set.closure_len());
    for n in 1..=8 {
        println!("  {n} vertices: {}", set.degree_block(n).len());
    }
    Ok(())
}
