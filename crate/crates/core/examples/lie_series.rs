//! Lie series as maps on trees: brackets, composition and the automorphism
//! X -> -Y, Y -> -X under which Z(X,Y) = -Z(-Y,-X).

use bchkit::basis::BasisKind;
use bchkit::bch::{bch, RunOptions};
use bchkit::context::Context;
use bchkit::series::{compose, extract_coefficients, Generator, LieSeries};

fn main() -> bchkit::Result<()> {
    let ctx = Context::with_swaps(BasisKind::Hall, 6);
    let x = LieSeries::generator(ctx.set(), Generator::X);
    let y = LieSeries::generator(ctx.set(), Generator::Y);
    let xy = x.bracket(&y)?;
    let c = extract_coefficients(&xy, &ctx)?;
    println!("[X,Y] = {} E_3", c.get(3).unwrap());

    let z = bch(&ctx, &RunOptions::default()).series;
    let image = z.substitute_swap_negate()?;
    println!("Z(X,Y) + Z(-Y,-X) = 0: {}", z.add(&image)?.is_zero());

    // Z(Z(X,Y), -Y) = X
    let coeffs = extract_coefficients(&z, &ctx)?;
    let back = compose(&coeffs, &z, &y.neg())?;
    println!("log(e^Z e^-Y) = X: {}", back.sub(&x)?.is_zero());
    Ok(())
}
