//! A run stopped by a memory cap keeps every completed degree. The cap is
//! on the whole process, tree set included.

use bchkit::analysis::compute;
use bchkit::basis::BasisKind;
use bchkit::report::SeriesKind;
use bchkit::resources::current_rss_mb;

fn main() -> bchkit::Result<()> {
    let cap = current_rss_mb().ceil() as u64 + 40;
    let c = compute(BasisKind::Hall, SeriesKind::Bch, 16, Some(cap))?;
    println!(
        "cap {cap} MB: reached degree {} of {}, {} coefficients kept, partial = {}",
        c.info.degree_reached,
        c.info.requested_degree,
        c.coefficients.len(),
        c.info.is_partial()
    );
    for r in &c.reports {
        println!("  degree {:>2}  rss {:.1} MB", r.degree, r.rss_mb);
    }
    Ok(())
}
