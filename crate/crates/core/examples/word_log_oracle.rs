//! Cross-check against plain noncommutative power series: expand the
//! computed BCH series into words and compare with log(e^x e^y).

use bchkit::basis::BasisKind;
use bchkit::bch::bch_series;
use bchkit::words::{expand_to_words, word_log_oracle};

fn main() -> bchkit::Result<()> {
    let n = 8;
    let oracle = word_log_oracle(n);
    for kind in [BasisKind::Hall, BasisKind::Lyndon] {
        let c = bch_series(kind, n)?;
        let words = expand_to_words(&c, n);
        println!("{kind}: word expansion equals log(e^x e^y) through length {n}: {}", words == oracle);
    }
    for (w, v) in oracle.terms().take(8) {
        println!("  {w:<6} {v}");
    }
    Ok(())
}
