//! TSV, JSON lines and the three-block text layout, with round trips.

use bchkit::basis::BasisKind;
use bchkit::bch::bch_series;
use bchkit::report::{parse_jsonl, parse_tsv, records, write_jsonl, write_pretty, write_tsv, SeriesKind, TableInfo};

fn main() -> bchkit::Result<()> {
    let c = bch_series(BasisKind::Hall, 6)?;
    let rows = records(&c);
    let info = TableInfo::complete(BasisKind::Hall, SeriesKind::Bch, 6);

    let mut tsv = Vec::new();
    write_tsv(&mut tsv, &info, &rows)?;
    let tsv = String::from_utf8(tsv).unwrap();
    print!("{}", tsv.lines().take(6).map(|l| format!("{l}\n")).collect::<String>());
    assert_eq!(parse_tsv(&tsv)?.0, rows);

    let mut jsonl = Vec::new();
    write_jsonl(&mut jsonl, &info, &rows)?;
    let jsonl = String::from_utf8(jsonl).unwrap();
    println!("{}", jsonl.lines().nth(3).unwrap());
    assert_eq!(parse_jsonl(&jsonl)?.1, rows);

    write_pretty(&mut std::io::stdout(), &info, &rows)?;
    Ok(())
}
