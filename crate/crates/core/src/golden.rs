//! Reference coefficient tables, embedded at compile time.

use crate::basis::Word;
use crate::error::{Error, Result};
use crate::rational::{parse_rational, Rational};

const HALL_ELEMENTS: &str = include_str!("../data/hall_elements.tsv");
const LYNDON_ELEMENTS: &str = include_str!("../data/lyndon_elements.tsv");
const HALL_BCH: &str = include_str!("../data/hall_bch.tsv");
const HALL_SYMMETRIC_BCH: &str = include_str!("../data/hall_sbch.tsv");

/// One row of an element table (degree ≤ 5). `left`/`right` are the
/// reference indices; `right` is 0 for generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementRow {
    pub index: usize,
    pub degree: usize,
    pub left: usize,
    pub right: usize,
    pub word: Option<Word>,
    pub expression: String,
    pub sigma: u64,
    pub z: Rational,
}

/// One row of a coefficient table (degree ≤ 9).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientRow {
    pub index: usize,
    pub left: usize,
    pub right: usize,
    pub value: Rational,
}

fn rows(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .skip(1)
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(k, l)| (k + 1, l.split('\t').collect()))
}

fn field<T: std::str::FromStr>(cols: &[&str], k: usize, line: usize) -> Result<T> {
    cols.get(k)
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| Error::Parse { line, msg: format!("bad column {k}") })
}

fn ratio(cols: &[&str], k: usize, line: usize) -> Result<Rational> {
    let s = format!("{}/{}", cols.get(k).unwrap_or(&""), cols.get(k + 1).unwrap_or(&""));
    parse_rational(&s).ok_or_else(|| Error::Parse { line, msg: format!("bad rational {s}") })
}

fn parse_elements(text: &str, with_word: bool) -> Result<Vec<ElementRow>> {
    let off = usize::from(with_word);
    rows(text)
        .map(|(line, c)| {
            Ok(ElementRow {
                index: field(&c, 0, line)?,
                degree: field(&c, 1, line)?,
                left: field(&c, 2, line)?,
                right: field(&c, 3, line)?,
                word: if with_word { Some(field(&c, 4, line)?) } else { None },
                expression: c.get(4 + off).unwrap_or(&"").to_string(),
                sigma: field(&c, 5 + off, line)?,
                z: ratio(&c, 6 + off, line)?,
            })
        })
        .collect()
}

fn parse_coefficients(text: &str) -> Result<Vec<CoefficientRow>> {
    rows(text)
        .map(|(line, c)| {
            Ok(CoefficientRow {
                index: field(&c, 0, line)?,
                left: field(&c, 1, line)?,
                right: field(&c, 2, line)?,
                value: ratio(&c, 3, line)?,
            })
        })
        .collect()
}

/// Hall basis elements of degree ≤ 5 with `σ` and BCH coefficient.
pub fn hall_elements() -> Vec<ElementRow> {
    parse_elements(HALL_ELEMENTS, false).expect("embedded table")
}

/// Lyndon basis elements of degree ≤ 5 with words, `σ` and BCH coefficient.
pub fn lyndon_elements() -> Vec<ElementRow> {
    parse_elements(LYNDON_ELEMENTS, true).expect("embedded table")
}

/// BCH coefficients in the Hall basis, degree ≤ 9 (127 rows).
pub fn hall_bch() -> Vec<CoefficientRow> {
    parse_coefficients(HALL_BCH).expect("embedded table")
}

/// Symmetric BCH coefficients in the Hall basis, degree ≤ 9 (127 rows).
pub fn hall_symmetric_bch() -> Vec<CoefficientRow> {
    parse_coefficients(HALL_SYMMETRIC_BCH).expect("embedded table")
}
