//! Coefficient tables on disk: TSV, JSON lines and a three-block text layout.
//!
//! Rationals are always written as two decimal integers.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::basis::BasisKind;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::series::SeriesCoefficients;

/// Which series a table holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesKind {
    /// `log(e^X e^Y)`.
    Bch,
    /// `log(e^{X/2} e^Y e^{X/2})`.
    Sbch,
}

impl fmt::Display for SeriesKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeriesKind::Bch => "bch",
            SeriesKind::Sbch => "sbch",
        })
    }
}

impl FromStr for SeriesKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bch" => Ok(SeriesKind::Bch),
            "sbch" => Ok(SeriesKind::Sbch),
            _ => Err(Error::Parse { line: 0, msg: format!("unknown series '{s}'") }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Tsv,
    Jsonl,
    Pretty,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tsv" => Ok(Format::Tsv),
            "jsonl" => Ok(Format::Jsonl),
            "pretty" => Ok(Format::Pretty),
            _ => Err(Error::Parse { line: 0, msg: format!("unknown format '{s}'") }),
        }
    }
}

/// One coefficient row. `i_prime = i`, `i_dprime = 0` for the generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub i: usize,
    pub degree: usize,
    pub i_prime: usize,
    pub i_dprime: usize,
    pub word: String,
    #[serde(with = "decimal")]
    pub numerator: BigInt,
    #[serde(with = "decimal")]
    pub denominator: BigInt,
}

/// Big integers as decimal strings, so JSON readers never round them.
mod decimal {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

impl OutputRecord {
    pub fn value(&self) -> Rational {
        Rational::new(self.numerator.clone(), self.denominator.clone())
    }

    fn check(&self, line: usize) -> Result<()> {
        let bad = |msg: &str| Err(Error::Parse { line, msg: msg.to_string() });
        if !self.denominator.is_positive() {
            return bad("denominator must be positive");
        }
        if !self.numerator.gcd(&self.denominator).is_one() && !(self.numerator.is_zero() && self.denominator.is_one()) {
            return bad("fraction not in lowest terms");
        }
        Ok(())
    }
}

/// Rows of a coefficient table, sorted by (degree, index).
pub fn records(c: &SeriesCoefficients) -> Vec<OutputRecord> {
    c.entries
        .iter()
        .map(|e| OutputRecord {
            i: e.index,
            degree: e.degree,
            i_prime: e.left,
            i_dprime: e.right,
            word: e.word.to_string(),
            numerator: e.value.numer().clone(),
            denominator: e.value.denom().clone(),
        })
        .collect()
}

/// What was computed; written ahead of the rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableInfo {
    pub basis: BasisKind,
    pub series: SeriesKind,
    pub requested_degree: usize,
    pub degree_reached: usize,
    /// Set when a memory cap stopped the run early.
    pub memory_cap_mb: Option<u64>,
}

impl TableInfo {
    pub fn complete(basis: BasisKind, series: SeriesKind, degree: usize) -> Self {
        TableInfo { basis, series, requested_degree: degree, degree_reached: degree, memory_cap_mb: None }
    }

    pub fn is_partial(&self) -> bool {
        self.degree_reached < self.requested_degree
    }

    fn comment_lines(&self) -> Vec<String> {
        let mut out = vec![format!(
            "basis={} series={} max_degree={} degree_reached={}",
            self.basis, self.series, self.requested_degree, self.degree_reached
        )];
        if self.is_partial() {
            let cap = self.memory_cap_mb.map_or(String::new(), |m| format!(" ({m} MB memory cap)"));
            out.push(format!(
                "PARTIAL OUTPUT: stopped after degree {} of {}{cap}",
                self.degree_reached, self.requested_degree
            ));
        }
        out
    }
}

pub const TSV_HEADER: &str = "i\tdegree\ti_prime\ti_dprime\tword\tnumerator\tdenominator";

pub fn write_tsv(w: &mut impl Write, info: &TableInfo, rows: &[OutputRecord]) -> Result<()> {
    for c in info.comment_lines() {
        writeln!(w, "# {c}")?;
    }
    writeln!(w, "{TSV_HEADER}")?;
    for r in rows {
        writeln!(w, "{}\t{}\t{}\t{}\t{}\t{}\t{}", r.i, r.degree, r.i_prime, r.i_dprime, r.word, r.numerator, r.denominator)?;
    }
    Ok(())
}

/// Parses TSV rows; `#` lines are returned separately.
pub fn parse_tsv(text: &str) -> Result<(Vec<OutputRecord>, Vec<String>)> {
    let mut rows = Vec::new();
    let mut comments = Vec::new();
    let mut header = false;
    for (n, line) in text.lines().enumerate() {
        let line_no = n + 1;
        if let Some(c) = line.strip_prefix('#') {
            comments.push(c.trim().to_string());
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        if !header {
            if line != TSV_HEADER {
                return Err(Error::Parse { line: line_no, msg: "expected the column header".into() });
            }
            header = true;
            continue;
        }
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != 7 {
            return Err(Error::Parse { line: line_no, msg: format!("expected 7 fields, found {}", f.len()) });
        }
        let int = |s: &str| -> Result<usize> { s.parse().map_err(|_| Error::Parse { line: line_no, msg: format!("bad integer '{s}'") }) };
        let big = |s: &str| -> Result<BigInt> { s.parse().map_err(|_| Error::Parse { line: line_no, msg: format!("bad integer '{s}'") }) };
        let r = OutputRecord {
            i: int(f[0])?,
            degree: int(f[1])?,
            i_prime: int(f[2])?,
            i_dprime: int(f[3])?,
            word: f[4].to_string(),
            numerator: big(f[5])?,
            denominator: big(f[6])?,
        };
        r.check(line_no)?;
        rows.push(r);
    }
    Ok((rows, comments))
}

/// First line is the [`TableInfo`] object, then one record per line.
pub fn write_jsonl(w: &mut impl Write, info: &TableInfo, rows: &[OutputRecord]) -> Result<()> {
    writeln!(w, "{}", serde_json::to_string(info).expect("serializable"))?;
    for r in rows {
        writeln!(w, "{}", serde_json::to_string(r).expect("serializable"))?;
    }
    Ok(())
}

pub fn parse_jsonl(text: &str) -> Result<(TableInfo, Vec<OutputRecord>)> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, first) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty input".into() })?;
    let info: TableInfo = serde_json::from_str(first).map_err(|e| Error::Parse { line: 1, msg: e.to_string() })?;
    let mut rows = Vec::new();
    for (n, line) in lines {
        let r: OutputRecord = serde_json::from_str(line).map_err(|e| Error::Parse { line: n + 1, msg: e.to_string() })?;
        r.check(n + 1)?;
        rows.push(r);
    }
    Ok((info, rows))
}

/// Three column blocks of `i  i'  i''  value`, filled
/// column by column; `i'`, `i''` are blank for the generators.
pub fn write_pretty(w: &mut impl Write, info: &TableInfo, rows: &[OutputRecord]) -> Result<()> {
    let basis = match info.basis {
        BasisKind::Hall => "classical Hall basis",
        BasisKind::Lyndon => "Lyndon basis",
    };
    let (series, symbol) = match info.series {
        SeriesKind::Bch => ("BCH series", "z_i"),
        SeriesKind::Sbch => ("symmetric BCH series", "w_i"),
    };
    writeln!(w, "{series} in the {basis}, degree <= {}", info.degree_reached)?;
    for c in info.comment_lines().iter().skip(1) {
        writeln!(w, "{c}")?;
    }
    let block = |a: &str, b: &str, c: &str, d: &str| format!("{a:>4} {b:>4} {c:>4} {d:>16}");
    let header = vec![block("i", "i'", "i''", symbol); 3].join(" | ");
    writeln!(w, "{header}")?;
    writeln!(w, "{}", "-".repeat(header.len()))?;
    let height = rows.len().div_ceil(3);
    for r in 0..height {
        let cells: Vec<String> = (0..3)
            .map(|col| match rows.get(col * height + r) {
                Some(x) => {
                    let (p, q) = if x.i_dprime == 0 { (String::new(), String::new()) } else { (x.i_prime.to_string(), x.i_dprime.to_string()) };
                    block(&x.i.to_string(), &p, &q, &format_fraction(&x.value()))
                }
                None => block("", "", "", ""),
            })
            .collect();
        writeln!(w, "{}", cells.join(" | ").trim_end())?;
    }
    Ok(())
}

/// `-1/2`, `3`, `0`.
pub fn format_fraction(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn write_table(w: &mut impl Write, format: Format, info: &TableInfo, rows: &[OutputRecord]) -> Result<()> {
    match format {
        Format::Tsv => write_tsv(w, info, rows),
        Format::Jsonl => write_jsonl(w, info, rows),
        Format::Pretty => write_pretty(w, info, rows),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bch::bch_series;

    fn sample() -> (TableInfo, Vec<OutputRecord>) {
        let c = bch_series(BasisKind::Hall, 5).unwrap();
        (TableInfo::complete(BasisKind::Hall, SeriesKind::Bch, 5), records(&c))
    }

    #[test]
    fn tsv_round_trip() {
        let (info, rows) = sample();
        let mut buf = Vec::new();
        write_tsv(&mut buf, &info, &rows).unwrap();
        let (back, comments) = parse_tsv(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(back, rows);
        assert_eq!(comments.len(), 1);
    }

    #[test]
    fn jsonl_round_trip_and_string_integers() {
        let (mut info, rows) = sample();
        info.requested_degree = 7;
        info.memory_cap_mb = Some(10);
        let mut buf = Vec::new();
        write_jsonl(&mut buf, &info, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.lines().nth(3).unwrap().contains("\"numerator\":\"-1\""));
        let (i2, back) = parse_jsonl(&text).unwrap();
        assert_eq!((i2, back), (info, rows));
    }

    #[test]
    fn partial_output_is_marked() {
        let (mut info, rows) = sample();
        info.requested_degree = 9;
        let mut buf = Vec::new();
        write_tsv(&mut buf, &info, &rows).unwrap();
        assert!(String::from_utf8(buf).unwrap().lines().nth(1).unwrap().starts_with("# PARTIAL OUTPUT"));
    }

    #[test]
    fn rejects_unreduced_fractions() {
        let text = format!("{TSV_HEADER}\n3\t2\t2\t1\tyx\t-2\t4\n");
        assert!(parse_tsv(&text).is_err());
    }
}
