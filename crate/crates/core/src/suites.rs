//! Self-check suites run by `bchkit check`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::analysis::{compute, lyndon_zero_check};
use crate::basis::{BasisKind, BasisTable, Word};
use crate::bch::{bch_series, symmetric_bch_series};
use crate::context::Context;
use crate::convergence::scan::{example_diagonal_nilpotent, example_nilpotent_pair, partial_sum_residual, partial_sum_residual_numeric};
use crate::convergence::{radius, ScanParams, C64};
use crate::error::{Error, Result};
use crate::golden::{self, CoefficientRow, ElementRow};
use crate::rational::{q, Rational};
use crate::report::SeriesKind;
use crate::series::SeriesCoefficients;
use crate::thompson::solve_rho;
use crate::words::{expand_to_words, word_log_oracle};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Tables,
    Oracle,
    LyndonZeros,
    Thompson,
    RadiusExamples,
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "tables" => Suite::Tables,
            "oracle" => Suite::Oracle,
            "lyndon-zeros" => Suite::LyndonZeros,
            "thompson" => Suite::Thompson,
            "radius-examples" => Suite::RadiusExamples,
            _ => return Err(Error::Parse { line: 0, msg: format!("unknown suite '{s}'") }),
        })
    }
}

/// One named check with a one-line explanation.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{s}  {:<36} {:>8.3}s  {}", self.name, self.seconds, self.detail)
    }
}

fn timed(name: &str, f: impl FnOnce() -> Result<(bool, String)>) -> Check {
    let t = Instant::now();
    let (passed, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
    Check { name: name.to_string(), passed, detail, seconds: t.elapsed().as_secs_f64() }
}

/// Runs a suite. `max_degree` overrides the suite's default degree where one applies.
pub fn run(suite: Suite, max_degree: Option<usize>) -> Vec<Check> {
    match suite {
        Suite::Tables => tables(),
        Suite::Oracle => oracle(max_degree.unwrap_or(8)),
        Suite::LyndonZeros => lyndon_zeros(max_degree.unwrap_or(12)),
        Suite::Thompson => thompson(),
        Suite::RadiusExamples => radius_examples(),
    }
}

fn compare_coefficients(c: &SeriesCoefficients, rows: &[CoefficientRow]) -> (bool, String) {
    let bad: Vec<usize> = rows
        .iter()
        .filter(|r| {
            c.entries.get(r.index - 1).is_none_or(|e| e.left != r.left || e.right != r.right || e.value != r.value)
        })
        .map(|r| r.index)
        .collect();
    let ok = bad.is_empty() && c.len() == rows.len();
    (ok, format!("{} rows, mismatches at {:?}", rows.len(), bad))
}

/// Compares structure by child words, so the check does not depend on index order within a degree.
fn compare_elements(kind: BasisKind, rows: &[ElementRow]) -> Result<(bool, String)> {
    let ctx = Context::new(kind, 5);
    let table = ctx.table();
    let c = bch_series(kind, 5)?;
    let golden_word = |i: usize| rows.iter().find(|r| r.index == i).map(|r| table_word(table, r, kind));
    let mut bad = Vec::new();
    for r in rows {
        let w = table_word(table, r, kind);
        let Some(i) = table.index_of_word(w) else {
            bad.push(format!("{w}: not in basis"));
            continue;
        };
        let e = table.get(i);
        let children_ok = if r.right == 0 {
            e.is_generator()
        } else {
            golden_word(r.left) == Some(table.get(e.left).word) && golden_word(r.right) == Some(table.get(e.right).word)
        };
        let sigma_ok = ctx.hall().sigma(i) == r.sigma;
        let z_ok = match erratum(kind, w) {
            Some(fixed) => c.get(i) == Some(&fixed) && fixed == -r.z.clone() && oracle_agrees(w, &fixed),
            None => c.get(i) == Some(&r.z),
        };
        if !(children_ok && sigma_ok && z_ok && e.degree == r.degree) {
            bad.push(w.to_string());
        }
    }
    let fixed: Vec<String> = rows.iter().filter_map(|r| r.word.filter(|&w| erratum(kind, w).is_some())).map(|w| w.to_string()).collect();
    let note = if fixed.is_empty() { String::new() } else { format!(", tabulated sign corrected for {fixed:?}") };
    Ok((bad.is_empty(), format!("{} rows, mismatches {:?}{note}", rows.len(), bad)))
}

/// Reference rows whose tabulated value has the wrong sign. `[[[[X,Y],Y],Y],Y] = ad_Y^4 X`
/// carries `−1/720`, the image of the `ad_X^4 Y` coefficient under `Z(X,Y) = −Z(−Y,−X)`.
fn erratum(kind: BasisKind, w: Word) -> Option<Rational> {
    (kind == BasisKind::Lyndon && w.to_string() == "xyyyy").then(|| q(-1, 720))
}

/// `xyyyy` is the only Lyndon word with one `x` and four `y`, and its element
/// expands with leading word coefficient 1, so the word coefficient in
/// `log(e^x e^y)` is the basis coefficient.
fn oracle_agrees(w: Word, value: &Rational) -> bool {
    word_log_oracle(w.len()).get(w) == *value
}

/// Word of a reference element row; Hall rows carry no word and are keyed by index.
fn table_word(table: &BasisTable, r: &ElementRow, kind: BasisKind) -> Word {
    match (kind, r.word) {
        (_, Some(w)) => w,
        _ => table.get(r.index).word,
    }
}

pub fn tables() -> Vec<Check> {
    vec![
        timed("hall bch degree <= 9", || Ok(compare_coefficients(&bch_series(BasisKind::Hall, 9)?, &golden::hall_bch()))),
        timed("hall symmetric bch degree <= 9", || {
            Ok(compare_coefficients(&symmetric_bch_series(BasisKind::Hall, 9)?, &golden::hall_symmetric_bch()))
        }),
        timed("hall elements degree <= 5", || compare_elements(BasisKind::Hall, &golden::hall_elements())),
        timed("lyndon elements degree <= 5", || compare_elements(BasisKind::Lyndon, &golden::lyndon_elements())),
    ]
}

pub fn oracle(max_degree: usize) -> Vec<Check> {
    [BasisKind::Hall, BasisKind::Lyndon]
        .into_iter()
        .map(|kind| {
            timed(&format!("{kind} word expansion = log(e^x e^y), N={max_degree}"), || {
                let c = bch_series(kind, max_degree)?;
                let got = expand_to_words(&c, max_degree);
                let want = word_log_oracle(max_degree);
                let words = (1..=max_degree).map(|n| 1usize << n).sum::<usize>();
                Ok((got == want, format!("{words} words compared")))
            })
        })
        .collect()
}

pub fn lyndon_zeros(max_degree: usize) -> Vec<Check> {
    vec![timed(&format!("lyndon zero pattern, N={max_degree}"), || {
        let c = compute(BasisKind::Lyndon, SeriesKind::Bch, max_degree, None)?;
        let check = lyndon_zero_check(&c.coefficients);
        let summary: Vec<String> = check.degrees.iter().map(|d| format!("m={}:{}/{}", d.degree, d.zeros, d.expected_zeros)).collect();
        Ok((check.passed(), summary.join(" ")))
    })]
}

/// Reference values of `ρ` through degree 4 (Hall indices 2..8) and the
/// two degree-5 relations `ρ12 + ρ10 = −137/184320`, `ρ13 + ρ10 = −511/737280`.
pub fn thompson() -> Vec<Check> {
    let low: [(usize, Rational); 7] = [
        (2, q(-1, 4)),
        (3, q(5, 96)),
        (4, q(1, 384)),
        (5, q(11, 768)),
        (6, q(-143, 92160)),
        (7, q(-283, 92160)),
        (8, q(11, 23040)),
    ];
    vec![
        timed("rho through degree 4", || {
            let sol = solve_rho(BasisKind::Hall, 5)?;
            let bad: Vec<usize> = low.iter().filter(|(i, v)| sol.particular.get(*i) != Some(v)).map(|(i, _)| *i).collect();
            Ok((bad.is_empty() && sol.free_indices.is_empty(), format!("mismatches {bad:?}")))
        }),
        timed("degree-5 affine family", || {
            let sol = solve_rho(BasisKind::Hall, 6)?;
            let sum = |c: &SeriesCoefficients, a: usize| c.get(a).cloned().unwrap_or_default() + c.get(10).cloned().unwrap_or_default();
            let mut ok = sol.free_indices.len() == 1;
            ok &= sum(&sol.particular, 12) == q(-137, 184320) && sum(&sol.particular, 13) == q(-511, 737280);
            for d in &sol.directions {
                ok &= sum(d, 12) == q(0, 1) && sum(d, 13) == q(0, 1);
            }
            let t = BTreeMap::from([(sol.free_indices[0], q(3, 5))]);
            let p = sol.family_point(&t)?;
            Ok((ok, format!("free indices {:?}, sample point rho10={} rho12={}", sol.free_indices, p.get(10).unwrap(), p.get(12).unwrap())))
        }),
    ]
}

pub fn radius_examples() -> Vec<Check> {
    vec![
        timed("nilpotent pair, alpha=2: r = 1", || {
            let (x, y) = example_nilpotent_pair(2.0);
            let rep = radius(&x, &y, &ScanParams::default())?;
            Ok(((rep.radius - 1.0).abs() <= 1e-6, format!("r = {:.12}, magnus bound {:.6}", rep.radius, rep.magnus_bound)))
        }),
        timed("diagonal/nilpotent, alpha=2: r = pi/2", || {
            let (x, y) = example_diagonal_nilpotent(2.0, 1.0);
            let rep = radius(&x, &y, &ScanParams::default())?;
            Ok(((rep.radius - PI / 2.0).abs() <= 1e-6, format!("r = {:.12}", rep.radius)))
        }),
        timed("partial-sum residuals", || {
            let (x, y) = example_nilpotent_pair(2.0);
            let c = bch_series(BasisKind::Hall, 15)?;
            let quarter = C64::new(0.25, 0.0);
            let r10 = partial_sum_residual(&x, &y, quarter, 10, &c)?;
            let r15 = partial_sum_residual(&x, &y, quarter, 15, &c)?;
            let r150 = partial_sum_residual_numeric(&x, &y, C64::new(0.9, 0.0), 150)?;
            let within = |r: f64, order: f64| r <= order * 10.0 && r >= order / 10.0;
            let ok = r10 <= 1e-6 && r15 <= 1e-9 && r150 <= 1e-7 && within(r10, 1e-7) && within(r15, 1e-10) && within(r150, 1e-8);
            Ok((ok, format!("eps=1/4 N=10: {r10:.2e}, N=15: {r15:.2e}; eps=0.9 N=150: {r150:.2e}")))
        }),
    ]
}
