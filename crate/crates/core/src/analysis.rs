//! Per-degree statistics and the structural zeros of the Lyndon-basis BCH series.

use std::fmt;

use serde::Serialize;

use crate::basis::{homogeneous_dimension, BasisKind, Word};
use crate::bch::{bch, symmetric_at_one, symmetric_bch, DegreeReport, RunOptions};
use crate::context::Context;
use crate::error::Result;
use crate::rational::Coefficient;
use crate::report::{SeriesKind, TableInfo};
use crate::series::{extract_coefficients, SeriesCoefficients};

/// Output of one engine run: coefficients for every completed degree.
#[derive(Clone, Debug)]
pub struct Computed {
    pub info: TableInfo,
    pub coefficients: SeriesCoefficients,
    pub reports: Vec<DegreeReport>,
    /// `|T̃_n|` restricted to each degree, indexed by degree.
    pub closure_by_degree: Vec<usize>,
    pub closure_len: usize,
}

/// Runs the engine. A memory cap stops it after the first degree that ends
/// above the cap; `info.degree_reached` then says how far it got.
pub fn compute(basis: BasisKind, series: SeriesKind, max_degree: usize, max_memory_mb: Option<u64>) -> Result<Computed> {
    compute_with_progress(basis, series, max_degree, max_memory_mb, None)
}

pub fn compute_with_progress(
    basis: BasisKind,
    series: SeriesKind,
    max_degree: usize,
    max_memory_mb: Option<u64>,
    progress: Option<&(dyn Fn(&DegreeReport) + Sync)>,
) -> Result<Computed> {
    let ctx = Context::new(basis, max_degree);
    let opts = RunOptions { max_memory_mb, progress };
    let (values, reached, reports, limit) = match series {
        SeriesKind::Bch => {
            let run = bch(&ctx, &opts);
            (run.series.clone(), run.degree_reached, run.reports, run.limit_hit)
        }
        SeriesKind::Sbch => {
            let run = symmetric_bch(&ctx, &opts);
            (symmetric_at_one(&run), run.degree_reached, run.reports, run.limit_hit)
        }
    };
    let coefficients = extract_coefficients(&values, &ctx)?.truncated(reached);
    let set = ctx.set();
    let closure_by_degree = (0..=max_degree).map(|n| set.degree_block(n).len()).collect();
    Ok(Computed {
        info: TableInfo { basis, series, requested_degree: max_degree, degree_reached: reached, memory_cap_mb: limit },
        coefficients,
        reports,
        closure_by_degree,
        closure_len: set.closure_len(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeStats {
    pub degree: usize,
    pub dimension: u64,
    pub zeros: usize,
    pub closure_trees: usize,
    /// Cumulative wall time when the degree finished.
    pub seconds: f64,
    pub peak_mb: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Stats {
    pub basis: BasisKind,
    pub series: SeriesKind,
    pub degree_reached: usize,
    pub coefficients: usize,
    pub nonzero: usize,
    pub zeros: usize,
    pub closure_len: usize,
    pub per_degree: Vec<DegreeStats>,
}

pub fn stats(c: &Computed) -> Stats {
    let zeros = c.coefficients.zeros_by_degree();
    let per_degree = c
        .reports
        .iter()
        .map(|r| DegreeStats {
            degree: r.degree,
            dimension: homogeneous_dimension(r.degree),
            zeros: zeros.get(r.degree).copied().unwrap_or(0),
            closure_trees: c.closure_by_degree[r.degree],
            seconds: r.seconds,
            peak_mb: r.peak_mb,
        })
        .collect();
    Stats {
        basis: c.info.basis,
        series: c.info.series,
        degree_reached: c.info.degree_reached,
        coefficients: c.coefficients.len(),
        nonzero: c.coefficients.nonzero_count(),
        zeros: c.coefficients.zero_count(),
        closure_len: c.closure_len,
        per_degree,
    }
}

impl fmt::Display for Stats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "basis={} series={} degree_reached={}", self.basis, self.series, self.degree_reached)?;
        writeln!(f, "{:>6} {:>10} {:>8} {:>12} {:>10} {:>10}", "degree", "dim", "zeros", "trees", "time_s", "peak_mb")?;
        for d in &self.per_degree {
            writeln!(
                f,
                "{:>6} {:>10} {:>8} {:>12} {:>10.3} {:>10.1}",
                d.degree, d.dimension, d.zeros, d.closure_trees, d.seconds, d.peak_mb
            )?;
        }
        writeln!(f, "coefficients {}  nonzero {}  zeros {}", self.coefficients, self.nonzero, self.zeros)?;
        write!(f, "closure set size {}", self.closure_len)
    }
}

/// `dim L_m − dim L_{m−1} + 1`.
pub fn expected_lyndon_zeros(m: usize) -> u64 {
    homogeneous_dimension(m) - homogeneous_dimension(m - 1) + 1
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroCheckDegree {
    pub degree: usize,
    /// Coefficient of `ad_X^{m−1} Y` vanishes.
    pub ad_power_zero: bool,
    /// Words of basis elements outside `[X, L_{m−1}]` with nonzero coefficient.
    pub nonzero_outside: Vec<String>,
    pub zeros: usize,
    pub expected_zeros: u64,
}

impl ZeroCheckDegree {
    pub fn passed(&self) -> bool {
        self.ad_power_zero && self.nonzero_outside.is_empty() && self.zeros as u64 == self.expected_zeros
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroCheck {
    pub degrees: Vec<ZeroCheckDegree>,
}

impl ZeroCheck {
    pub fn passed(&self) -> bool {
        self.degrees.iter().all(ZeroCheckDegree::passed)
    }
}

impl fmt::Display for ZeroCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.degrees {
            let status = if d.passed() { "ok" } else { "FAIL" };
            writeln!(
                f,
                "m={:<3} ad_X^(m-1)Y zero: {:<5}  nonzero outside [X,L_(m-1)]: {:<4}  zeros {} (expected {})  {status}",
                d.degree,
                d.ad_power_zero,
                d.nonzero_outside.len(),
                d.zeros,
                d.expected_zeros
            )?;
            for w in d.nonzero_outside.iter().take(20) {
                writeln!(f, "    violating word {w}")?;
            }
        }
        write!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Checks every even degree `m ≥ 4` of a Lyndon-basis BCH table: the coefficient of
/// `ad_X^{m−1} Y` is zero, every element not of the form `[X, E]` has a zero
/// coefficient, and the zero count is `dim L_m − dim L_{m−1} + 1`.
pub fn lyndon_zero_check(c: &SeriesCoefficients) -> ZeroCheck {
    assert_eq!(c.kind, BasisKind::Lyndon, "zero pattern is stated for the Lyndon basis");
    let zeros = c.zeros_by_degree();
    let degrees = (4..=c.max_degree)
        .step_by(2)
        .map(|m| {
            let ad_word = Word::from_bits(1, m);
            let ad_power_zero = c.by_word(ad_word).is_some_and(Coefficient::is_zero);
            let nonzero_outside = c
                .entries
                .iter()
                .filter(|e| e.degree == m && e.left != 1 && !Coefficient::is_zero(&e.value))
                .map(|e| e.word.to_string())
                .collect();
            ZeroCheckDegree { degree: m, ad_power_zero, nonzero_outside, zeros: zeros[m], expected_zeros: expected_lyndon_zeros(m) }
        })
        .collect();
    ZeroCheck { degrees }
}
