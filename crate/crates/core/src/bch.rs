//! BCH and symmetric BCH series on trees.
//!
//! Both series are computed degree by degree. For a tree `u` with `n`
//! vertices, every adjoint power `ad_Z^k V (u)` only needs values on trees
//! with fewer vertices, so each degree is one parallel sweep.

use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::basis::BasisKind;
use crate::context::Context;
use crate::error::{Error, Result};
use crate::rational::{from_int, Coefficient, Rational};
use crate::resources::{current_rss_mb, peak_rss_mb};
use crate::series::{bracket_value, extract_coefficients, LieSeries, SeriesCoefficients};
use crate::trees::TreeSet;

/// Bernoulli numbers `B_0..B_K` (convention `B_1 = −1/2`), from
/// `Σ_{j=0}^{m} C(m+1, j) B_j = 0`.
#[derive(Clone, Debug)]
pub struct BernoulliCache {
    values: Vec<Rational>,
}

impl BernoulliCache {
    pub fn new(k: usize) -> Self {
        let mut values: Vec<Rational> = Vec::with_capacity(k + 1);
        values.push(from_int(1));
        for m in 1..=k {
            // binom(m+1, j) for j = 0..m
            let mut binom = BigInt::from(1);
            let mut acc = <Rational as Coefficient>::zero();
            for (j, b) in values.iter().enumerate() {
                acc += b * Rational::from_integer(binom.clone());
                binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
            }
            values.push(-acc / Rational::from_integer(BigInt::from(m + 1)));
        }
        BernoulliCache { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, n: usize) -> &Rational {
        &self.values[n]
    }

    /// `B_n / n!`.
    pub fn over_factorial(&self, n: usize) -> Rational {
        let mut f = BigInt::from(1);
        for k in 2..=n {
            f *= k;
        }
        &self.values[n] / Rational::from_integer(f)
    }
}

pub fn bernoulli(n: usize) -> Rational {
    BernoulliCache::new(n).get(n).clone()
}

/// Polynomial in the formal parameter `τ`, coefficients low to high, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TauPoly(Vec<Rational>);

impl TauPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        TauPoly(coeffs)
    }

    /// The monomial `τ`.
    pub fn tau() -> Self {
        TauPoly(vec![<Rational as Coefficient>::zero(), <Rational as Coefficient>::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// `∫_0^τ p(s) ds`.
    pub fn integrate(&self) -> Self {
        let mut c = Vec::with_capacity(self.0.len() + 1);
        c.push(<Rational as Coefficient>::zero());
        for (k, a) in self.0.iter().enumerate() {
            c.push(a / from_int(k as i64 + 1));
        }
        TauPoly::new(c)
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.0.iter().rev().fold(<Rational as Coefficient>::zero(), |acc, c| acc * t + c)
    }

    pub fn at_one(&self) -> Rational {
        self.0.iter().fold(<Rational as Coefficient>::zero(), |acc, c| acc + c)
    }
}

impl Coefficient for TauPoly {
    fn zero() -> Self {
        TauPoly(Vec::new())
    }
    fn one() -> Self {
        TauPoly(vec![<Rational as Coefficient>::one()])
    }
    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    fn add_assign_ref(&mut self, other: &Self) {
        if self.0.len() < other.0.len() {
            self.0.resize(other.0.len(), <Rational as Coefficient>::zero());
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += b;
        }
        *self = TauPoly::new(std::mem::take(&mut self.0));
    }
    fn sub_assign_ref(&mut self, other: &Self) {
        self.add_assign_ref(&other.neg());
    }
    fn mul_ref(&self, other: &Self) -> Self {
        if self.0.is_empty() || other.0.is_empty() {
            return TauPoly(Vec::new());
        }
        let mut c = vec![<Rational as Coefficient>::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        TauPoly::new(c)
    }
    fn mul_rational(&self, r: &Rational) -> Self {
        TauPoly::new(self.0.iter().map(|a| a * r).collect())
    }
    fn neg(&self) -> Self {
        TauPoly(self.0.iter().map(|a| -a).collect())
    }
}

/// Timing and memory after one completed degree.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeReport {
    pub degree: usize,
    pub trees: usize,
    pub seconds: f64,
    pub rss_mb: f64,
    pub peak_mb: f64,
}

#[derive(Default)]
pub struct RunOptions<'a> {
    /// Stop after the first degree whose completion leaves the process above this many MB.
    pub max_memory_mb: Option<u64>,
    pub progress: Option<&'a (dyn Fn(&DegreeReport) + Sync)>,
}

/// Result of a degree-by-degree run; `degree_reached < N` only when the memory cap was hit.
#[derive(Clone, Debug)]
pub struct Run<T> {
    pub series: LieSeries<T>,
    pub degree_reached: usize,
    pub reports: Vec<DegreeReport>,
    pub limit_hit: Option<u64>,
}

impl<T> Run<T> {
    pub fn is_complete(&self) -> bool {
        self.limit_hit.is_none()
    }

    pub fn limit_error(&self) -> Option<Error> {
        self.limit_hit.map(|limit_mb| Error::ResourceLimit { degree_reached: self.degree_reached, limit_mb })
    }
}

/// Sweeps degrees `2..=N`. For each tree `u` of degree `n` it computes
/// `ad^k(u) = [Z, ad^{k-1}](u)` for `k = 1..n-1`, then `Z(u) = f(u, ad^*(u), Z)`.
fn ad_recursion<T, F>(set: &Arc<TreeSet>, seed: Vec<T>, mut z: Vec<T>, opts: &RunOptions, f: F) -> Run<T>
where
    T: Coefficient,
    F: Fn(usize, usize, &[T], &[T]) -> T + Sync,
{
    let big_n = set.max_degree();
    let start = Instant::now();
    let mut ads: Vec<Vec<T>> = vec![seed];
    let mut reports = Vec::new();
    let mut limit_hit = None;
    let mut reached = 1;
    let report = |n: usize, trees: usize| DegreeReport {
        degree: n,
        trees,
        seconds: start.elapsed().as_secs_f64(),
        rss_mb: current_rss_mb(),
        peak_mb: peak_rss_mb(),
    };
    let r1 = report(1, set.degree_block(1).len());
    if let Some(p) = opts.progress {
        p(&r1);
    }
    reports.push(r1);
    for n in 2..=big_n {
        while ads.len() < n {
            ads.push(vec![T::zero(); set.len()]);
        }
        let block = set.degree_block(n);
        let computed: Vec<(Vec<T>, T)> = block
            .clone()
            .into_par_iter()
            .map(|u| {
                let mut at_u: Vec<T> = Vec::with_capacity(n);
                at_u.push(ads[0][u].clone());
                for k in 1..n {
                    at_u.push(bracket_value(set, &z, &ads[k - 1], u));
                }
                let zu = f(u, n, &at_u, &z);
                (at_u, zu)
            })
            .collect();
        for (u, (at_u, zu)) in block.clone().zip(computed) {
            for (k, v) in at_u.into_iter().enumerate().skip(1) {
                ads[k][u] = v;
            }
            z[u] = zu;
        }
        reached = n;
        let r = report(n, block.len());
        if let Some(p) = opts.progress {
            p(&r);
        }
        let over = opts.max_memory_mb.filter(|&cap| r.rss_mb > cap as f64);
        reports.push(r);
        if over.is_some() && n < big_n {
            limit_hit = over;
            break;
        }
    }
    Run {
        series: LieSeries::from_values(set, z).expect("sized to set"),
        degree_reached: reached,
        reports,
        limit_hit,
    }
}

/// `Z = log(e^X e^Y)` as a tree map, from
/// `n Z(u) = ½[X−Y, Z](u) + Σ_{p=1}^{⌊(n−1)/2⌋} B_{2p}/(2p)! ad_Z^{2p}(X+Y)(u)`.
pub fn bch(ctx: &Context, opts: &RunOptions) -> Run<Rational> {
    let set = ctx.set();
    let n_max = ctx.max_degree();
    let bern = BernoulliCache::new(n_max.max(2));
    let ratios: Vec<Rational> = (0..=n_max).map(|k| bern.over_factorial(k)).collect();
    let mut seed = vec![<Rational as Coefficient>::zero(); set.len()];
    let mut x_minus_y = vec![<Rational as Coefficient>::zero(); set.len()];
    seed[set.black()] = from_int(1);
    seed[set.white()] = from_int(1);
    x_minus_y[set.black()] = from_int(1);
    x_minus_y[set.white()] = from_int(-1);
    let z = seed.clone();
    let half = Rational::new(1.into(), 2.into());
    let set_ref: &TreeSet = set;
    ad_recursion(set, seed, z, opts, |u, n, ads, z| {
        let mut acc = bracket_value(set_ref, &x_minus_y, z, u) * &half;
        for p in 1..=(n - 1) / 2 {
            let a = &ads[2 * p];
            if !a.is_zero() {
                acc += a * &ratios[2 * p];
            }
        }
        acc / from_int(n as i64)
    })
}

/// BCH coefficients of a completed run (degrees up to the one reached).
pub fn run_coefficients(run: &Run<Rational>, ctx: &Context) -> Result<SeriesCoefficients> {
    Ok(extract_coefficients(&run.series, ctx)?.truncated(run.degree_reached))
}

/// BCH coefficients `z_i` for every basis index of degree `≤ N`.
pub fn bch_series(kind: BasisKind, max_degree: usize) -> Result<SeriesCoefficients> {
    let ctx = Context::new(kind, max_degree);
    let run = bch(&ctx, &RunOptions::default());
    extract_coefficients(&run.series, &ctx)
}

/// `W(τ) = log(e^{τX/2} e^Y e^{τX/2})` as a tree map with polynomial values,
/// from `W_1 = τX + Y` and
/// `W_l(τ) = Σ_{j=2}^{l−1} B_j/j! ∫_0^τ (ad_W^j X)_l ds`.
pub fn symmetric_bch(ctx: &Context, opts: &RunOptions) -> Run<TauPoly> {
    let set = ctx.set();
    let n_max = ctx.max_degree();
    let bern = BernoulliCache::new(n_max.max(2));
    let ratios: Vec<Rational> = (0..=n_max).map(|k| bern.over_factorial(k)).collect();
    let mut seed = vec![TauPoly::zero(); set.len()];
    seed[set.black()] = TauPoly::one();
    let mut w = vec![TauPoly::zero(); set.len()];
    w[set.black()] = TauPoly::tau();
    w[set.white()] = TauPoly::one();
    ad_recursion(set, seed, w, opts, |_, l, ads, _| {
        let mut acc = TauPoly::zero();
        for (j, r) in ratios.iter().enumerate().take(l).skip(2) {
            if !r.is_zero() && !ads[j].is_zero() {
                acc.add_assign_ref(&ads[j].mul_rational(r));
            }
        }
        acc.integrate()
    })
}

/// Symmetric BCH tree map at `τ = 1`.
pub fn symmetric_at_one(run: &Run<TauPoly>) -> LieSeries {
    run.series.map(|p| p.at_one())
}

/// Symmetric BCH coefficients `w_i` for every basis index of degree `≤ N`.
pub fn symmetric_bch_series(kind: BasisKind, max_degree: usize) -> Result<SeriesCoefficients> {
    let ctx = Context::new(kind, max_degree);
    let run = symmetric_bch(&ctx, &RunOptions::default());
    extract_coefficients(&symmetric_at_one(&run), &ctx)
}
