//! Eigenvalue collisions of `U(ε) = e^{εX} e^{εY}` and the convergence radius
//! of the BCH series `Z(ε) = log U(ε)`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use super::eigen::{collision_measure, eigenvalues, matrix_discriminant, numerical_rank};
use super::matrix::{CMatrix, C64};
use crate::bch::BernoulliCache;
use crate::error::{Error, Result};
use crate::rational::to_f64;
use crate::series::{evaluate_in_matrices, SeriesCoefficients};

/// Polar scan grid: nodes `k·Δr·e^{ilΔθ}` with `Δr = r_f/(n+1)`, `Δθ = 2π/(m+1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanParams {
    pub r_f: f64,
    pub n: usize,
    pub m: usize,
    /// Threshold on the collision measure (squared relative eigenvalue gap) for seeding.
    pub tol: f64,
}

impl Default for ScanParams {
    fn default() -> Self {
        ScanParams { r_f: 4.0, n: 40, m: 63, tol: 1e-9 }
    }
}

impl ScanParams {
    pub fn with_radius(r_f: f64) -> Self {
        ScanParams { r_f, ..Default::default() }
    }

    fn dr(&self) -> f64 {
        self.r_f / (self.n + 1) as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CollisionClass {
    Extraneous,
    NonExtraneous,
}

/// A point where eigenvalues of `U(ε)` coincide.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CollisionPoint {
    #[serde(serialize_with = "ser_complex")]
    pub epsilon: C64,
    /// Common eigenvalue `ρ₀` of the classified cluster.
    #[serde(serialize_with = "ser_complex")]
    pub eigenvalue: C64,
    /// Number of coinciding eigenvalues.
    pub cluster: usize,
    /// Largest number of continued logarithms that coincide.
    pub p: usize,
    /// Largest Jordan block for `ρ₀`.
    pub q: usize,
    pub class: CollisionClass,
    pub path: String,
}

fn ser_complex<S: serde::Serializer>(z: &C64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&short_complex(*z))
}

/// Rounded rendering for reports: 10 decimals, parts below `1e-12·|z|` dropped.
pub fn short_complex(z: C64) -> String {
    let cut = 1e-12 * z.norm().max(1e-300);
    let fmt = |v: f64| {
        let s = format!("{v:.10}");
        let s = s.trim_end_matches('0').trim_end_matches('.').to_string();
        if s == "-0" { "0".to_string() } else { s }
    };
    let (re, im) = (if z.re.abs() < cut { 0.0 } else { z.re }, if z.im.abs() < cut { 0.0 } else { z.im });
    match (re == 0.0, im == 0.0) {
        (_, true) => fmt(re),
        (true, false) => format!("{}i", fmt(im)),
        (false, false) if im < 0.0 => format!("{}-{}i", fmt(re), fmt(-im)),
        _ => format!("{}+{}i", fmt(re), fmt(im)),
    }
}

impl CollisionPoint {
    /// Whether this collision bounds the convergence disc.
    pub fn pins_radius(&self) -> bool {
        self.class == CollisionClass::NonExtraneous && self.p < self.q
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    /// `+∞` when no pinning collision lies within the scan radius.
    pub radius: f64,
    pub collisions: Vec<CollisionPoint>,
    /// `π/(‖X‖₂ + ‖Y‖₂)`.
    pub magnus_bound: f64,
    /// `radius ≥ magnus_bound` up to slack.
    pub consistent: bool,
    pub grid: ScanParams,
    pub warnings: Vec<String>,
}

/// `U(ε) = e^{εX} e^{εY}`.
pub fn u_of_eps(x: &CMatrix, y: &CMatrix, eps: C64) -> Result<CMatrix> {
    Ok(&x.scale(eps).exp()? * &y.scale(eps).exp()?)
}

fn disc_at(x: &CMatrix, y: &CMatrix, eps: C64) -> Result<C64> {
    Ok(matrix_discriminant(&u_of_eps(x, y, eps)?))
}

fn check_pair(x: &CMatrix, y: &CMatrix) -> Result<()> {
    x.same_dim(y)?;
    if !x.is_finite() || !y.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(())
}

/// Annular sector `r0 ≤ |ε| ≤ r1`, `t0 ≤ arg ε ≤ t1`.
#[derive(Clone, Copy, Debug)]
struct Cell {
    r0: f64,
    r1: f64,
    t0: f64,
    t1: f64,
}

impl Cell {
    fn center(&self) -> C64 {
        C64::from_polar((self.r0 + self.r1) / 2.0, (self.t0 + self.t1) / 2.0)
    }

    fn size(&self) -> f64 {
        (self.r1 - self.r0).max(self.r1 * (self.t1 - self.t0))
    }

    fn quarters(&self) -> [Cell; 4] {
        let (rm, tm) = ((self.r0 + self.r1) / 2.0, (self.t0 + self.t1) / 2.0);
        [
            Cell { r0: self.r0, r1: rm, t0: self.t0, t1: tm },
            Cell { r0: rm, r1: self.r1, t0: self.t0, t1: tm },
            Cell { r0: self.r0, r1: rm, t0: tm, t1: self.t1 },
            Cell { r0: rm, r1: self.r1, t0: tm, t1: self.t1 },
        ]
    }
}

/// Change of `arg f` along `s ↦ path(s)`, `s ∈ [s0, s1]`. Pieces are bisected
/// until both halves turn by less than π/4 and agree with the whole, which
/// guards against full turns hidden between two samples. `None` when `f`
/// vanishes or is not finite.
fn phase_change(f: &dyn Fn(C64) -> Option<C64>, path: &dyn Fn(f64) -> C64, s0: f64, s1: f64, f0: C64, f1: C64, depth: u32) -> Option<f64> {
    let sm = (s0 + s1) / 2.0;
    let fm = f(path(sm))?;
    let (d, d1, d2) = ((f1 / f0).arg(), (fm / f0).arg(), (f1 / fm).arg());
    if !(d.is_finite() && d1.is_finite() && d2.is_finite()) {
        return None;
    }
    if depth == 0 || (d1.abs() < PI / 4.0 && d2.abs() < PI / 4.0 && (d1 + d2 - d).abs() < 1e-6) {
        return Some(d1 + d2);
    }
    Some(phase_change(f, path, s0, sm, f0, fm, depth - 1)? + phase_change(f, path, sm, s1, fm, f1, depth - 1)?)
}

/// `phase_change` over `[0, 1]` after an initial split into `PIECES` parts.
fn edge_phase(f: &dyn Fn(C64) -> Option<C64>, path: &dyn Fn(f64) -> C64, f0: C64, f1: C64) -> Option<f64> {
    const PIECES: usize = 4;
    const DEPTH: u32 = 14;
    let mut total = 0.0;
    let mut prev = f0;
    for k in 0..PIECES {
        let (a, b) = (k as f64 / PIECES as f64, (k + 1) as f64 / PIECES as f64);
        let next = if k + 1 == PIECES { f1 } else { f(path(b))? };
        total += phase_change(f, path, a, b, prev, next, DEPTH)?;
        prev = next;
    }
    Some(total)
}

/// Number of zeros of `f` inside the cell by the argument principle.
fn winding(f: &dyn Fn(C64) -> Option<C64>, c: &Cell) -> Option<i64> {
    let corner = |r: f64, t: f64| C64::from_polar(r, t);
    let (a, b, cc, d) = (corner(c.r0, c.t0), corner(c.r1, c.t0), corner(c.r1, c.t1), corner(c.r0, c.t1));
    let (fa, fb, fc, fd) = (f(a)?, f(b)?, f(cc)?, f(d)?);
    let out_at_t0 = |s: f64| corner(c.r0 + s * (c.r1 - c.r0), c.t0);
    let outer_arc = |s: f64| corner(c.r1, c.t0 + s * (c.t1 - c.t0));
    let in_at_t1 = |s: f64| corner(c.r1 - s * (c.r1 - c.r0), c.t1);
    let inner_arc = |s: f64| corner(c.r0, c.t1 - s * (c.t1 - c.t0));
    let total = edge_phase(f, &out_at_t0, fa, fb)?
        + edge_phase(f, &outer_arc, fb, fc)?
        + edge_phase(f, &in_at_t1, fc, fd)?
        + edge_phase(f, &inner_arc, fd, fa)?;
    Some((total / (2.0 * PI)).round() as i64)
}

struct Seed {
    at: C64,
    size: f64,
    /// Zero count of the seed's cell.
    mult: Option<i64>,
}

/// Newton seeds for the zeros inside `c`: cells are quartered until each holds
/// a single zero and is smaller than `min_size`, or until `depth` runs out.
fn isolate(f: &dyn Fn(C64) -> Option<C64>, c: Cell, count: Option<i64>, depth: u32, min_size: f64, out: &mut Vec<Seed>) {
    match count {
        Some(0) => {}
        // shrink until the zero dominates any exponential growth of the discriminant
        Some(1) if c.size() <= min_size || depth == 0 => out.push(Seed { at: c.center(), size: c.size(), mult: count }),
        None => out.push(Seed { at: c.center(), size: c.size(), mult: count }),
        _ if depth == 0 => out.push(Seed { at: c.center(), size: c.size(), mult: count }),
        _ => {
            let parts = c.quarters();
            let counts: Vec<Option<i64>> = parts.iter().map(|q| winding(f, q)).collect();
            // a multiple zero keeps its full count in a single quarter until the cells are tiny
            for (q, k) in parts.into_iter().zip(counts) {
                isolate(f, q, k, depth - 1, min_size, out);
            }
        }
    }
}

/// Roots of the discriminant of `det(λI − U(ε))` inside the scan disc, sorted by
/// modulus, with `ε = 0` first. Grid cells are searched by the argument
/// principle and also seeded at nodes whose collision measure is below `tol`.
/// The second component lists seeds whose refinement failed.
pub fn collision_scan(x: &CMatrix, y: &CMatrix, grid: &ScanParams) -> Result<(Vec<C64>, Vec<String>)> {
    check_pair(x, y)?;
    if grid.r_f <= 0.0 || grid.n == 0 || grid.m == 0 {
        return Err(Error::DimensionMismatch("scan grid needs r_f > 0 and n, m ≥ 1".into()));
    }
    let (rings, rays) = (grid.n + 1, grid.m + 1);
    let dr = grid.dr();
    let dtheta = 2.0 * PI / rays as f64;
    let f = |e: C64| disc_at(x, y, e).ok().filter(|v| v.re.is_finite() && v.im.is_finite() && v.norm() > 0.0);

    let mut seeds: Vec<Seed> = (0..rings * rays)
        .into_par_iter()
        .filter_map(|i| {
            let e = C64::from_polar((i / rays + 1) as f64 * dr, (i % rays) as f64 * dtheta);
            let u = u_of_eps(x, y, e).ok()?;
            (collision_measure(&u) < grid.tol).then_some(Seed { at: e, size: dr, mult: None })
        })
        .collect();
    // cells between consecutive rings; the disc inside the first ring holds the origin.
    // Sectors are turned off the grid rays, since real pairs put zeros on the axes.
    let turn = dtheta / PI;
    let cells: Vec<Cell> = (0..rings - 1)
        .flat_map(|k| (0..rays).map(move |l| (k, l)))
        .map(|(k, l)| Cell {
            r0: (k + 1) as f64 * dr,
            r1: (k + 2) as f64 * dr,
            t0: l as f64 * dtheta + turn,
            t1: (l + 1) as f64 * dtheta + turn,
        })
        .collect();
    let found: Vec<Vec<Seed>> = cells
        .par_iter()
        .map(|c| {
            let mut out = Vec::new();
            isolate(&f, *c, winding(&f, c), 10, dr / 32.0, &mut out);
            out
        })
        .collect();
    seeds.extend(found.into_iter().flatten());

    let refined: Vec<Refined> = seeds.par_iter().map(|s| newton_multiple(x, y, s.at, s.size, s.mult, dr / 2.0, grid.r_f)).collect();
    let mut roots = vec![C64::new(0.0, 0.0)];
    let mut warnings = Vec::new();
    for (r, s) in refined.into_iter().zip(&seeds) {
        match r {
            Refined::Root(z) => {
                if z.norm() > grid.r_f * (1.0 + 1e-9) || z.norm() < dr / 2.0 {
                    continue;
                }
                if !roots.iter().any(|w| (w - z).norm() < 1e-6 * (1.0 + z.norm())) {
                    roots.push(z);
                }
            }
            Refined::Origin | Refined::Escaped => {}
            Refined::Stalled => warnings.push(format!("no convergence from seed {}", short_complex(s.at))),
        }
    }
    roots.sort_by(|a, b| a.norm().total_cmp(&b.norm()).then(a.arg().total_cmp(&b.arg())));
    Ok((roots, warnings))
}

/// Value and first two derivatives from samples on a circle of radius `h`.
fn derivatives(x: &CMatrix, y: &CMatrix, z: C64, h: f64) -> Option<(C64, C64, C64)> {
    const M: usize = 16;
    let f0 = disc_at(x, y, z).ok()?;
    let mut d1 = C64::new(0.0, 0.0);
    let mut d2 = C64::new(0.0, 0.0);
    for j in 0..M {
        let w = C64::from_polar(1.0, 2.0 * PI * j as f64 / M as f64);
        let f = disc_at(x, y, z + w * h).ok()?;
        d1 += f / w;
        d2 += f / (w * w);
    }
    Some((f0, d1 / (M as f64 * h), d2 * 2.0 / (M as f64 * h * h)))
}

enum Refined {
    Root(C64),
    /// Fell into the high-order zero at the origin.
    Origin,
    /// Left the scan disc.
    Escaped,
    Stalled,
}

/// Newton refinement. With a known multiplicity `m` the step is `m f/f'`;
/// otherwise Newton runs on `f/f'`, which has only simple zeros. Steps are
/// capped at `size`, the extent of the seed's region, and halved until `|f|`
/// decreases.
fn newton_multiple(x: &CMatrix, y: &CMatrix, seed: C64, size: f64, mult: Option<i64>, origin: f64, r_f: f64) -> Refined {
    let mut z = seed;
    let mut h = size / 4.0;
    let mut last = f64::INFINITY;
    for _ in 0..100 {
        if z.norm() < origin {
            return Refined::Origin;
        }
        if z.norm() > 1.1 * r_f {
            return Refined::Escaped;
        }
        let Some((f, d1, d2)) = derivatives(x, y, z, h) else {
            return Refined::Stalled;
        };
        if f.norm() == 0.0 {
            return Refined::Root(z);
        }
        let mut step = match mult {
            Some(m) => f / d1 * m as f64,
            None => f * d1 / (d1 * d1 - f * d2),
        };
        if !step.re.is_finite() || !step.im.is_finite() {
            return Refined::Stalled;
        }
        if step.norm() > size {
            step *= size / step.norm();
        }
        let mut tries = 0;
        while tries < 30 {
            match disc_at(x, y, z - step) {
                Ok(v) if v.norm() < f.norm() => break,
                _ => {
                    step /= 2.0;
                    tries += 1;
                }
            }
        }
        if tries == 30 {
            // no decrease possible: round-off floor reached
            return if step.norm() * 2f64.powi(30) < 1e-6 * (1.0 + z.norm()) { Refined::Root(z) } else { Refined::Stalled };
        }
        z -= step;
        last = step.norm();
        if last < 1e-13 * (1.0 + z.norm()) {
            return Refined::Root(z);
        }
        h = h.min(last.max(1e-3 * size));
    }
    // round-off limits the attainable accuracy at multiple roots
    if last < 1e-8 * (1.0 + z.norm()) {
        Refined::Root(z)
    } else {
        Refined::Stalled
    }
}

/// Eigenvalues of `U(ε)`. When they span many orders of magnitude the small
/// ones are taken as reciprocals of eigenvalues of `U(ε)^{-1} = e^{−εY}e^{−εX}`.
fn spectrum(x: &CMatrix, y: &CMatrix, eps: C64) -> Result<Vec<C64>> {
    let mut ev = eigenvalues(&u_of_eps(x, y, eps)?);
    let (lo, hi) = ev.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), z| (lo.min(z.norm()), hi.max(z.norm())));
    if hi > 1e4 * lo {
        let inv = eigenvalues(&(&y.scale(-eps).exp()? * &x.scale(-eps).exp()?));
        let recips: Vec<C64> = inv.iter().map(|m| C64::new(1.0, 0.0) / m).collect();
        for l in ev.iter_mut().filter(|l| l.norm() < 1.0) {
            if let Some(r) = recips.iter().min_by(|a, b| (*a - *l).norm().total_cmp(&(*b - *l).norm())) {
                *l = *r;
            }
        }
    }
    Ok(ev)
}

/// Eigenvalues at the end of the path with their continued logarithms.
fn continue_logs(x: &CMatrix, y: &CMatrix, path: &[C64]) -> Result<(Vec<C64>, Vec<C64>)> {
    let mut lam: Vec<C64> = Vec::new();
    let mut logs: Vec<C64> = Vec::new();
    let total: f64 = path.windows(2).map(|w| (w[1] - w[0]).norm()).sum();
    for (seg, w) in path.windows(2).enumerate() {
        let (a, b) = (w[0], w[1]);
        let mut t = 0.0;
        if seg == 0 {
            // start just off ε = 0, where principal logs are continuous
            t = 1e-6 * total / (b - a).norm().max(f64::MIN_POSITIVE);
            lam = spectrum(x, y, a + (b - a) * t)?;
            logs = lam.iter().map(|l| l.ln()).collect();
        }
        let mut dt = 1e-3 * total / (b - a).norm().max(f64::MIN_POSITIVE);
        while t < 1.0 {
            let step = dt.min(1.0 - t);
            let eps = a + (b - a) * (t + step);
            let next = spectrum(x, y, eps)?;
            let matched = match_nearest(&lam, &next);
            let incs: Vec<C64> = lam.iter().zip(&matched).map(|(o, n)| (n / o).ln()).collect();
            if incs.iter().any(|d| d.norm() > 0.1) {
                if step < 1e-9 {
                    return Err(Error::ContinuationStalled(eps));
                }
                dt = step / 2.0;
                continue;
            }
            for (l, d) in logs.iter_mut().zip(&incs) {
                *l += d;
            }
            lam = matched;
            t += step;
            if t < 1.0 - 1e-9 {
                check_no_crossing(&lam, &logs, eps)?;
            }
            dt = (dt * 2.0).min(1e-3 * total / (b - a).norm().max(f64::MIN_POSITIVE));
        }
    }
    Ok((lam, logs))
}

fn check_no_crossing(lam: &[C64], logs: &[C64], eps: C64) -> Result<()> {
    for i in 0..lam.len() {
        for j in i + 1..lam.len() {
            let scale = lam[i].norm().max(lam[j].norm()).max(1e-300);
            if (lam[i] - lam[j]).norm() < 1e-8 * scale && (logs[i] - logs[j]).norm() > 1e-3 {
                return Err(Error::PathCollision(eps));
            }
        }
    }
    Ok(())
}

/// Reorders `next` so that entry `i` is the one closest to `old[i]` (greedy on all pairs).
fn match_nearest(old: &[C64], next: &[C64]) -> Vec<C64> {
    let n = old.len();
    let mut pairs: Vec<(f64, usize, usize)> =
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| ((old[i] - next[j]).norm(), i, j)).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out = vec![None; n];
    let mut used = vec![false; n];
    for (_, i, j) in pairs {
        if out[i].is_none() && !used[j] {
            out[i] = Some(next[j]);
            used[j] = true;
        }
    }
    out.into_iter().map(|z| z.expect("complete matching")).collect()
}

fn describe(path: &[C64]) -> String {
    if path.len() == 2 {
        format!("segment 0 -> {}", short_complex(path[1]))
    } else {
        let pts: Vec<String> = path.iter().map(|z| short_complex(*z)).collect();
        format!("polyline {}", pts.join(" -> "))
    }
}

/// Classifies the collision at `ε₀` by continuing the eigenvalue logarithms
/// from `ε = 0` along `path` (intermediate vertices; the straight segment when empty).
pub fn classify(x: &CMatrix, y: &CMatrix, eps0: C64, path: &[C64]) -> Result<CollisionPoint> {
    check_pair(x, y)?;
    let n = x.dim();
    let mut full = vec![C64::new(0.0, 0.0)];
    full.extend_from_slice(path);
    full.push(eps0);
    if eps0.norm() < 1e-12 {
        return Ok(CollisionPoint {
            epsilon: eps0,
            eigenvalue: C64::new(1.0, 0.0),
            cluster: n,
            p: n,
            q: 1,
            class: CollisionClass::Extraneous,
            path: "trivial".into(),
        });
    }
    let (lam, logs) = continue_logs(x, y, &full)?;
    let u = u_of_eps(x, y, eps0)?;
    let scale = u.max_abs().max(1.0);

    // clusters of coinciding eigenvalues
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut seen = vec![false; n];
    for i in 0..n {
        if seen[i] {
            continue;
        }
        let c: Vec<usize> = (i..n).filter(|&j| !seen[j] && (lam[j] - lam[i]).norm() < 1e-4 * scale).collect();
        for &j in &c {
            seen[j] = true;
        }
        clusters.push(c);
    }

    let mut best: Option<CollisionPoint> = None;
    for c in clusters.iter().filter(|c| c.len() > 1) {
        let rho0 = c.iter().map(|&i| lam[i]).sum::<C64>() / c.len() as f64;
        let base = rho0.ln().im;
        // sheets of the continued logs relative to the principal branch
        let mut sheets: Vec<(i64, usize)> = Vec::new();
        for &i in c {
            let k = ((logs[i].im - base) / (2.0 * PI)).round() as i64;
            match sheets.iter_mut().find(|s| s.0 == k) {
                Some(s) => s.1 += 1,
                None => sheets.push((k, 1)),
            }
        }
        let p = sheets.iter().map(|s| s.1).max().unwrap_or(1);
        let q = jordan_size(&u, rho0, c.len(), scale);
        let point = CollisionPoint {
            epsilon: eps0,
            eigenvalue: rho0,
            cluster: c.len(),
            p,
            q,
            class: if sheets.len() > 1 { CollisionClass::NonExtraneous } else { CollisionClass::Extraneous },
            path: describe(&full),
        };
        let better = match &best {
            None => true,
            Some(b) => (point.pins_radius(), point.class == CollisionClass::NonExtraneous) > (b.pins_radius(), b.class == CollisionClass::NonExtraneous),
        };
        if better {
            best = Some(point);
        }
    }
    Ok(best.unwrap_or(CollisionPoint {
        epsilon: eps0,
        eigenvalue: lam.first().copied().unwrap_or_default(),
        cluster: 1,
        p: 1,
        q: 1,
        class: CollisionClass::Extraneous,
        path: describe(&full),
    }))
}

/// Largest Jordan block for `ρ₀`: the first `k` with `rank M^k = rank M^{k+1}`, `M = U − ρ₀I`.
fn jordan_size(u: &CMatrix, rho0: C64, cluster: usize, scale: f64) -> usize {
    let n = u.dim();
    let mut m = u.clone();
    m.axpy(-rho0, &CMatrix::identity(n));
    let mut power = m.clone();
    let mut rank = numerical_rank(&power, 1e-6 * scale);
    for k in 1..=cluster {
        power = &power * &m;
        let tol = 1e-6 * scale.powi(k as i32 + 1) * (n as f64).powi(k as i32);
        let next = numerical_rank(&power, tol);
        if next == rank {
            return k;
        }
        rank = next;
    }
    cluster
}

/// Scans, classifies every collision and reports the radius of convergence.
pub fn radius(x: &CMatrix, y: &CMatrix, grid: &ScanParams) -> Result<ConvergenceReport> {
    let (roots, mut warnings) = collision_scan(x, y, grid)?;
    let classified: Vec<Result<CollisionPoint>> = roots.par_iter().map(|&e| classify_with_detours(x, y, e)).collect();
    let mut collisions = Vec::new();
    for (c, e) in classified.into_iter().zip(&roots) {
        match c {
            Ok(c) => collisions.push(c),
            Err(err) => warnings.push(format!("collision at {} left unclassified: {err}", short_complex(*e))),
        }
    }
    let r = collisions.iter().find(|c| c.pins_radius()).map_or(f64::INFINITY, |c| c.epsilon.norm());
    let magnus_bound = magnus_bound(x, y);
    Ok(ConvergenceReport {
        radius: r,
        collisions,
        magnus_bound,
        consistent: r >= magnus_bound - 1e-6,
        grid: *grid,
        warnings,
    })
}

/// Straight segment first, then paths bent to either side when continuation fails.
fn classify_with_detours(x: &CMatrix, y: &CMatrix, eps0: C64) -> Result<CollisionPoint> {
    match classify(x, y, eps0, &[]) {
        Err(Error::PathCollision(_) | Error::ContinuationStalled(_)) => {}
        other => return other,
    }
    let mut last = Error::PathCollision(eps0);
    for bend in [0.3, -0.3, 0.6, -0.6] {
        let mid = eps0 * C64::from_polar(0.5 / f64::cos(bend), bend);
        match classify(x, y, eps0, &[mid]) {
            Err(e @ (Error::PathCollision(_) | Error::ContinuationStalled(_))) => last = e,
            other => return other,
        }
    }
    Err(last)
}

/// `π/(‖X‖₂ + ‖Y‖₂)`.
pub fn magnus_bound(x: &CMatrix, y: &CMatrix) -> f64 {
    PI / (x.norm2() + y.norm2())
}

/// `X = diag(α, −α)`, `Y = [[0, β], [0, 0]]`.
pub fn example_diagonal_nilpotent(alpha: f64, beta: f64) -> (CMatrix, CMatrix) {
    let x = CMatrix::from_real(&[&[alpha, 0.0], &[0.0, -alpha]]).expect("2x2");
    let y = CMatrix::from_real(&[&[0.0, beta], &[0.0, 0.0]]).expect("2x2");
    (x, y)
}

/// `X = α[[0, 0], [1, 0]]`, `Y = α[[0, 1], [0, 0]]`.
pub fn example_nilpotent_pair(alpha: f64) -> (CMatrix, CMatrix) {
    let x = CMatrix::from_real(&[&[0.0, 0.0], &[alpha, 0.0]]).expect("2x2");
    let y = CMatrix::from_real(&[&[0.0, alpha], &[0.0, 0.0]]).expect("2x2");
    (x, y)
}

/// Max entry of `U(ε) e^{−Z^{[N]}(ε)} − I` with `Z^{[N]}` taken from exact coefficients.
pub fn partial_sum_residual(x: &CMatrix, y: &CMatrix, eps: C64, n: usize, bch: &SeriesCoefficients) -> Result<f64> {
    check_pair(x, y)?;
    if bch.max_degree < n {
        return Err(Error::DegreeOutOfRange { requested: n, max: bch.max_degree });
    }
    let z = evaluate_in_matrices(&bch.truncated(n), &x.scale(eps), &y.scale(eps))?;
    residual_of(x, y, eps, &z)
}

/// Max entry of `U(ε) e^{−Z} − I`.
pub fn residual_of(x: &CMatrix, y: &CMatrix, eps: C64, z: &CMatrix) -> Result<f64> {
    let mut e = &u_of_eps(x, y, eps)? * &z.scale_real(-1.0).exp()?;
    e.axpy(C64::new(-1.0, 0.0), &CMatrix::identity(x.dim()));
    Ok(e.max_abs())
}

/// Homogeneous parts `Z_1, ..., Z_N` of `log(e^A e^B)` evaluated numerically in
/// matrices through the Bernoulli-number recursion
/// `m Z_m = ½[A − B, Z_{m−1}] + Σ_p B_{2p}/(2p)! (ad_Z^{2p}(A + B))_m`.
pub fn bch_terms_numeric(a: &CMatrix, b: &CMatrix, n: usize) -> Result<Vec<CMatrix>> {
    check_pair(a, b)?;
    let dim = a.dim();
    let bern = BernoulliCache::new(n);
    let ratio: Vec<f64> = (0..=n).map(|k| to_f64(&bern.over_factorial(k))).collect();
    let diff = a - b;
    // ads[k][m] = degree-m part of ad_Z^k (A + B), nonzero for m ≥ k + 1
    let mut ads: Vec<Vec<CMatrix>> = vec![vec![CMatrix::zeros(dim); n + 1]; n];
    ads[0][1] = a + b;
    let mut z = vec![CMatrix::zeros(dim); n + 1];
    z[1] = ads[0][1].clone();
    for m in 2..=n {
        // ad powers of degree m only need Z_1..Z_{m−1}
        for k in 1..m {
            let mut acc = CMatrix::zeros(dim);
            for j in 1..=m - k {
                if m - j >= k {
                    acc.axpy(C64::new(1.0, 0.0), &z[j].commutator(&ads[k - 1][m - j]));
                }
            }
            ads[k][m] = acc;
        }
        let mut zm = diff.commutator(&z[m - 1]).scale_real(0.5);
        for p in 1..=(m - 1) / 2 {
            zm.axpy(C64::new(ratio[2 * p], 0.0), &ads[2 * p][m]);
        }
        z[m] = zm.scale_real(1.0 / m as f64);
        if !z[m].is_finite() {
            return Err(Error::NonFinite);
        }
    }
    z.remove(0);
    Ok(z)
}

/// Residual of the degree-`N` partial sum from [`bch_terms_numeric`].
pub fn partial_sum_residual_numeric(x: &CMatrix, y: &CMatrix, eps: C64, n: usize) -> Result<f64> {
    let terms = bch_terms_numeric(&x.scale(eps), &y.scale(eps), n)?;
    let mut z = CMatrix::zeros(x.dim());
    for t in &terms {
        z.axpy(C64::new(1.0, 0.0), t);
    }
    residual_of(x, y, eps, &z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numeric_recursion_matches_low_order_terms() {
        let (x, y) = example_nilpotent_pair(1.0);
        let z = bch_terms_numeric(&x, &y, 3).unwrap();
        let xy = x.commutator(&y);
        let z3 = (&x.commutator(&xy) - &y.commutator(&xy)).scale_real(1.0 / 12.0);
        assert!((&z[1] - &xy.scale_real(0.5)).max_abs() < 1e-15);
        assert!((&z[2] - &z3).max_abs() < 1e-15);
    }

    #[test]
    fn winding_counts_and_isolates_close_zeros() {
        let a = C64::new(1.03, 0.21);
        let b = C64::new(1.1, 0.25);
        let f = |z: C64| Some((z - a) * (z - b) * (z * 5.0).exp());
        let c = Cell { r0: 0.9, r1: 1.3, t0: 0.0, t1: 0.4 };
        assert_eq!(winding(&f, &c), Some(2));
        let mut out = Vec::new();
        isolate(&f, c, Some(2), 10, 0.01, &mut out);
        assert_eq!(out.len(), 2);
        assert!(out.iter().any(|s| (s.at - a).norm() < 0.01) && out.iter().any(|s| (s.at - b).norm() < 0.01));
        let empty = Cell { r0: 2.0, r1: 2.5, t0: 1.0, t1: 1.5 };
        assert_eq!(winding(&f, &empty), Some(0));
    }

    #[test]
    fn jordan_block_detection() {
        let u = CMatrix::from_real(&[&[-1.0, 1.0], &[0.0, -1.0]]).unwrap();
        assert_eq!(jordan_size(&u, C64::new(-1.0, 0.0), 2, 1.0), 2);
        let d = CMatrix::from_real(&[&[-1.0, 0.0], &[0.0, -1.0]]).unwrap();
        assert_eq!(jordan_size(&d, C64::new(-1.0, 0.0), 2, 1.0), 1);
    }
}
