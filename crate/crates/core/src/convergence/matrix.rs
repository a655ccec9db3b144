//! Small dense complex matrices.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Square dense complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<C64>,
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix({})", self.n)?;
        for r in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|c| format_complex(self[(r, c)])).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        Ok(())
    }
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix { n, data: vec![C64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for k in 0..n {
            m[(k, k)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("rows must form a square matrix".into()));
        }
        let data: Vec<C64> = rows.iter().flatten().copied().collect();
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(CMatrix { n, data })
    }

    pub fn from_real(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows.iter().map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn diag(d: &[C64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (k, &z) in d.iter().enumerate() {
            m[(k, k)] = z;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn same_dim(&self, other: &CMatrix) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!("{}x{} vs {}x{}", self.n, self.n, other.n, other.n)))
        }
    }

    pub fn scale(&self, s: C64) -> CMatrix {
        CMatrix { n: self.n, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> CMatrix {
        self.scale(C64::new(s, 0.0))
    }

    /// `self += s * other`.
    pub fn axpy(&mut self, s: C64, other: &CMatrix) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    pub fn commutator(&self, other: &CMatrix) -> CMatrix {
        &(self * other) - &(other * self)
    }

    pub fn trace(&self) -> C64 {
        (0..self.n).map(|k| self[(k, k)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> f64 {
        (0..self.n)
            .map(|c| (0..self.n).map(|r| self[(r, c)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn conj_transpose(&self) -> CMatrix {
        let mut m = Self::zeros(self.n);
        for r in 0..self.n {
            for c in 0..self.n {
                m[(c, r)] = self[(r, c)].conj();
            }
        }
        m
    }

    /// Spectral norm, from the largest eigenvalue of `AᴴA` by power iteration.
    pub fn norm2(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        let g = &self.conj_transpose() * self;
        let mut v: Vec<C64> = (0..self.n).map(|k| C64::new(1.0 + 0.1 * k as f64, 0.05 * k as f64)).collect();
        let mut lambda = 0.0;
        for _ in 0..500 {
            let w = g.apply(&v);
            let nw = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if nw == 0.0 {
                return 0.0;
            }
            v = w.iter().map(|z| z / nw).collect();
            if (nw - lambda).abs() <= 1e-15 * nw {
                lambda = nw;
                break;
            }
            lambda = nw;
        }
        lambda.sqrt()
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        (0..self.n)
            .map(|r| (0..self.n).map(|c| self[(r, c)] * v[c]).sum())
            .collect()
    }

    /// LU factorization with partial pivoting; `None` when singular.
    fn lu(&self) -> Option<(CMatrix, Vec<usize>, f64)> {
        let n = self.n;
        let mut a = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            let p = (k..n).max_by(|&i, &j| a[(i, k)].norm().total_cmp(&a[(j, k)].norm()))?;
            if a[(p, k)].norm() == 0.0 {
                return None;
            }
            if p != k {
                for c in 0..n {
                    a.data.swap(p * n + c, k * n + c);
                }
                perm.swap(p, k);
                sign = -sign;
            }
            let pivot = a[(k, k)];
            for r in k + 1..n {
                let f = a[(r, k)] / pivot;
                a[(r, k)] = f;
                for c in k + 1..n {
                    let t = a[(k, c)];
                    a[(r, c)] -= f * t;
                }
            }
        }
        Some((a, perm, sign))
    }

    pub fn det(&self) -> C64 {
        match self.lu() {
            None => C64::new(0.0, 0.0),
            Some((a, _, sign)) => (0..self.n).map(|k| a[(k, k)]).product::<C64>() * sign,
        }
    }

    /// Solves `self * X = rhs`.
    pub fn solve(&self, rhs: &CMatrix) -> Result<CMatrix> {
        self.same_dim(rhs)?;
        let n = self.n;
        let (lu, perm, _) = self.lu().ok_or_else(|| Error::DimensionMismatch("singular matrix".into()))?;
        let mut x = CMatrix::zeros(n);
        for col in 0..n {
            let mut y: Vec<C64> = (0..n).map(|r| rhs[(perm[r], col)]).collect();
            for r in 0..n {
                for c in 0..r {
                    let t = lu[(r, c)] * y[c];
                    y[r] -= t;
                }
            }
            for r in (0..n).rev() {
                for c in r + 1..n {
                    let t = lu[(r, c)] * y[c];
                    y[r] -= t;
                }
                y[r] /= lu[(r, r)];
            }
            for r in 0..n {
                x[(r, col)] = y[r];
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<CMatrix> {
        self.solve(&CMatrix::identity(self.n))
    }

    /// Matrix exponential by scaling and squaring with the degree-13 Padé approximant.
    pub fn exp(&self) -> Result<CMatrix> {
        if !self.is_finite() {
            return Err(Error::NonFinite);
        }
        const B: [f64; 14] = [
            64764752532480000.0,
            32382376266240000.0,
            7771770303897600.0,
            1187353796428800.0,
            129060195264000.0,
            10559470521600.0,
            670442572800.0,
            33522128640.0,
            1323241920.0,
            40840800.0,
            960960.0,
            16380.0,
            182.0,
            1.0,
        ];
        const THETA13: f64 = 5.371920351148152;
        let n = self.n;
        let norm = self.norm1();
        let s = if norm > THETA13 { (norm / THETA13).log2().ceil() as i32 } else { 0 };
        let a = self.scale_real(2f64.powi(-s));
        let id = CMatrix::identity(n);
        let a2 = &a * &a;
        let a4 = &a2 * &a2;
        let a6 = &a4 * &a2;
        let c = |k: usize| C64::new(B[k], 0.0);
        let mut u_inner = a6.scale(c(13));
        u_inner.axpy(c(11), &a4);
        u_inner.axpy(c(9), &a2);
        let mut u = &a6 * &u_inner;
        u.axpy(c(7), &a6);
        u.axpy(c(5), &a4);
        u.axpy(c(3), &a2);
        u.axpy(c(1), &id);
        let u = &a * &u;
        let mut v_inner = a6.scale(c(12));
        v_inner.axpy(c(10), &a4);
        v_inner.axpy(c(8), &a2);
        let mut v = &a6 * &v_inner;
        v.axpy(c(6), &a6);
        v.axpy(c(4), &a4);
        v.axpy(c(2), &a2);
        v.axpy(c(0), &id);
        let mut r = (&v - &u).solve(&(&v + &u))?;
        for _ in 0..s {
            r = &r * &r;
        }
        if r.is_finite() {
            Ok(r)
        } else {
            Err(Error::NonFinite)
        }
    }

    /// Principal square root by the product form of the Denman–Beavers iteration.
    pub fn sqrt(&self) -> Result<CMatrix> {
        let n = self.n;
        let id = CMatrix::identity(n);
        let mut m = self.clone();
        let mut y = self.clone();
        for _ in 0..100 {
            let mi = m.inverse()?;
            let half = C64::new(0.5, 0.0);
            let next_m = {
                let mut t = &m + &mi;
                t = t.scale(half);
                let mut u = t.scale(half);
                u.axpy(half, &id);
                u
            };
            let mut factor = &id + &mi;
            factor = factor.scale(half);
            y = &y * &factor;
            let delta = (&next_m - &id).max_abs();
            m = next_m;
            if delta < 1e-15 {
                break;
            }
        }
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::NonFinite)
        }
    }

    /// Principal logarithm by inverse scaling and squaring.
    pub fn log(&self) -> Result<CMatrix> {
        let n = self.n;
        let id = CMatrix::identity(n);
        let mut a = self.clone();
        let mut k = 0;
        while (&a - &id).norm1() > 0.25 {
            a = a.sqrt()?;
            k += 1;
            if k > 60 {
                return Err(Error::NonFinite);
            }
        }
        let x = &a - &id;
        let mut term = x.clone();
        let mut sum = x.clone();
        for j in 2..200 {
            term = &term * &x;
            let sign = if j % 2 == 0 { -1.0 } else { 1.0 };
            sum.axpy(C64::new(sign / j as f64, 0.0), &term);
            if term.max_abs() / (j as f64) < 1e-18 {
                break;
            }
        }
        Ok(sum.scale_real(2f64.powi(k)))
    }

    /// Parses the matrix text format: first line `n`, then `n` rows of `n`
    /// whitespace-separated complex entries such as `1`, `-2.5i`, `0.5+3i`.
    pub fn parse(text: &str) -> Result<CMatrix> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (ln, first) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty input".into() })?;
        let n: usize = first.parse().map_err(|_| Error::Parse { line: ln, msg: format!("bad dimension {first:?}") })?;
        let mut rows = Vec::with_capacity(n);
        for _ in 0..n {
            let (ln, line) = lines.next().ok_or(Error::Parse { line: ln + 1, msg: "missing row".into() })?;
            let row: Vec<C64> = line
                .split_whitespace()
                .map(|tok| parse_complex(tok).ok_or(Error::Parse { line: ln, msg: format!("bad entry {tok:?}") }))
                .collect::<Result<_>>()?;
            if row.len() != n {
                return Err(Error::Parse { line: ln, msg: format!("expected {n} entries, found {}", row.len()) });
            }
            rows.push(row);
        }
        Self::from_rows(&rows)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for r in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|c| format_complex(self[(r, c)])).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Parses `a`, `bi`, `a+bi`, `a-bi` (also `i`, `-i`, and exponents like `1e-3`).
pub fn parse_complex(tok: &str) -> Option<C64> {
    let t = tok.trim();
    if let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) {
        // split at the last sign that is not the leading one or part of an exponent
        let bytes = body.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            if (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
                split = Some(k);
                break;
            }
        }
        let imag = |s: &str| -> Option<f64> {
            match s {
                "" | "+" => Some(1.0),
                "-" => Some(-1.0),
                _ => s.parse().ok(),
            }
        };
        match split {
            Some(k) => Some(C64::new(body[..k].parse().ok()?, imag(&body[k..])?)),
            None => Some(C64::new(0.0, imag(body)?)),
        }
    } else {
        Some(C64::new(t.parse().ok()?, 0.0))
    }
}

pub fn format_complex(z: C64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.n + c]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.n + c]
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, o: &CMatrix) -> CMatrix {
        assert_eq!(self.n, o.n);
        CMatrix { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, o: &CMatrix) -> CMatrix {
        assert_eq!(self.n, o.n);
        CMatrix { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, o: &CMatrix) -> CMatrix {
        assert_eq!(self.n, o.n);
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * o.data[k * n + c];
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn exp_of_zero_and_diagonal() {
        assert_eq!(CMatrix::zeros(3).exp().unwrap(), CMatrix::identity(3));
        let d = CMatrix::diag(&[c(1.0, 0.0), c(-2.0, 0.5), c(0.0, 3.0)]);
        let e = d.exp().unwrap();
        for (k, z) in [c(1.0, 0.0), c(-2.0, 0.5), c(0.0, 3.0)].iter().enumerate() {
            assert!((e[(k, k)] - z.exp()).norm() < 1e-13 * z.exp().norm().max(1.0));
        }
        let big = CMatrix::diag(&[c(9.0, 0.0), c(-9.5, 0.0)]);
        let e = big.exp().unwrap();
        assert!((e[(0, 0)].re / 9f64.exp() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exp_of_nilpotent_and_rotation() {
        let n = CMatrix::from_real(&[&[0.0, 2.0], &[0.0, 0.0]]).unwrap();
        let e = n.exp().unwrap();
        assert!((e[(0, 1)] - c(2.0, 0.0)).norm() < 1e-14);
        let t = 1.3;
        let r = CMatrix::from_real(&[&[0.0, -t], &[t, 0.0]]).unwrap().exp().unwrap();
        assert!((r[(0, 0)].re - t.cos()).abs() < 1e-14);
        assert!((r[(1, 0)].re - t.sin()).abs() < 1e-14);
    }

    #[test]
    fn log_inverts_exp() {
        let a = CMatrix::from_rows(&[
            vec![c(0.3, 0.1), c(-0.7, 0.0), c(0.2, 0.2)],
            vec![c(0.5, 0.0), c(0.1, -0.4), c(0.0, 0.3)],
            vec![c(-0.2, 0.0), c(0.4, 0.1), c(-0.6, 0.0)],
        ])
        .unwrap();
        let l = a.exp().unwrap().log().unwrap();
        assert!((&l - &a).max_abs() < 1e-12);
    }

    #[test]
    fn norms_and_det() {
        let a = CMatrix::from_real(&[&[3.0, 0.0], &[4.0, 0.0]]).unwrap();
        assert!((a.norm2() - 5.0).abs() < 1e-12);
        assert!((a.norm1() - 7.0).abs() < 1e-15);
        let b = CMatrix::from_real(&[&[1.0, 2.0], &[3.0, 4.0]]).unwrap();
        assert!((b.det() - c(-2.0, 0.0)).norm() < 1e-14);
        let inv = b.inverse().unwrap();
        assert!((&(&b * &inv) - &CMatrix::identity(2)).max_abs() < 1e-14);
    }

    #[test]
    fn text_round_trip() {
        for (s, z) in [("1", c(1.0, 0.0)), ("-2.5i", c(0.0, -2.5)), ("0.5+3i", c(0.5, 3.0)), ("1e-3-2e-2i", c(1e-3, -2e-2)), ("i", c(0.0, 1.0))] {
            assert_eq!(parse_complex(s), Some(z), "{s}");
        }
        let m = CMatrix::from_rows(&[vec![c(1.0, 0.0), c(0.0, -1.0)], vec![c(0.25, 0.5), c(-3.0, 0.0)]]).unwrap();
        assert_eq!(CMatrix::parse(&m.to_text()).unwrap(), m);
        assert!(CMatrix::parse("2\n1 2\n3\n").is_err());
        assert!(CMatrix::parse("2\n1 2\n3 x\n").is_err());
    }
}
