//! Characteristic polynomials, discriminants and eigenvalues of small complex matrices.

use super::matrix::{CMatrix, C64};

fn c0() -> C64 {
    C64::new(0.0, 0.0)
}

/// Coefficients `[1, c_1, ..., c_n]` of `det(λI − A) = λ^n + c_1 λ^{n−1} + ... + c_n`
/// (Faddeev–LeVerrier).
pub fn charpoly(a: &CMatrix) -> Vec<C64> {
    let n = a.dim();
    let mut coeffs = vec![C64::new(1.0, 0.0)];
    let id = CMatrix::identity(n);
    let mut m = CMatrix::zeros(n);
    for k in 1..=n {
        // M_k = A M_{k−1} + c_{k−1} I,  c_k = −tr(A M_k)/k
        let mut next = a * &m;
        next.axpy(coeffs[k - 1], &id);
        m = next;
        let c = -(a * &m).trace() / k as f64;
        coeffs.push(c);
    }
    coeffs
}

/// Value and derivative of a polynomial given high-to-low coefficients.
fn horner(p: &[C64], z: C64) -> (C64, C64) {
    let mut v = c0();
    let mut d = c0();
    for &c in p {
        d = d * z + v;
        v = v * z + c;
    }
    (v, d)
}

/// All roots of a polynomial (high-to-low coefficients, leading nonzero) by
/// the Aberth–Ehrlich iteration.
pub fn poly_roots(p: &[C64]) -> Vec<C64> {
    let n = p.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lead = p[0];
    let monic: Vec<C64> = p.iter().map(|c| c / lead).collect();
    if n == 1 {
        return vec![-monic[1]];
    }
    let radius = 1.0 + monic[1..].iter().map(|c| c.norm()).fold(0.0, f64::max).powf(1.0 / n as f64);
    let mut z: Vec<C64> = (0..n)
        .map(|k| C64::from_polar(radius * 0.9, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (v, d) = horner(&monic, z[i]);
            if v == c0() {
                continue;
            }
            let ratio = v / d;
            let sum: C64 = (0..n).filter(|&j| j != i).map(|j| C64::new(1.0, 0.0) / (z[i] - z[j])).sum();
            let w = ratio / (C64::new(1.0, 0.0) - ratio * sum);
            if w.re.is_finite() && w.im.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Discriminant `Π_{i<j} (λ_i − λ_j)²` of a monic polynomial (high-to-low
/// coefficients), as a resultant with its derivative.
pub fn discriminant(p: &[C64]) -> C64 {
    let n = p.len() - 1;
    if n < 2 {
        return C64::new(1.0, 0.0);
    }
    let dp: Vec<C64> = p.iter().take(n).enumerate().map(|(k, &c)| c * (n - k) as f64).collect();
    let size = 2 * n - 1;
    let mut s = CMatrix::zeros(size);
    // n−1 shifted rows of p, then n shifted rows of p'
    for r in 0..n - 1 {
        for (k, &c) in p.iter().enumerate() {
            s[(r, r + k)] = c;
        }
    }
    for r in 0..n {
        for (k, &c) in dp.iter().enumerate() {
            s[(n - 1 + r, r + k)] = c;
        }
    }
    let res = s.det();
    let sign = if (n * (n - 1) / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    res * sign / p[0]
}

/// Root-size scale used to normalize a discriminant: `max(1, max_k |c_k|^{1/k})`.
pub fn root_scale(p: &[C64]) -> f64 {
    p.iter().enumerate().skip(1).map(|(k, c)| c.norm().powf(1.0 / k as f64)).fold(1.0, f64::max)
}

/// Discriminant of the characteristic polynomial of `a`. Small matrices go
/// through the resultant; larger ones through eigenvalue differences, which
/// avoids the ill-conditioned coefficients.
pub fn matrix_discriminant(a: &CMatrix) -> C64 {
    if a.dim() <= 4 {
        discriminant(&charpoly(a))
    } else {
        let ev = hessenberg_qr(a);
        let mut d = C64::new(1.0, 0.0);
        for i in 0..ev.len() {
            for j in i + 1..ev.len() {
                let t = ev[i] - ev[j];
                d *= t * t;
            }
        }
        d
    }
}

/// `min_{i<j} |λ_i − λ_j|² / max(|λ_i|, |λ_j|)²`: vanishes exactly where the
/// discriminant does, with a sharp dip at each collision.
pub fn collision_measure(a: &CMatrix) -> f64 {
    let ev = eigenvalues(a);
    let mut best = f64::INFINITY;
    for i in 0..ev.len() {
        for j in i + 1..ev.len() {
            let scale = ev[i].norm().max(ev[j].norm()).max(f64::MIN_POSITIVE);
            best = best.min((ev[i] - ev[j]).norm_sqr() / (scale * scale));
        }
    }
    best
}

/// Eigenvalues: polynomial roots for `n ≤ 4`, shifted QR on the Hessenberg form above.
pub fn eigenvalues(a: &CMatrix) -> Vec<C64> {
    if a.dim() <= 4 {
        poly_roots(&charpoly(a))
    } else {
        hessenberg_qr(a)
    }
}

fn hessenberg(a: &CMatrix) -> CMatrix {
    let n = a.dim();
    let mut h = a.clone();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<C64> = (k + 1..n).map(|r| h[(r, k)]).collect();
        let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() == 0.0 { C64::new(1.0, 0.0) } else { x[0] / x[0].norm() };
        let mut v = x.clone();
        v[0] += phase * norm;
        let vn = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in v.iter_mut() {
            *z /= vn;
        }
        // H ← (I − 2vvᴴ) H (I − 2vvᴴ) on rows/columns k+1..n
        for c in 0..n {
            let dot: C64 = (0..v.len()).map(|i| v[i].conj() * h[(k + 1 + i, c)]).sum();
            for i in 0..v.len() {
                h[(k + 1 + i, c)] -= v[i] * dot * 2.0;
            }
        }
        for r in 0..n {
            let dot: C64 = (0..v.len()).map(|i| h[(r, k + 1 + i)] * v[i]).sum();
            for i in 0..v.len() {
                h[(r, k + 1 + i)] -= dot * v[i].conj() * 2.0;
            }
        }
    }
    h
}

fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr / 4.0 - det).sqrt();
    let l1 = tr / 2.0 + disc;
    let l2 = tr / 2.0 - disc;
    if (l1 - d).norm() < (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Eigenvalues by single-shift complex QR on the Hessenberg form.
pub fn hessenberg_qr(a: &CMatrix) -> Vec<C64> {
    let n = a.dim();
    let mut h = hessenberg(a);
    let mut out = Vec::with_capacity(n);
    let mut hi = n;
    let mut iter = 0;
    while hi > 0 {
        if hi == 1 {
            out.push(h[(0, 0)]);
            break;
        }
        // find the start of the trailing unreduced block
        let mut lo = hi - 1;
        while lo > 0 {
            let s = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
            if h[(lo, lo - 1)].norm() <= f64::EPSILON * s.max(f64::MIN_POSITIVE) {
                h[(lo, lo - 1)] = c0();
                break;
            }
            lo -= 1;
        }
        if lo == hi - 1 {
            out.push(h[(hi - 1, hi - 1)]);
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        let mu = if iter % 11 == 0 {
            h[(hi - 1, hi - 1)] + h[(hi - 1, hi - 2)].norm() * C64::new(0.75, 0.3)
        } else {
            wilkinson_shift(h[(hi - 2, hi - 2)], h[(hi - 2, hi - 1)], h[(hi - 1, hi - 2)], h[(hi - 1, hi - 1)])
        };
        if iter > 1000 {
            // give up on convergence; take the diagonal
            for k in (0..hi).rev() {
                out.push(h[(k, k)]);
            }
            break;
        }
        for k in lo..hi {
            h[(k, k)] -= mu;
        }
        let mut rots: Vec<(f64, C64)> = Vec::with_capacity(hi - lo);
        for k in lo..hi - 1 {
            let (x, y) = (h[(k, k)], h[(k + 1, k)]);
            let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (c, s) = if r == 0.0 {
                (1.0, c0())
            } else if x.norm() == 0.0 {
                (0.0, C64::new(1.0, 0.0))
            } else {
                (x.norm() / r, (x / x.norm()) * y.conj() / r)
            };
            for col in k..hi {
                let (p, q) = (h[(k, col)], h[(k + 1, col)]);
                h[(k, col)] = p * c + s * q;
                h[(k + 1, col)] = -s.conj() * p + q * c;
            }
            rots.push((c, s));
        }
        for (j, &(c, s)) in rots.iter().enumerate() {
            let k = lo + j;
            for row in lo..(k + 2).min(hi) {
                let (p, q) = (h[(row, k)], h[(row, k + 1)]);
                h[(row, k)] = p * c + q * s.conj();
                h[(row, k + 1)] = -p * s + q * c;
            }
        }
        for k in lo..hi {
            h[(k, k)] += mu;
        }
    }
    out
}

/// Numerical rank by Gaussian elimination with complete pivoting; pivots
/// of modulus `≤ tol` count as zero.
pub fn numerical_rank(a: &CMatrix, tol: f64) -> usize {
    let n = a.dim();
    let mut m = a.clone();
    let mut rank = 0;
    let mut rows: Vec<usize> = (0..n).collect();
    let mut cols: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let mut best = (0.0, k, k);
        for (ri, &r) in rows.iter().enumerate().skip(k) {
            for (ci, &c) in cols.iter().enumerate().skip(k) {
                let v = m[(r, c)].norm();
                if v > best.0 {
                    best = (v, ri, ci);
                }
            }
        }
        if best.0 <= tol {
            break;
        }
        rows.swap(k, best.1);
        cols.swap(k, best.2);
        let (pr, pc) = (rows[k], cols[k]);
        let pivot = m[(pr, pc)];
        for &r in rows.iter().skip(k + 1) {
            let f = m[(r, pc)] / pivot;
            for &c in cols.iter().skip(k) {
                let t = m[(pr, c)];
                m[(r, c)] -= f * t;
            }
        }
        rank += 1;
    }
    rank
}
