//! Exact linear systems by fraction-free (Bareiss) elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::rational::Rational;

/// Row echelon form of an integer matrix with leftmost pivots.
#[derive(Clone, Debug)]
pub struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    ncols: usize,
}

impl Echelon {
    /// Eliminates `m` (all rows of length `ncols`).
    pub fn new(m: Vec<Vec<BigInt>>, ncols: usize) -> Self {
        let (rows, pivots) = bareiss(m, ncols, ncols);
        Echelon { rows, pivots, ncols }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Non-pivot columns, ascending.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// Basis of the null space, one vector per free column (that column set to 1, other free columns 0).
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        self.free_columns()
            .into_iter()
            .map(|f| {
                let mut fixed = vec![None; self.ncols];
                for g in self.free_columns() {
                    fixed[g] = Some(Rational::from_integer(BigInt::from(i32::from(g == f))));
                }
                self.back_substitute(&self.rows, &vec![Rational::zero(); self.rows.len()], &fixed)
            })
            .collect()
    }

    fn back_substitute(&self, rows: &[Vec<BigInt>], rhs: &[Rational], fixed: &[Option<Rational>]) -> Vec<Rational> {
        let mut x: Vec<Rational> = fixed.iter().map(|f| f.clone().unwrap_or_else(Rational::zero)).collect();
        for (r, &p) in self.pivots.iter().enumerate().rev() {
            let mut acc = rhs[r].clone();
            for c in p + 1..self.ncols {
                if !rows[r][c].is_zero() && !x[c].is_zero() {
                    acc -= &x[c] * Rational::from_integer(rows[r][c].clone());
                }
            }
            x[p] = acc / Rational::from_integer(rows[r][p].clone());
        }
        x
    }
}

/// Solves `A x = b` exactly. Free columns (those without a pivot under
/// leftmost-pivot elimination) take their value from `free_value`.
/// Returns `None` when the system is inconsistent.
pub fn solve(
    a: &[Vec<BigInt>],
    b: &[Rational],
    ncols: usize,
    free_value: impl Fn(usize) -> Rational,
) -> Option<(Vec<Rational>, Vec<usize>)> {
    // scale the right-hand side to integers and eliminate the augmented matrix
    let den = b.iter().fold(BigInt::from(1), |acc, r| acc.lcm(r.denom()));
    let aug: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(row, r)| {
            let mut v = row.clone();
            v.push(r.numer() * (&den / r.denom()));
            v
        })
        .collect();
    let (rows, pivots) = bareiss(aug, ncols + 1, ncols);
    let rank = pivots.len();
    if rows.iter().skip(rank).any(|r| !r[ncols].is_zero()) {
        return None;
    }
    let e = Echelon { rows: Vec::new(), pivots, ncols };
    let free = e.free_columns();
    let mut fixed = vec![None; ncols];
    for &f in &free {
        fixed[f] = Some(free_value(f));
    }
    let dr = Rational::from_integer(den);
    let rhs: Vec<Rational> = rows.iter().take(rank).map(|r| Rational::from_integer(r[ncols].clone()) / &dr).collect();
    let x = e.back_substitute(&rows, &rhs, &fixed);
    Some((x, free))
}

/// Fraction-free elimination over the first `pivot_cols` columns.
fn bareiss(mut m: Vec<Vec<BigInt>>, width: usize, pivot_cols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let nrows = m.len();
    let mut pivots = Vec::new();
    let mut prev = BigInt::from(1);
    let mut r = 0;
    for col in 0..pivot_cols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let (top, rest) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pv = &pivot_row[col];
        for row in rest.iter_mut() {
            let f = row[col].clone();
            for j in col..width {
                let v = pv * &row[j] - &f * &pivot_row[j];
                let (q, rem) = v.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                row[j] = q;
            }
        }
        prev = m[r][col].clone();
        pivots.push(col);
        r += 1;
    }
    (m, pivots)
}
