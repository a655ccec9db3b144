//! The series `ρ(X,Y)` with `Z = e^{ad_ρ(X,Y)} X + e^{ad_ρ(−Y,−X)} Y`.
//!
//! The degree-`n` part of the right-hand side is linear in the
//! degree-`(n−1)` part of `ρ`, with coefficient map
//! `E_j ↦ [E_j, X] + [Ẽ_j, Y]` (`Ẽ` the image under `X ↦ −Y, Y ↦ −X`), so
//! `ρ` is found one degree at a time from exact linear systems. The
//! equations leave the `X` coefficient of `ρ` undetermined; it is fixed
//! to 0, giving `ρ = −¼Y + (5/96)[Y,X] + ...`.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::basis::{BasisKind, Word};
use crate::bch::{bch, RunOptions};
use crate::context::Context;
use crate::error::{Error, Result};
use crate::linalg::{solve, Echelon};
use crate::rational::{from_int, Rational};
use crate::series::{basis_elements, Generator, LieSeries, SeriesCoefficients};

/// Largest degree bound for which the parameter family is exactly affine:
/// products of two free parameters first enter the equations at degree 11.
pub const AFFINE_FAMILY_MAX_DEGREE: usize = 10;

/// One linear system: equations on Hall trees of degree `degree`, unknowns
/// the coefficients of degree `degree − 1`.
#[derive(Clone, Debug)]
struct DegreeSystem {
    degree: usize,
    unknowns: std::ops::Range<usize>,
    matrix: Vec<Vec<BigInt>>,
    free: Vec<usize>,
}

/// Builds and solves the degree-by-degree systems for `ρ`.
#[derive(Debug)]
pub struct ThompsonSolver {
    ctx: Context,
    z: LieSeries,
    elems: Vec<LieSeries>,
    systems: Vec<DegreeSystem>,
}

/// Particular solution and free directions of `ρ` through degree `N − 1`.
#[derive(Clone, Debug)]
pub struct ThompsonSolution {
    pub kind: BasisKind,
    /// Degree bound of the identity being solved; `ρ` itself has degree `≤ N − 1`.
    pub max_degree: usize,
    /// All free parameters set to 0.
    pub particular: SeriesCoefficients,
    pub free_indices: Vec<usize>,
    /// `solve_with(e_f) − particular` for each free index `f`. These span the
    /// exact family only while `N ≤ AFFINE_FAMILY_MAX_DEGREE`.
    pub directions: Vec<SeriesCoefficients>,
}

impl ThompsonSolution {
    pub fn is_exactly_affine(&self) -> bool {
        self.max_degree <= AFFINE_FAMILY_MAX_DEGREE
    }

    /// `particular + Σ t_f direction_f`.
    pub fn family_point(&self, params: &BTreeMap<usize, Rational>) -> Result<SeriesCoefficients> {
        let mut out = self.particular.clone();
        for (&f, t) in params {
            let k = self.free_indices.iter().position(|&g| g == f).ok_or(Error::UnknownParameter(f))?;
            for (e, d) in out.entries.iter_mut().zip(&self.directions[k].entries) {
                e.value += t * &d.value;
            }
        }
        Ok(out)
    }
}

impl ThompsonSolver {
    pub fn new(kind: BasisKind, max_degree: usize) -> Result<Self> {
        if max_degree < 2 {
            return Err(Error::DegreeOutOfRange { requested: max_degree, max: 2 });
        }
        let ctx = Context::with_swaps(kind, max_degree);
        let z = bch(&ctx, &RunOptions::default()).series;
        let elems = basis_elements(&ctx, max_degree - 1);
        let x: LieSeries = LieSeries::generator(ctx.set(), Generator::X);
        let y: LieSeries = LieSeries::generator(ctx.set(), Generator::Y);
        let table = ctx.table();
        let mut systems = Vec::new();
        for n in 2..=max_degree {
            let mut unknowns = table.degree_range(n - 1);
            if n == 2 {
                unknowns = 2..3;
            }
            let columns: Vec<LieSeries> = unknowns
                .clone()
                .map(|j| {
                    let e = &elems[j - 1];
                    let et = e.substitute_swap_negate().expect("swap-closed set");
                    let mut c = e.bracket(&x).expect("same set");
                    c.add_assign(&et.bracket(&y).expect("same set")).expect("same set");
                    c
                })
                .collect();
            let matrix: Vec<Vec<BigInt>> = table
                .degree_range(n)
                .map(|i| {
                    let l = ctx.hall_local(i);
                    columns.iter().map(|c| c.value(l).to_integer()).collect()
                })
                .collect();
            let echelon = Echelon::new(matrix.clone(), unknowns.len());
            let free = echelon.free_columns().into_iter().map(|c| unknowns.start + c).collect();
            systems.push(DegreeSystem { degree: n, unknowns, matrix, free });
        }
        Ok(ThompsonSolver { ctx, z, elems, systems })
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn max_degree(&self) -> usize {
        self.ctx.max_degree()
    }

    /// Free basis indices, ascending (leftmost-pivot elimination in index order).
    pub fn free_indices(&self) -> Vec<usize> {
        self.systems.iter().flat_map(|s| s.free.iter().copied()).collect()
    }

    /// Number of free parameters among the coefficients of degree `d`.
    pub fn free_count(&self, d: usize) -> usize {
        self.systems.iter().find(|s| s.degree == d + 1).map_or(0, |s| s.free.len())
    }

    /// `ρ` with the given values for free parameters (others 0).
    pub fn solve_with(&self, params: &BTreeMap<usize, Rational>) -> Result<SeriesCoefficients> {
        let free: Vec<usize> = self.free_indices();
        if let Some(&bad) = params.keys().find(|k| !free.contains(k)) {
            return Err(Error::UnknownParameter(bad));
        }
        let table = self.ctx.table();
        let n_max = self.max_degree();
        let mut rho = SeriesCoefficients::zeros(table, n_max - 1);
        for sys in &self.systems {
            let n = sys.degree;
            let known = self.series_of(&rho, n.saturating_sub(2));
            let f0 = self.right_hand_side(&known, n)?;
            let rhs: Vec<Rational> = table
                .degree_range(n)
                .map(|i| {
                    let l = self.ctx.hall_local(i);
                    self.z.value(l) - f0.value(l)
                })
                .collect();
            let start = sys.unknowns.start;
            let (x, _) = solve(&sys.matrix, &rhs, sys.unknowns.len(), |c| {
                params.get(&(start + c)).cloned().unwrap_or_else(|| from_int(0))
            })
            .ok_or(Error::InconsistentSystem { degree: n })?;
            for (j, v) in sys.unknowns.clone().zip(x) {
                rho.entries[j - 1].value = v;
            }
        }
        Ok(rho)
    }

    /// `Σ_{|i| ≤ d} ρ_i E_i` as a tree map.
    fn series_of(&self, rho: &SeriesCoefficients, d: usize) -> LieSeries {
        let mut out = LieSeries::zero(self.ctx.set());
        for e in rho.entries.iter().take_while(|e| e.degree <= d) {
            out.add_scaled(&e.value, &self.elems[e.index - 1]).expect("same set");
        }
        out
    }

    /// `e^{ad_ρ}X + e^{ad_ρ̃}Y` through degree `n`.
    fn right_hand_side(&self, rho: &LieSeries, n: usize) -> Result<LieSeries> {
        let set = self.ctx.set();
        let rho_t = rho.substitute_swap_negate()?;
        let mut out = LieSeries::zero(set);
        for (r, g) in [(rho, Generator::X), (&rho_t, Generator::Y)] {
            let mut term: LieSeries = LieSeries::generator(set, g);
            out.add_assign(&term)?;
            for k in 1..n {
                term = r.bracket(&term)?.scale(&Rational::new(1.into(), (k as i64).into()));
                if term.is_zero() {
                    break;
                }
                out.add_assign(&term)?;
            }
        }
        Ok(out.truncate(n))
    }

    /// `Z − e^{ad_ρ}X − e^{ad_ρ̃}Y` on every tree of the working set.
    pub fn residual(&self, rho: &SeriesCoefficients) -> Result<LieSeries> {
        let r = self.series_of(rho, rho.max_degree);
        let rhs = self.right_hand_side(&r, self.max_degree())?;
        self.z.sub(&rhs)
    }

    pub fn solve(&self) -> Result<ThompsonSolution> {
        let particular = self.solve_with(&BTreeMap::new())?;
        let free_indices = self.free_indices();
        let mut directions = Vec::with_capacity(free_indices.len());
        for &f in &free_indices {
            let p = self.solve_with(&BTreeMap::from([(f, from_int(1))]))?;
            let mut d = p;
            for (e, base) in d.entries.iter_mut().zip(&particular.entries) {
                e.value -= &base.value;
            }
            directions.push(d);
        }
        Ok(ThompsonSolution {
            kind: self.ctx.kind(),
            max_degree: self.max_degree(),
            particular,
            free_indices,
            directions,
        })
    }

    /// Whether `chosen` (indices of degree `d`) can serve as the free
    /// coordinates of the degree-`d` parameters: the null-space directions
    /// restricted to those coordinates must form a nonsingular matrix.
    pub fn is_valid_free_choice(&self, d: usize, chosen: &[usize]) -> bool {
        let Some(sys) = self.systems.iter().find(|s| s.degree == d + 1) else {
            return false;
        };
        if chosen.len() != sys.free.len() || chosen.iter().any(|c| !sys.unknowns.contains(c)) {
            return false;
        }
        let ns = Echelon::new(sys.matrix.clone(), sys.unknowns.len()).nullspace();
        // integer-scaled square matrix, rank via elimination
        let rows: Vec<Vec<BigInt>> = ns
            .iter()
            .map(|v| {
                let den = v.iter().fold(BigInt::from(1), |a, r| num_integer::Integer::lcm(&a, r.denom()));
                chosen.iter().map(|&c| (&v[c - sys.unknowns.start] * Rational::from_integer(den.clone())).to_integer()).collect()
            })
            .collect();
        Echelon::new(rows, chosen.len()).rank() == chosen.len()
    }
}

/// Solves for `ρ` in the given basis through degree `N − 1`.
pub fn solve_rho(kind: BasisKind, max_degree: usize) -> Result<ThompsonSolution> {
    ThompsonSolver::new(kind, max_degree)?.solve()
}

/// Coefficients of the words `x^k y`, `k = 0, 1, ...` in the word expansion
/// of `ρ`; these are the power-series coefficients of `f` in
/// `ρ ≡ f(ad_X) Y (mod Y²)`.
pub fn single_y_projection(rho: &SeriesCoefficients) -> Vec<Rational> {
    let words = crate::words::expand_to_words(rho, rho.max_degree);
    (0..rho.max_degree)
        .map(|k| {
            let w = Word::from_bits(1, k + 1);
            words.get(w)
        })
        .collect()
}

/// Number of free parameters per degree of `ρ`.
pub fn free_parameters_by_degree(sol: &ThompsonSolution) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for &f in &sol.free_indices {
        let d = sol.particular.entries[f - 1].degree;
        *m.entry(d).or_insert(0) += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn degree_four_particular_solution() {
        let sol = solve_rho(BasisKind::Hall, 5).unwrap();
        let p = &sol.particular;
        assert_eq!(p.get(1), Some(&from_int(0)));
        assert_eq!(p.get(2), Some(&q(-1, 4)));
        assert_eq!(p.get(3), Some(&q(5, 96)));
        assert_eq!(p.get(4), Some(&q(1, 384)));
        assert_eq!(p.get(5), Some(&q(11, 768)));
        assert_eq!(p.get(6), Some(&q(-143, 92160)));
        assert_eq!(p.get(7), Some(&q(-283, 92160)));
        assert_eq!(p.get(8), Some(&q(11, 23040)));
        assert!(sol.free_indices.is_empty());
    }

    #[test]
    fn first_free_parameter_at_degree_five() {
        let s = ThompsonSolver::new(BasisKind::Hall, 6).unwrap();
        assert_eq!(s.free_count(5), 1);
        assert_eq!((1..5).map(|d| s.free_count(d)).sum::<usize>(), 0);
        assert!(s.is_valid_free_choice(5, &[10]));
    }

    #[test]
    fn residual_vanishes() {
        let s = ThompsonSolver::new(BasisKind::Lyndon, 6).unwrap();
        let f = s.free_indices()[0];
        let rho = s.solve_with(&BTreeMap::from([(f, q(3, 7))])).unwrap();
        assert!(s.residual(&rho).unwrap().is_zero());
        assert!(matches!(s.solve_with(&BTreeMap::from([(1, q(1, 1))])), Err(Error::UnknownParameter(1))));
    }
}
