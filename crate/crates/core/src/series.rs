//! Truncated Lie series as maps from trees to coefficients.
//!
//! A [`LieSeries`] holds one value per tree of a frozen [`TreeSet`]. The
//! bracket is
//!
//! ```text
//! [α,β](u) = Σ_{(r,c) ∈ S(u)} α(r)β(c) − α(c)β(r)
//! ```
//!
//! and a Lie series is recovered in a Hall–Viennot basis as
//! `Σ α(u_i)/σ(u_i) E_i`.

use std::sync::Arc;

use rayon::prelude::*;

use crate::basis::{BasisKind, BasisTable, Word};
use crate::context::Context;
use crate::convergence::matrix::{CMatrix, C64};
use crate::error::{Error, Result};
use crate::rational::{from_int, to_f64, Coefficient, Rational};
use crate::trees::{TreeId, TreeSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    X,
    Y,
}

/// Values of a Lie series on every tree of a tree set; degrees above the
/// set's bound are dropped silently by every operation.
#[derive(Clone, Debug)]
pub struct LieSeries<T = Rational> {
    set: Arc<TreeSet>,
    values: Vec<T>,
}

impl<T: Coefficient> PartialEq for LieSeries<T> {
    fn eq(&self, other: &Self) -> bool {
        self.set.tag() == other.set.tag() && self.values == other.values
    }
}

impl<T: Coefficient> LieSeries<T> {
    pub fn zero(set: &Arc<TreeSet>) -> Self {
        LieSeries { set: Arc::clone(set), values: vec![T::zero(); set.len()] }
    }

    /// `X` is 1 on the single black vertex, `Y` on the single white vertex.
    pub fn generator(set: &Arc<TreeSet>, which: Generator) -> Self {
        let mut s = Self::zero(set);
        let k = match which {
            Generator::X => set.black(),
            Generator::Y => set.white(),
        };
        s.values[k] = T::one();
        s
    }

    pub fn from_fn(set: &Arc<TreeSet>, f: impl Fn(usize) -> T) -> Self {
        LieSeries { set: Arc::clone(set), values: (0..set.len()).map(f).collect() }
    }

    pub fn from_values(set: &Arc<TreeSet>, values: Vec<T>) -> Result<Self> {
        if values.len() != set.len() {
            return Err(Error::RegistryMismatch);
        }
        Ok(LieSeries { set: Arc::clone(set), values })
    }

    pub fn set(&self) -> &Arc<TreeSet> {
        &self.set
    }

    pub fn max_degree(&self) -> usize {
        self.set.max_degree()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    /// Value at a local index of the tree set.
    pub fn value(&self, local: usize) -> &T {
        &self.values[local]
    }

    pub fn value_mut(&mut self, local: usize) -> &mut T {
        &mut self.values[local]
    }

    /// Value on a registered tree, or `None` when the tree is not in the set.
    pub fn at(&self, tree: TreeId) -> Option<&T> {
        self.set.local_index(tree).map(|l| &self.values[l])
    }

    fn same_set(&self, other: &Self) -> Result<()> {
        if self.set.tag() == other.set.tag() {
            Ok(())
        } else {
            Err(Error::RegistryMismatch)
        }
    }

    /// `[self, other]` evaluated on the tree with the given local index.
    pub fn bracket_at(&self, other: &Self, local: usize) -> T {
        bracket_value(&self.set, &self.values, &other.values, local)
    }

    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.same_set(other)?;
        let values = (0..self.set.len())
            .into_par_iter()
            .map(|l| bracket_value(&self.set, &self.values, &other.values, l))
            .collect();
        Ok(LieSeries { set: Arc::clone(&self.set), values })
    }

    /// Degree-`n` component.
    pub fn project_degree(&self, n: usize) -> Self {
        let block = self.set.degree_block(n);
        Self::from_fn(&self.set, |l| if block.contains(&l) { self.values[l].clone() } else { T::zero() })
    }

    /// Drops every degree above `n`.
    pub fn truncate(&self, n: usize) -> Self {
        Self::from_fn(&self.set, |l| if self.set.degree(l) <= n { self.values[l].clone() } else { T::zero() })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_set(other)?;
        let mut out = self.clone();
        out.add_assign(other)?;
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_set(other)?;
        let mut out = self.clone();
        for (a, b) in out.values.iter_mut().zip(&other.values) {
            a.sub_assign_ref(b);
        }
        Ok(out)
    }

    pub fn add_assign(&mut self, other: &Self) -> Result<()> {
        self.same_set(other)?;
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            a.add_assign_ref(b);
        }
        Ok(())
    }

    /// `self += r * other`.
    pub fn add_scaled(&mut self, r: &Rational, other: &Self) -> Result<()> {
        self.same_set(other)?;
        if r == &from_int(0) {
            return Ok(());
        }
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            if !b.is_zero() {
                a.add_assign_ref(&b.mul_rational(r));
            }
        }
        Ok(())
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::from_fn(&self.set, |l| self.values[l].mul_rational(r))
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(&self.set, |l| self.values[l].neg())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    /// Degrees carrying a nonzero value.
    pub fn support_degrees(&self) -> Vec<usize> {
        (1..=self.set.max_degree())
            .filter(|&n| self.set.degree_block(n).any(|l| !self.values[l].is_zero()))
            .collect()
    }

    pub fn map<U: Coefficient>(&self, f: impl Fn(&T) -> U) -> LieSeries<U> {
        LieSeries { set: Arc::clone(&self.set), values: self.values.iter().map(f).collect() }
    }

    /// The image under the automorphism `X ↦ −Y`, `Y ↦ −X`:
    /// `result(u) = (−1)^{|u|} α(swap(u))`.
    pub fn substitute_swap_negate(&self) -> Result<Self> {
        if !self.set.has_swaps() {
            return Err(Error::SwapUnavailable);
        }
        let set = &self.set;
        Ok(Self::from_fn(set, |l| {
            let v = &self.values[set.swap_index(l).expect("swap map")];
            if set.degree(l).is_multiple_of(2) {
                v.clone()
            } else {
                v.neg()
            }
        }))
    }
}

pub(crate) fn bracket_value<T: Coefficient>(set: &TreeSet, a: &[T], b: &[T], local: usize) -> T {
    let mut acc = T::zero();
    for s in set.splits(local) {
        let (r, c) = (s.root as usize, s.cut as usize);
        acc.add_cross(s.mult, &a[r], &b[c], &a[c], &b[r]);
    }
    acc
}

/// One coefficient of a series in a Hall–Viennot basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientEntry {
    pub index: usize,
    pub degree: usize,
    pub left: usize,
    pub right: usize,
    pub word: Word,
    pub value: Rational,
}

/// Exact coefficients `c_i` of `Σ c_i E_i`, one per basis index of degree `≤ N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesCoefficients {
    pub kind: BasisKind,
    pub max_degree: usize,
    pub entries: Vec<CoefficientEntry>,
}

impl SeriesCoefficients {
    /// Coefficients `values[i-1]` on the indices of `table` of degree `≤ max_degree`.
    pub fn from_values(table: &BasisTable, max_degree: usize, values: Vec<Rational>) -> Self {
        let entries = table
            .entries()
            .take_while(|(_, e)| e.degree <= max_degree)
            .zip(values)
            .map(|((i, e), value)| CoefficientEntry {
                index: i,
                degree: e.degree,
                left: e.left,
                right: e.right,
                word: e.word,
                value,
            })
            .collect();
        SeriesCoefficients { kind: table.kind(), max_degree, entries }
    }

    pub fn zeros(table: &BasisTable, max_degree: usize) -> Self {
        let m = table.entries().take_while(|(_, e)| e.degree <= max_degree).count();
        Self::from_values(table, max_degree, vec![from_int(0); m])
    }

    pub fn unit(table: &BasisTable, max_degree: usize, i: usize) -> Result<Self> {
        table.entry(i)?;
        let mut c = Self::zeros(table, max_degree);
        if i > c.entries.len() {
            return Err(Error::DegreeOutOfRange { requested: table.get(i).degree, max: max_degree });
        }
        c.entries[i - 1].value = from_int(1);
        Ok(c)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Coefficient of `E_i`.
    pub fn get(&self, i: usize) -> Option<&Rational> {
        i.checked_sub(1).and_then(|k| self.entries.get(k)).map(|e| &e.value)
    }

    pub fn by_word(&self, w: Word) -> Option<&Rational> {
        self.entries.iter().find(|e| e.word == w).map(|e| &e.value)
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.iter().filter(|e| !Coefficient::is_zero(&e.value)).count()
    }

    pub fn zero_count(&self) -> usize {
        self.len() - self.nonzero_count()
    }

    /// Zero coefficients of each degree, indexed by degree (entry 0 unused).
    pub fn zeros_by_degree(&self) -> Vec<usize> {
        let mut out = vec![0; self.max_degree + 1];
        for e in &self.entries {
            if Coefficient::is_zero(&e.value) {
                out[e.degree] += 1;
            }
        }
        out
    }

    /// The first `n` degrees only.
    pub fn truncated(&self, n: usize) -> Self {
        SeriesCoefficients {
            kind: self.kind,
            max_degree: n.min(self.max_degree),
            entries: self.entries.iter().filter(|e| e.degree <= n).cloned().collect(),
        }
    }

    /// The same coefficients as a tree map, `Σ c_i E_i`.
    pub fn to_series(&self, ctx: &Context) -> Result<LieSeries> {
        let x = LieSeries::generator(ctx.set(), Generator::X);
        let y = LieSeries::generator(ctx.set(), Generator::Y);
        compose(self, &x, &y)
    }
}

/// Reads off `α(u_i)/σ(u_i)` for every basis index.
pub fn extract_coefficients(alpha: &LieSeries, ctx: &Context) -> Result<SeriesCoefficients> {
    if alpha.set().tag() != ctx.set().tag() {
        return Err(Error::RegistryMismatch);
    }
    let n = ctx.max_degree();
    let values = (1..=ctx.table().len())
        .map(|i| alpha.value(ctx.hall_local(i)) / from_int(ctx.hall().sigma(i) as i64))
        .collect();
    Ok(SeriesCoefficients::from_values(ctx.table(), n, values))
}

/// `E_i` as a tree map, by the recursion `E_i = [E_{i'}, E_{i''}]`.
pub fn basis_element_series(ctx: &Context, i: usize) -> Result<LieSeries> {
    let e = ctx.table().entry(i)?;
    if e.is_generator() {
        let which = if i == 1 { Generator::X } else { Generator::Y };
        return Ok(LieSeries::generator(ctx.set(), which));
    }
    let a = basis_element_series(ctx, e.left)?;
    let b = basis_element_series(ctx, e.right)?;
    a.bracket(&b)
}

/// `E_i` for every index of degree `≤ n`, in index order.
pub fn basis_elements(ctx: &Context, n: usize) -> Vec<LieSeries> {
    let x = LieSeries::generator(ctx.set(), Generator::X);
    let y = LieSeries::generator(ctx.set(), Generator::Y);
    elements_in(ctx.table(), n, x, y)
}

fn elements_in<T: Coefficient>(table: &BasisTable, n: usize, x: LieSeries<T>, y: LieSeries<T>) -> Vec<LieSeries<T>> {
    let mut out: Vec<LieSeries<T>> = Vec::new();
    for (i, e) in table.entries().take_while(|(_, e)| e.degree <= n) {
        let s = match i {
            1 => x.clone(),
            2 => y.clone(),
            _ => out[e.left - 1].bracket(&out[e.right - 1]).expect("same set"),
        };
        out.push(s);
    }
    out
}

/// `Σ c_i E_i(A, B)` for tree maps `A`, `B` on a common set.
pub fn compose(c: &SeriesCoefficients, a: &LieSeries, b: &LieSeries) -> Result<LieSeries> {
    if a.set().tag() != b.set().tag() {
        return Err(Error::RegistryMismatch);
    }
    let mut elems: Vec<LieSeries> = Vec::with_capacity(c.len());
    let mut out = LieSeries::zero(a.set());
    for e in &c.entries {
        let s = match e.index {
            1 => a.clone(),
            2 => b.clone(),
            _ => elems[e.left - 1].bracket(&elems[e.right - 1])?,
        };
        out.add_scaled(&e.value, &s)?;
        elems.push(s);
    }
    Ok(out)
}

/// `Σ c_i E_i(A, B)` with matrices substituted for `X` and `Y`.
pub fn evaluate_in_matrices(c: &SeriesCoefficients, a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    a.same_dim(b)?;
    let mut elems: Vec<CMatrix> = Vec::with_capacity(c.len());
    let mut out = CMatrix::zeros(a.dim());
    for e in &c.entries {
        let m = match e.index {
            1 => a.clone(),
            2 => b.clone(),
            _ => elems[e.left - 1].commutator(&elems[e.right - 1]),
        };
        let v = to_f64(&e.value);
        if v != 0.0 {
            out.axpy(C64::new(v, 0.0), &m);
        }
        elems.push(m);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn generators() {
        let ctx = Context::new(BasisKind::Hall, 4);
        let x: LieSeries = LieSeries::generator(ctx.set(), Generator::X);
        assert_eq!(x.value(ctx.set().black()), &from_int(1));
        assert_eq!(x.value(ctx.set().white()), &from_int(0));
        assert!((2..ctx.set().len()).all(|l| x.value(l) == &from_int(0)));
        let c = extract_coefficients(&x, &ctx).unwrap();
        assert_eq!(c, SeriesCoefficients::unit(ctx.table(), 4, 1).unwrap());
    }

    #[test]
    fn bracket_examples() {
        let ctx = Context::new(BasisKind::Hall, 3);
        let x: LieSeries = LieSeries::generator(ctx.set(), Generator::X);
        let y: LieSeries = LieSeries::generator(ctx.set(), Generator::Y);
        let e3 = y.bracket(&x).unwrap();
        assert_eq!(e3.value(ctx.hall_local(3)), &from_int(1));
        // white root with a white child is never hit by a bracket of generators
        let ww = ctx.registry().clone().parse_canonical("w(w)").unwrap();
        assert_eq!(x.bracket(&y).unwrap().at(ww).unwrap(), &from_int(0));
    }

    #[test]
    fn bushy_tree_bracket() {
        // white root with two black children: two identical single-vertex splits
        let ctx = Context::new(BasisKind::Hall, 3);
        let mut reg = ctx.registry().clone();
        let bushy = reg.parse_canonical("w(b,b)").unwrap();
        let two = reg.parse_canonical("w(b)").unwrap();
        let set = ctx.set();
        let l = set.local_index(bushy).unwrap();
        let a = LieSeries::from_fn(set, |k| q(k as i64 + 2, 3));
        let b = LieSeries::from_fn(set, |k| q(1, k as i64 + 5));
        let t2 = set.local_index(two).unwrap();
        let bl = set.black();
        let expect = (a.value(t2) * b.value(bl) - a.value(bl) * b.value(t2)) * from_int(2);
        assert_eq!(a.bracket_at(&b, l), expect);
    }

    #[test]
    fn projection_partition() {
        let ctx = Context::new(BasisKind::Lyndon, 5);
        let a = LieSeries::from_fn(ctx.set(), |k| q(k as i64 - 7, 11));
        let mut sum = LieSeries::zero(ctx.set());
        for n in 1..=5 {
            sum.add_assign(&a.project_degree(n)).unwrap();
        }
        assert_eq!(sum, a);
        let x: LieSeries = LieSeries::generator(ctx.set(), Generator::X);
        assert!(x.project_degree(2).is_zero());
    }

    #[test]
    fn mismatched_sets_rejected() {
        let a = Context::new(BasisKind::Hall, 3);
        let b = Context::new(BasisKind::Hall, 3);
        let x: LieSeries = LieSeries::generator(a.set(), Generator::X);
        let y: LieSeries = LieSeries::generator(b.set(), Generator::Y);
        assert!(matches!(x.bracket(&y), Err(Error::RegistryMismatch)));
        assert!(matches!(x.substitute_swap_negate(), Err(Error::SwapUnavailable)));
    }

    #[test]
    fn substitution_of_generator() {
        let ctx = Context::with_swaps(BasisKind::Hall, 4);
        let x: LieSeries = LieSeries::generator(ctx.set(), Generator::X);
        let y: LieSeries = LieSeries::generator(ctx.set(), Generator::Y);
        assert_eq!(x.substitute_swap_negate().unwrap(), y.neg());
    }

    #[test]
    fn matrix_evaluation_trivial_cases() {
        let table = BasisTable::build(BasisKind::Hall, 4);
        let a = CMatrix::from_real(&[&[0.0, 1.0], &[2.0, 0.5]]).unwrap();
        let b = CMatrix::from_real(&[&[1.0, 0.0], &[-1.0, 3.0]]).unwrap();
        let z = SeriesCoefficients::zeros(&table, 4);
        assert_eq!(evaluate_in_matrices(&z, &a, &b).unwrap(), CMatrix::zeros(2));
        let mut s = z.clone();
        s.entries[0].value = from_int(1);
        s.entries[1].value = from_int(1);
        assert_eq!(evaluate_in_matrices(&s, &a, &b).unwrap(), &a + &b);
    }
}
