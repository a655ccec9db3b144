//! Reference implementations used only by the tests. Everything here is
//! written from the definitions, without calling into the library.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;

pub fn qq(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// A bicoloured rooted tree: root colour (`b` or `w`) and children.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tree {
    pub color: char,
    pub kids: Vec<Tree>,
}

impl Tree {
    pub fn leaf(color: char) -> Tree {
        Tree { color, kids: Vec::new() }
    }

    pub fn size(&self) -> usize {
        1 + self.kids.iter().map(Tree::size).sum::<usize>()
    }

    /// `b` / `w` followed by the sorted child strings in parentheses.
    pub fn canonical(&self) -> String {
        if self.kids.is_empty() {
            return self.color.to_string();
        }
        let mut parts: Vec<String> = self.kids.iter().map(Tree::canonical).collect();
        parts.sort();
        format!("{}({})", self.color, parts.join(","))
    }

    /// `v` attached as a new child of the root of `self`.
    pub fn graft(&self, v: &Tree) -> Tree {
        let mut t = self.clone();
        t.kids.push(v.clone());
        t
    }

    /// Every way of deleting one edge: (part containing the root, cut-off subtree).
    pub fn edge_removals(&self) -> Vec<(Tree, Tree)> {
        let mut out = Vec::new();
        for (k, child) in self.kids.iter().enumerate() {
            let mut rest = self.clone();
            rest.kids.remove(k);
            out.push((rest, child.clone()));
            for (root_part, cut) in child.edge_removals() {
                let mut t = self.clone();
                t.kids[k] = root_part;
                out.push((t, cut));
            }
        }
        out
    }

    fn vertices(&self, parent: Option<usize>, out: &mut Vec<(char, Option<usize>)>) {
        let me = out.len();
        out.push((self.color, parent));
        for k in &self.kids {
            k.vertices(Some(me), out);
        }
    }

    /// Automorphisms counted by trying every vertex permutation.
    pub fn automorphisms_brute_force(&self) -> u64 {
        let mut v = Vec::new();
        self.vertices(None, &mut v);
        let n = v.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut count = 0;
        permute(&mut perm, 0, &mut |p| {
            let ok = (0..n).all(|i| v[p[i]].0 == v[i].0 && v[p[i]].1 == v[i].1.map(|par| p[par]));
            if ok {
                count += 1;
            }
        });
        count
    }
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for j in k..p.len() {
        p.swap(k, j);
        permute(p, k + 1, f);
        p.swap(k, j);
    }
}

/// All bicoloured rooted trees with exactly `n` vertices, by canonical string.
pub fn all_trees(n: usize) -> Vec<Tree> {
    let mut level: Vec<Tree> = vec![Tree::leaf('b'), Tree::leaf('w')];
    for _ in 1..n {
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for t in &level {
            for grown in add_leaf_everywhere(t) {
                if seen.insert(grown.canonical()) {
                    next.push(grown);
                }
            }
        }
        level = next;
    }
    level
}

fn add_leaf_everywhere(t: &Tree) -> Vec<Tree> {
    let mut out = vec![t.graft(&Tree::leaf('b')), t.graft(&Tree::leaf('w'))];
    for (k, child) in t.kids.iter().enumerate() {
        for g in add_leaf_everywhere(child) {
            let mut c = t.clone();
            c.kids[k] = g;
            out.push(c);
        }
    }
    out
}

/// Trees `u_1 = b`, `u_2 = w`, `u_i = u_{i'} ∘ u_{i''}` from a list of `(i', i'')`.
pub fn hall_trees_from_factors(factors: &[(usize, usize)]) -> Vec<Tree> {
    let mut out: Vec<Tree> = Vec::new();
    for (k, &(l, r)) in factors.iter().enumerate() {
        let t = match k {
            0 => Tree::leaf('b'),
            1 => Tree::leaf('w'),
            _ => out[l - 1].graft(&out[r - 1]),
        };
        out.push(t);
    }
    out
}

/// Smallest set containing `seeds` and both parts of every edge removal.
pub fn split_closure(seeds: &[Tree]) -> BTreeSet<String> {
    let mut seen = BTreeSet::new();
    let mut stack: Vec<Tree> = seeds.to_vec();
    while let Some(t) = stack.pop() {
        if !seen.insert(t.canonical()) {
            continue;
        }
        for (a, b) in t.edge_removals() {
            stack.push(a);
            stack.push(b);
        }
    }
    seen
}

/// A word in `x`, `y`.
pub type W = Vec<u8>;

/// Truncated noncommutative series keyed by word.
pub type Series = HashMap<W, Q>;

fn mul(a: &Series, b: &Series, max_len: usize) -> Series {
    let mut out = Series::new();
    for (wa, ca) in a {
        for (wb, cb) in b {
            if wa.len() + wb.len() > max_len {
                continue;
            }
            let mut w = wa.clone();
            w.extend_from_slice(wb);
            *out.entry(w).or_insert_with(Q::zero) += ca * cb;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `log(e^x e^y)` on words of length `≤ max_len`, from
/// `e^x e^y = Σ x^a y^b / (a! b!)` and `log(1 + W) = Σ (−1)^{k+1} W^k / k`.
pub fn word_log(max_len: usize) -> Series {
    let mut w = Series::new();
    for a in 0..=max_len {
        for b in 0..=max_len - a {
            if a + b == 0 {
                continue;
            }
            let mut word = vec![b'x'; a];
            word.extend(std::iter::repeat_n(b'y', b));
            w.insert(word, Q::new(BigInt::one(), factorial(a) * factorial(b)));
        }
    }
    let mut out = Series::new();
    let mut power = w.clone();
    for k in 1..=max_len {
        let sign = if k % 2 == 1 { 1 } else { -1 };
        for (word, c) in &power {
            *out.entry(word.clone()).or_insert_with(Q::zero) += c * qq(sign, k as i64);
        }
        power = mul(&power, &w, max_len);
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Word expansion of `Σ c_i E_i` with `E_i = E_{i'} E_{i''} − E_{i''} E_{i'}`.
pub fn expand(factors: &[(usize, usize)], coeffs: &[Q]) -> Series {
    let mut elems: Vec<Series> = Vec::new();
    for (k, &(l, r)) in factors.iter().enumerate() {
        let e = match k {
            0 => Series::from([(vec![b'x'], Q::one())]),
            1 => Series::from([(vec![b'y'], Q::one())]),
            _ => {
                let mut ab = mul(&elems[l - 1], &elems[r - 1], usize::MAX);
                for (w, c) in mul(&elems[r - 1], &elems[l - 1], usize::MAX) {
                    *ab.entry(w).or_insert_with(Q::zero) -= c;
                }
                ab.retain(|_, v| !v.is_zero());
                ab
            }
        };
        elems.push(e);
    }
    let mut out = Series::new();
    for (e, c) in elems.iter().zip(coeffs) {
        for (w, v) in e {
            *out.entry(w.clone()).or_insert_with(Q::zero) += v * c;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn mobius(n: usize) -> i64 {
    let (mut n, mut r, mut p) = (n, 1, 2);
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            r = -r;
        }
        p += 1;
    }
    if n > 1 {
        -r
    } else {
        r
    }
}

/// Witt's formula for two generators.
pub fn witt(n: usize) -> i64 {
    (1..=n).filter(|d| n.is_multiple_of(*d)).map(|d| mobius(d) * (1i64 << (n / d))).sum::<i64>() / n as i64
}
