//! Truncated series in the free associative algebra on `x`, `y`.
//!
//! Used as an independent check: `log(e^x e^y)` computed directly on words
//! must equal the word expansion of the BCH coefficients.

use std::collections::HashMap;

use crate::basis::Word;
use crate::rational::{from_int, Coefficient, Rational};
use crate::series::SeriesCoefficients;

/// Exact coefficients on all words of length `≤ N`, stored densely per length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordPoly {
    max_len: usize,
    blocks: Vec<Vec<Rational>>,
}

impl WordPoly {
    pub fn zero(max_len: usize) -> Self {
        assert!(max_len < 31, "dense word storage limited to length 30");
        let blocks = (0..=max_len).map(|l| vec![from_int(0); 1 << l]).collect();
        WordPoly { max_len, blocks }
    }

    pub fn one(max_len: usize) -> Self {
        let mut p = Self::zero(max_len);
        p.blocks[0][0] = from_int(1);
        p
    }

    pub fn monomial(max_len: usize, w: Word, c: Rational) -> Self {
        let mut p = Self::zero(max_len);
        if w.len() <= max_len {
            p.blocks[w.len()][w.bits() as usize] = c;
        }
        p
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn get(&self, w: Word) -> Rational {
        if w.len() > self.max_len {
            return from_int(0);
        }
        self.blocks[w.len()][w.bits() as usize].clone()
    }

    pub fn set(&mut self, w: Word, c: Rational) {
        if w.len() <= self.max_len {
            self.blocks[w.len()][w.bits() as usize] = c;
        }
    }

    /// Nonzero terms ordered by length, then by `x < y` lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (Word, &Rational)> {
        self.blocks.iter().enumerate().flat_map(|(l, b)| {
            b.iter()
                .enumerate()
                .filter(|(_, c)| !Coefficient::is_zero(*c))
                .map(move |(bits, c)| (Word::from_bits(bits as u64, l), c))
        })
    }

    pub fn is_zero(&self) -> bool {
        self.terms().next().is_none()
    }

    pub fn add_assign(&mut self, other: &WordPoly) {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            for (x, y) in a.iter_mut().zip(b) {
                x.add_assign_ref(y);
            }
        }
    }

    pub fn scale(&self, r: &Rational) -> WordPoly {
        WordPoly {
            max_len: self.max_len,
            blocks: self.blocks.iter().map(|b| b.iter().map(|c| c * r).collect()).collect(),
        }
    }

    /// Product truncated at `max_len`.
    pub fn mul(&self, other: &WordPoly) -> WordPoly {
        let n = self.max_len.min(other.max_len);
        let mut out = WordPoly::zero(n);
        for la in 0..=n {
            for (a, ca) in self.blocks[la].iter().enumerate() {
                if Coefficient::is_zero(ca) {
                    continue;
                }
                for lb in 0..=n - la {
                    let block = &mut out.blocks[la + lb];
                    for (b, cb) in other.blocks[lb].iter().enumerate() {
                        if !Coefficient::is_zero(cb) {
                            block[(a << lb) | b] += ca * cb;
                        }
                    }
                }
            }
        }
        out
    }

    /// Truncated `exp` of a series with zero constant term.
    pub fn exp(&self) -> WordPoly {
        let mut out = WordPoly::one(self.max_len);
        let mut term = WordPoly::one(self.max_len);
        for k in 1..=self.max_len {
            term = term.mul(self).scale(&Rational::new(1.into(), (k as i64).into()));
            out.add_assign(&term);
        }
        out
    }

    /// Truncated `log` of a series with constant term 1.
    pub fn log(&self) -> WordPoly {
        let mut t = self.clone();
        t.blocks[0][0] -= from_int(1);
        let mut out = WordPoly::zero(self.max_len);
        let mut power = WordPoly::one(self.max_len);
        for k in 1..=self.max_len {
            power = power.mul(&t);
            let sign = if k % 2 == 1 { 1 } else { -1 };
            out.add_assign(&power.scale(&Rational::new(sign.into(), (k as i64).into())));
        }
        out
    }
}

/// `log(e^x e^y)` on all words of length `≤ N`.
pub fn word_log_oracle(max_len: usize) -> WordPoly {
    let x = WordPoly::monomial(max_len, Word::x(), from_int(1));
    let y = WordPoly::monomial(max_len, Word::y(), from_int(1));
    x.exp().mul(&y.exp()).log()
}

/// Homogeneous word expansion with integer coefficients, keyed by bit pattern.
type Expansion = HashMap<u64, i64>;

/// `Σ c_i E_i` expanded into words with `[A,B] = AB − BA`.
pub fn expand_to_words(c: &SeriesCoefficients, max_len: usize) -> WordPoly {
    let mut out = WordPoly::zero(max_len);
    let mut elems: Vec<Expansion> = Vec::with_capacity(c.len());
    for e in c.entries.iter().take_while(|e| e.degree <= max_len) {
        let ex = match e.index {
            1 => HashMap::from([(0u64, 1i64)]),
            2 => HashMap::from([(1u64, 1i64)]),
            _ => {
                let (a, b) = (&elems[e.left - 1], &elems[e.right - 1]);
                let la = c.entries[e.left - 1].degree;
                let lb = c.entries[e.right - 1].degree;
                let mut m: Expansion = HashMap::new();
                for (&wa, &ca) in a {
                    for (&wb, &cb) in b {
                        *m.entry((wa << lb) | wb).or_insert(0) += ca * cb;
                        *m.entry((wb << la) | wa).or_insert(0) -= ca * cb;
                    }
                }
                m.retain(|_, v| *v != 0);
                m
            }
        };
        if !Coefficient::is_zero(&e.value) {
            for (&bits, &k) in &ex {
                out.blocks[e.degree][bits as usize] += &e.value * from_int(k);
            }
        }
        elems.push(ex);
    }
    out
}
