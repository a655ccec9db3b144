//! Hall–Viennot bases of the free Lie algebra on `X`, `Y`.
//!
//! Every basis element is `E_1 = X`, `E_2 = Y` or `E_i = [E_{i'}, E_{i''}]`.
//! A [`BasisTable`] stores, for each 1-based index, the degree, the factor
//! indices and the Hall word. Two families are provided: the classical
//! P. Hall basis, where the Hall order is the natural order on indices, and
//! the Lyndon basis, where `i ≻ j` iff `w_i` precedes `w_j` in dictionary
//! order.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisKind {
    Hall,
    Lyndon,
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BasisKind::Hall => "hall",
            BasisKind::Lyndon => "lyndon",
        })
    }
}

impl FromStr for BasisKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "hall" | "classical-hall" => Ok(BasisKind::Hall),
            "lyndon" => Ok(BasisKind::Lyndon),
            other => Err(format!("unknown basis kind {other:?}")),
        }
    }
}

/// A word over `{x, y}` packed as bits (`x = 0`, `y = 1`), first letter most significant.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Word {
    bits: u64,
    len: u8,
}

impl Word {
    pub const MAX_LEN: usize = 64;

    pub const fn x() -> Self {
        Word { bits: 0, len: 1 }
    }

    pub const fn y() -> Self {
        Word { bits: 1, len: 1 }
    }

    pub fn from_bits(bits: u64, len: usize) -> Self {
        assert!(len <= Self::MAX_LEN);
        let mask = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
        Word {
            bits: bits & mask,
            len: len as u8,
        }
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn len(self) -> usize {
        self.len as usize
    }

    pub fn is_empty(self) -> bool {
        self.len == 0
    }

    /// `true` for `y` at position `pos` (0-based from the left).
    pub fn is_y_at(self, pos: usize) -> bool {
        debug_assert!(pos < self.len());
        (self.bits >> (self.len() - 1 - pos)) & 1 == 1
    }

    pub fn concat(self, other: Word) -> Word {
        assert!(self.len() + other.len() <= Self::MAX_LEN, "word too long");
        let bits = if other.len == 64 {
            other.bits
        } else {
            (self.bits << other.len) | other.bits
        };
        Word {
            bits,
            len: self.len + other.len,
        }
    }

    /// Suffix starting at `start`.
    pub fn suffix(self, start: usize) -> Word {
        Word::from_bits(self.bits, self.len() - start)
    }

    /// Prefix of length `len`.
    pub fn prefix(self, len: usize) -> Word {
        Word::from_bits(self.bits >> (self.len() - len), len)
    }

    pub fn count_y(self) -> usize {
        self.bits.count_ones() as usize
    }

    /// Dictionary order: letterwise, a proper prefix comes first.
    pub fn cmp_lex(self, other: Word) -> Ordering {
        let n = self.len().min(other.len());
        for p in 0..n {
            match (self.is_y_at(p), other.is_y_at(p)) {
                (false, true) => return Ordering::Less,
                (true, false) => return Ordering::Greater,
                _ => {}
            }
        }
        self.len().cmp(&other.len())
    }

    /// Strictly smaller than each of its proper suffixes.
    pub fn is_lyndon(self) -> bool {
        if self.is_empty() {
            return false;
        }
        (1..self.len()).all(|s| self.cmp_lex(self.suffix(s)) == Ordering::Less)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in 0..self.len() {
            f.write_str(if self.is_y_at(p) { "y" } else { "x" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s.len() > Self::MAX_LEN {
            return Err(format!("word longer than {} letters", Self::MAX_LEN));
        }
        let mut bits = 0u64;
        for c in s.chars() {
            bits <<= 1;
            match c {
                'x' | 'X' => {}
                'y' | 'Y' => bits |= 1,
                other => return Err(format!("letter {other:?} is not x or y")),
            }
        }
        Ok(Word {
            bits,
            len: s.len() as u8,
        })
    }
}

/// One row of a basis table. For generators `left` is the index itself and
/// `right` is 0, following the convention `1' = 1, 1'' = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasisEntry {
    pub degree: usize,
    pub left: usize,
    pub right: usize,
    pub word: Word,
}

impl BasisEntry {
    pub fn is_generator(&self) -> bool {
        self.right == 0
    }
}

#[derive(Clone, Debug)]
pub struct BasisTable {
    kind: BasisKind,
    max_degree: usize,
    entries: Vec<BasisEntry>,
    /// `degree_start[n]` is the first index of degree `n` (1-based); length `max_degree + 2`.
    degree_start: Vec<usize>,
}

impl BasisTable {
    pub fn build(kind: BasisKind, max_degree: usize) -> Self {
        match kind {
            BasisKind::Hall => build_classical_hall(max_degree),
            BasisKind::Lyndon => build_lyndon(max_degree),
        }
    }

    fn from_entries(kind: BasisKind, max_degree: usize, entries: Vec<BasisEntry>) -> Self {
        let mut degree_start = vec![1; max_degree + 2];
        let mut pos = 0;
        for (n, slot) in degree_start.iter_mut().enumerate().skip(1) {
            while pos < entries.len() && entries[pos].degree < n {
                pos += 1;
            }
            *slot = pos + 1;
        }
        BasisTable {
            kind,
            max_degree,
            entries,
            degree_start,
        }
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Number of basis elements of degree at most `max_degree` (the `m_N` of the construction).
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entry for the 1-based index `i`.
    pub fn entry(&self, i: usize) -> Result<&BasisEntry> {
        if i == 0 || i > self.entries.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.entries.len(),
            });
        }
        Ok(&self.entries[i - 1])
    }

    /// Entry for an index already known to be valid.
    pub fn get(&self, i: usize) -> &BasisEntry {
        &self.entries[i - 1]
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, &BasisEntry)> {
        self.entries.iter().enumerate().map(|(k, e)| (k + 1, e))
    }

    /// Indices of degree `n`, as a range of 1-based indices.
    pub fn degree_range(&self, n: usize) -> std::ops::Range<usize> {
        if n == 0 || n > self.max_degree {
            return 1..1;
        }
        self.degree_start[n]..self.degree_start[n + 1]
    }

    pub fn index_of_word(&self, w: Word) -> Option<usize> {
        self.entries
            .iter()
            .position(|e| e.word == w)
            .map(|p| p + 1)
    }

    /// Word → index lookup table.
    pub fn word_index(&self) -> HashMap<Word, usize> {
        self.entries()
            .map(|(i, e)| (e.word, i))
            .collect::<HashMap<_, _>>()
    }

    /// The Hall order: `true` iff `i ≻ j`. Index 0 (the right factor of a
    /// generator) is below every index.
    pub fn precedes(&self, i: usize, j: usize) -> bool {
        if j == 0 {
            return i != 0;
        }
        if i == 0 {
            return false;
        }
        match self.kind {
            BasisKind::Hall => i > j,
            BasisKind::Lyndon => self.get(i).word.cmp_lex(self.get(j).word) == Ordering::Less,
        }
    }

    /// Fully expanded commutator, `[expr(i'), expr(i'')]`, with `E_1 = X`, `E_2 = Y`.
    pub fn element_expression(&self, i: usize) -> Result<String> {
        self.entry(i)?;
        let mut out = String::new();
        self.write_expression(i, &mut out);
        Ok(out)
    }

    fn write_expression(&self, i: usize, out: &mut String) {
        let e = self.get(i);
        if e.is_generator() {
            out.push(if e.word == Word::x() { 'X' } else { 'Y' });
        } else {
            out.push('[');
            self.write_expression(e.left, out);
            out.push(',');
            self.write_expression(e.right, out);
            out.push(']');
        }
    }

    /// Checks every structural invariant of a Hall–Viennot table: degrees,
    /// words, per-degree counts, `i ≻ i''`, and bijectivity of
    /// `i ↦ (i', i'')` onto `{(j, k) : j ≻ k ⪰ j''}` within the degree bound.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidBasis(msg));
        if self.entries.len() < 2 || self.entries[0].word != Word::x() || self.entries[1].word != Word::y() {
            return bad("generators must be x and y".into());
        }
        for (i, e) in self.entries() {
            if i <= 2 {
                if e.degree != 1 || !e.is_generator() {
                    return bad(format!("generator {i} malformed"));
                }
                continue;
            }
            if e.left >= i || e.right >= i || e.right == 0 {
                return bad(format!("factors of {i} must be smaller nonzero indices"));
            }
            let (l, r) = (self.get(e.left), self.get(e.right));
            if e.degree != l.degree + r.degree {
                return bad(format!("degree of {i} is not |i'| + |i''|"));
            }
            if e.word != l.word.concat(r.word) {
                return bad(format!("word of {i} is not w_i' w_i''"));
            }
            if !self.precedes(i, e.right) {
                return bad(format!("{i} does not precede its right factor"));
            }
        }
        for w in self.entries.windows(2) {
            if w[0].degree > w[1].degree {
                return bad("indices are not sorted by degree".into());
            }
        }
        for n in 1..=self.max_degree {
            let count = self.degree_range(n).len() as u64;
            if count != homogeneous_dimension(n) {
                return bad(format!("degree {n} has {count} entries"));
            }
        }
        let mut seen = HashSet::new();
        for (i, e) in self.entries().skip(2) {
            if !seen.insert((e.left, e.right)) {
                return bad(format!("pair ({}, {}) repeated at {i}", e.left, e.right));
            }
            let j = e.left;
            let jr = self.get(j).right;
            if !(self.precedes(j, e.right) && (e.right == jr || self.precedes(e.right, jr))) {
                return bad(format!("pair of {i} is not admissible"));
            }
        }
        // surjectivity onto admissible pairs inside the degree bound
        for (j, ej) in self.entries() {
            for (k, ek) in self.entries() {
                if ej.degree + ek.degree > self.max_degree {
                    continue;
                }
                let jr = ej.right;
                let admissible = self.precedes(j, k) && (k == jr || self.precedes(k, jr));
                if admissible && !seen.contains(&(j, k)) {
                    return bad(format!("admissible pair ({j}, {k}) has no index"));
                }
            }
        }
        Ok(())
    }
}

/// Classical P. Hall basis up to degree `max_degree`.
///
/// Indices of degree `n` are generated in the order of the triple loop: for
/// `j` ascending, for `k > j` ascending, accept when `|j| + |k| = n` and
/// `j ≥ k''`, giving `i'' = j`, `i' = k`.
pub fn build_classical_hall(max_degree: usize) -> BasisTable {
    assert!(max_degree >= 1, "degree bound must be positive");
    assert!(max_degree <= Word::MAX_LEN, "degree bound exceeds word capacity");
    let mut entries = vec![
        BasisEntry { degree: 1, left: 1, right: 0, word: Word::x() },
        BasisEntry { degree: 1, left: 2, right: 0, word: Word::y() },
    ];
    let mut by_degree: Vec<Vec<usize>> = vec![Vec::new(), vec![1, 2]];
    for n in 2..=max_degree {
        let existing = entries.len();
        let mut fresh = Vec::new();
        for j in 1..=existing {
            let dj = entries[j - 1].degree;
            if dj >= n {
                continue;
            }
            for &k in &by_degree[n - dj] {
                if k <= j {
                    continue;
                }
                let ek = entries[k - 1];
                if j >= ek.right {
                    let word = ek.word.concat(entries[j - 1].word);
                    entries.push(BasisEntry { degree: n, left: k, right: j, word });
                    fresh.push(entries.len());
                }
            }
        }
        by_degree.push(fresh);
    }
    BasisTable::from_entries(BasisKind::Hall, max_degree, entries)
}

/// Lyndon basis up to degree `max_degree`, factored by the standard
/// factorization `w = uv` with `v` the longest proper Lyndon suffix.
/// Within a degree, indices follow decreasing dictionary order, which is
/// increasing Hall order.
pub fn build_lyndon(max_degree: usize) -> BasisTable {
    assert!(max_degree >= 1, "degree bound must be positive");
    assert!(max_degree <= Word::MAX_LEN, "degree bound exceeds word capacity");
    let mut by_len: Vec<Vec<Word>> = vec![Vec::new(); max_degree + 1];
    for w in lyndon_words(max_degree) {
        by_len[w.len()].push(w);
    }
    let mut words = Vec::new();
    for group in by_len.iter_mut().skip(1) {
        group.sort_by(|a, b| b.cmp_lex(*a));
        words.extend(group.iter().copied());
    }
    // generators first: x, y (decreasing dictionary order would put y first)
    words.swap(0, 1);
    debug_assert_eq!(words[0], Word::x());
    let index: HashMap<Word, usize> = words.iter().enumerate().map(|(k, w)| (*w, k + 1)).collect();
    let entries = words
        .iter()
        .enumerate()
        .map(|(k, &w)| {
            if w.len() == 1 {
                return BasisEntry { degree: 1, left: k + 1, right: 0, word: w };
            }
            let (u, v) = standard_factorization(w);
            BasisEntry {
                degree: w.len(),
                left: index[&u],
                right: index[&v],
                word: w,
            }
        })
        .collect();
    BasisTable::from_entries(BasisKind::Lyndon, max_degree, entries)
}

/// `w = uv` with `v` the longest proper suffix of `w` that is a Lyndon word.
pub fn standard_factorization(w: Word) -> (Word, Word) {
    assert!(w.len() >= 2);
    for start in 1..w.len() {
        let v = w.suffix(start);
        if v.is_lyndon() {
            return (w.prefix(start), v);
        }
    }
    unreachable!("the last letter is always a Lyndon suffix")
}

/// All Lyndon words over `{x, y}` of length `1..=max_len`, in dictionary order
/// (Duval's generation algorithm).
pub fn lyndon_words(max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut w: Vec<u8> = vec![0];
    loop {
        out.push(word_from_letters(&w));
        let m = w.len();
        while w.len() < max_len {
            let c = w[w.len() - m];
            w.push(c);
        }
        while matches!(w.last(), Some(1)) {
            w.pop();
        }
        match w.last_mut() {
            Some(last) => *last = 1,
            None => break,
        }
    }
    out
}

fn word_from_letters(letters: &[u8]) -> Word {
    let bits = letters.iter().fold(0u64, |acc, &c| (acc << 1) | c as u64);
    Word::from_bits(bits, letters.len())
}

/// Dimension of the degree-`n` homogeneous part of the free Lie algebra on
/// two generators: `(1/n) Σ_{d|n} μ(d) 2^{n/d}`.
pub fn homogeneous_dimension(n: usize) -> u64 {
    assert!(n >= 1);
    assert!(n < 128, "2^n overflows");
    let mut total: i128 = 0;
    for d in 1..=n {
        if n.is_multiple_of(d) {
            total += mobius(d) as i128 * (1i128 << (n / d));
        }
    }
    (total / n as i128) as u64
}

fn mobius(mut n: usize) -> i32 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn witt_numbers() {
        let expected = [2, 1, 2, 3, 6, 9, 18, 30, 56, 99];
        for (n, &d) in expected.iter().enumerate() {
            assert_eq!(homogeneous_dimension(n + 1), d);
        }
        assert_eq!(homogeneous_dimension(19), 27594);
        assert_eq!(homogeneous_dimension(20), 52377);
        let total: u64 = (1..=20).map(homogeneous_dimension).sum();
        assert_eq!(total, 111013);
    }

    #[test]
    fn hall_small_degrees() {
        let t = build_classical_hall(2);
        assert_eq!(t.len(), 3);
        let e = t.get(3);
        assert_eq!((e.left, e.right, e.degree), (2, 1, 2));
        assert_eq!(e.word.to_string(), "yx");

        let t = build_classical_hall(5);
        let e = t.get(14);
        assert_eq!((e.left, e.right, e.degree), (5, 3, 5));
        let words: Vec<String> = t.entries().map(|(_, e)| e.word.to_string()).collect();
        assert_eq!(
            words,
            [
                "x", "y", "yx", "yxx", "yxy", "yxxx", "yxxy", "yxyy", "yxxxx", "yxxxy", "yxxyy",
                "yxyyy", "yxxyx", "yxyyx"
            ]
        );
        assert_eq!(build_classical_hall(9).len(), 127);
        assert_eq!(build_classical_hall(1).len(), 2);
    }

    #[test]
    fn hall_factor_order() {
        let t = build_classical_hall(10);
        for (i, e) in t.entries().skip(2) {
            let lr = t.get(e.left).right;
            assert!(e.left > e.right && e.right >= lr, "index {i}");
        }
    }

    #[test]
    fn lyndon_small_degrees() {
        let t = build_lyndon(5);
        let idx = t.word_index();
        let e = t.get(3);
        assert_eq!((e.left, e.right), (1, 2));
        assert_eq!(e.word, w("xy"));
        let e = t.get(idx[&w("xyxyy")]);
        assert_eq!((t.get(e.left).word, t.get(e.right).word), (w("xy"), w("xyy")));
        let e = t.get(idx[&w("xxxxy")]);
        assert_eq!((e.left, t.get(e.right).word), (1, w("xxxy")));
        assert_eq!(t.element_expression(8).unwrap(), "[X,[X,[X,Y]]]");
    }

    #[test]
    fn expressions() {
        let t = build_classical_hall(5);
        assert_eq!(t.element_expression(4).unwrap(), "[[Y,X],X]");
        assert_eq!(t.element_expression(13).unwrap(), "[[[Y,X],X],[Y,X]]");
        assert!(matches!(
            t.element_expression(15),
            Err(Error::IndexOutOfRange { index: 15, len: 14 })
        ));
        assert!(t.element_expression(0).is_err());
    }

    #[test]
    fn both_bases_validate() {
        for n in 1..=9 {
            build_classical_hall(n).validate().unwrap();
            build_lyndon(n).validate().unwrap();
        }
    }

    #[test]
    fn validation_rejects_tampering() {
        let mut t = build_classical_hall(4);
        t.entries[5].right = 2; // (4,2) duplicates index 7
        assert!(t.validate().is_err());
    }

    #[test]
    fn lyndon_words_exhaustive() {
        let max = 12;
        let generated: HashSet<Word> = lyndon_words(max).into_iter().collect();
        for len in 1..=max {
            for bits in 0..(1u64 << len) {
                let word = Word::from_bits(bits, len);
                assert_eq!(generated.contains(&word), word.is_lyndon(), "{word}");
            }
        }
        let t = build_lyndon(max);
        for (_, e) in t.entries() {
            assert!(e.word.is_lyndon());
        }
    }

    #[test]
    fn word_order_and_parsing() {
        assert_eq!(w("xy").cmp_lex(w("xyy")), Ordering::Less);
        assert_eq!(w("xyy").cmp_lex(w("y")), Ordering::Less);
        assert!(w("xxy").is_lyndon());
        assert!(!w("xyxy").is_lyndon());
        assert!("xz".parse::<Word>().is_err());
        assert_eq!(w("xyyx").to_string(), "xyyx");
        assert_eq!(w("xyyx").count_y(), 2);
    }
}
