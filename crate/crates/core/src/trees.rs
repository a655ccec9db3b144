//! Bicoloured rooted trees.
//!
//! Trees are hash-consed in a [`TreeRegistry`]: a tree with at least two
//! vertices is stored as the pair `(base, last)` where `last` is its
//! largest child (by id) and `base` is the tree left after detaching that
//! child, so `tree = base ∘ last`. Children are therefore kept sorted by
//! id and structural equality is id equality.
//!
//! A [`TreeSet`] is the frozen, degree-sorted working set used by Lie
//! series: the closure `T̃_N` of the Hall trees under splitting, with every
//! splitting sequence stored as local indices.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::basis::BasisTable;
use crate::error::{Error, Result};

const NONE: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeId(pub u32);

impl fmt::Display for TreeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn swapped(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Node {
    color: Color,
    degree: u32,
    base: u32,
    last: u32,
}

/// Hash-consing store of bicoloured rooted trees.
#[derive(Clone, Debug)]
pub struct TreeRegistry {
    nodes: Vec<Node>,
    index: HashMap<(u32, u32), u32>,
    splits: HashMap<u32, Box<[(TreeId, TreeId)]>>,
    swaps: HashMap<u32, u32>,
}

impl Default for TreeRegistry {
    fn default() -> Self {
        Self::new()
    }
}

impl TreeRegistry {
    /// A registry holding the two single-vertex trees: black (`X`) is id 0, white (`Y`) id 1.
    pub fn new() -> Self {
        let leaf = |color| Node { color, degree: 1, base: NONE, last: NONE };
        TreeRegistry {
            nodes: vec![leaf(Color::Black), leaf(Color::White)],
            index: HashMap::new(),
            splits: HashMap::new(),
            swaps: HashMap::new(),
        }
    }

    pub fn leaf(&self, color: Color) -> TreeId {
        match color {
            Color::Black => TreeId(0),
            Color::White => TreeId(1),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn check(&self, u: TreeId) -> Result<()> {
        if (u.0 as usize) < self.nodes.len() {
            Ok(())
        } else {
            Err(Error::UnknownTree(u.0))
        }
    }

    pub fn color(&self, u: TreeId) -> Color {
        self.nodes[u.0 as usize].color
    }

    pub fn degree(&self, u: TreeId) -> usize {
        self.nodes[u.0 as usize].degree as usize
    }

    /// `(base, last)` with `u = base ∘ last`, or `None` for a single vertex.
    pub fn decompose(&self, u: TreeId) -> Option<(TreeId, TreeId)> {
        let n = self.nodes[u.0 as usize];
        (n.base != NONE).then_some((TreeId(n.base), TreeId(n.last)))
    }

    /// Children of the root in canonical (ascending id) order.
    pub fn children(&self, u: TreeId) -> Vec<TreeId> {
        let mut out = Vec::new();
        let mut cur = u;
        while let Some((base, last)) = self.decompose(cur) {
            out.push(last);
            cur = base;
        }
        out.reverse();
        out
    }

    /// The tree obtained by attaching `v` as a new child of the root of `u`.
    pub fn graft(&mut self, u: TreeId, v: TreeId) -> Result<TreeId> {
        self.check(u)?;
        self.check(v)?;
        Ok(self.graft_unchecked(u, v))
    }

    pub(crate) fn graft_unchecked(&mut self, u: TreeId, v: TreeId) -> TreeId {
        let node = self.nodes[u.0 as usize];
        if node.base == NONE || v.0 >= node.last {
            self.intern(u, v)
        } else {
            let inner = self.graft_unchecked(TreeId(node.base), v);
            self.intern(inner, TreeId(node.last))
        }
    }

    fn intern(&mut self, base: TreeId, last: TreeId) -> TreeId {
        if let Some(&id) = self.index.get(&(base.0, last.0)) {
            return TreeId(id);
        }
        let b = self.nodes[base.0 as usize];
        let l = self.nodes[last.0 as usize];
        let id = self.nodes.len() as u32;
        assert!(id < NONE, "tree registry full");
        self.nodes.push(Node {
            color: b.color,
            degree: b.degree + l.degree,
            base: base.0,
            last: last.0,
        });
        self.index.insert((base.0, last.0), id);
        TreeId(id)
    }

    /// Builds a tree from a root colour and a list of child trees.
    pub fn build(&mut self, color: Color, children: &[TreeId]) -> Result<TreeId> {
        let mut t = self.leaf(color);
        for &c in children {
            t = self.graft(t, c)?;
        }
        Ok(t)
    }

    /// Splitting sequence `S(u)` as `(root part, cut subtree)` pairs, one per edge.
    ///
    /// Computed by the recursion on `u = v ∘ w`: the edge to `w` gives
    /// `(v, w)`, each split `(a, b)` of `v` gives `(a ∘ w, b)`, and each split
    /// `(a, b)` of `w` gives `(v ∘ a, b)`. Results are memoized.
    pub fn splitting_sequence(&mut self, u: TreeId) -> Result<Vec<(TreeId, TreeId)>> {
        self.check(u)?;
        Ok(self.splits_of(u).to_vec())
    }

    fn splits_of(&mut self, u: TreeId) -> &[(TreeId, TreeId)] {
        if !self.splits.contains_key(&u.0) {
            let computed = self.compute_splits(u);
            self.splits.insert(u.0, computed);
        }
        &self.splits[&u.0]
    }

    fn compute_splits(&mut self, u: TreeId) -> Box<[(TreeId, TreeId)]> {
        let Some((v, w)) = self.decompose(u) else {
            return Box::new([]);
        };
        let sv = self.splits_of(v).to_vec();
        let sw = self.splits_of(w).to_vec();
        let mut out = Vec::with_capacity(1 + sv.len() + sw.len());
        out.push((v, w));
        for (a, b) in sv {
            let root = self.graft_unchecked(a, w);
            out.push((root, b));
        }
        for (a, b) in sw {
            let root = self.graft_unchecked(v, a);
            out.push((root, b));
        }
        out.into_boxed_slice()
    }

    /// Drops memoized splitting sequences.
    pub fn clear_split_cache(&mut self) {
        self.splits = HashMap::new();
    }

    /// The same tree with every vertex colour flipped.
    pub fn swap_colors(&mut self, u: TreeId) -> Result<TreeId> {
        self.check(u)?;
        Ok(self.swap_unchecked(u))
    }

    fn swap_unchecked(&mut self, u: TreeId) -> TreeId {
        if let Some(&s) = self.swaps.get(&u.0) {
            return TreeId(s);
        }
        let node = self.nodes[u.0 as usize];
        let s = if node.base == NONE {
            self.leaf(node.color.swapped())
        } else {
            let base = self.swap_unchecked(TreeId(node.base));
            let last = self.swap_unchecked(TreeId(node.last));
            self.graft_unchecked(base, last)
        };
        self.swaps.insert(u.0, s.0);
        self.swaps.insert(s.0, u.0);
        s
    }

    /// Registry-independent canonical string: `b` / `w` for the root colour,
    /// followed by the parenthesized, sorted child strings.
    pub fn canonical_string(&self, u: TreeId) -> String {
        let root = match self.color(u) {
            Color::Black => "b",
            Color::White => "w",
        };
        let children = self.children(u);
        if children.is_empty() {
            return root.to_string();
        }
        let mut parts: Vec<String> = children.iter().map(|&c| self.canonical_string(c)).collect();
        parts.sort();
        format!("{root}({})", parts.join(","))
    }

    /// Parses the canonical string grammar produced by [`Self::canonical_string`].
    pub fn parse_canonical(&mut self, s: &str) -> Result<TreeId> {
        let bytes = s.as_bytes();
        let mut pos = 0;
        let t = self.parse_at(bytes, &mut pos)?;
        if pos != bytes.len() {
            return Err(Error::Parse { line: 1, msg: format!("trailing input at {pos}") });
        }
        Ok(t)
    }

    fn parse_at(&mut self, b: &[u8], pos: &mut usize) -> Result<TreeId> {
        let err = |msg: &str, at: usize| Error::Parse { line: 1, msg: format!("{msg} at {at}") };
        let color = match b.get(*pos) {
            Some(b'b') => Color::Black,
            Some(b'w') => Color::White,
            _ => return Err(err("expected b or w", *pos)),
        };
        *pos += 1;
        let mut t = self.leaf(color);
        if b.get(*pos) == Some(&b'(') {
            *pos += 1;
            loop {
                let c = self.parse_at(b, pos)?;
                t = self.graft_unchecked(t, c);
                match b.get(*pos) {
                    Some(b',') => *pos += 1,
                    Some(b')') => {
                        *pos += 1;
                        break;
                    }
                    _ => return Err(err("expected , or )", *pos)),
                }
            }
        }
        Ok(t)
    }

    /// Order of the automorphism group of `u`, from child multiplicities.
    pub fn automorphism_count(&self, u: TreeId) -> u128 {
        let children = self.children(u);
        let mut total: u128 = 1;
        let mut run = 0u128;
        for (k, c) in children.iter().enumerate() {
            total *= self.automorphism_count(*c);
            run = if k > 0 && children[k - 1] == *c { run + 1 } else { 1 };
            total *= run;
        }
        total
    }
}

/// Hall trees `u_i = u_{i'} ∘ u_{i''}` and their symmetry numbers.
#[derive(Clone, Debug)]
pub struct HallTrees {
    trees: Vec<TreeId>,
    sigma: Vec<u64>,
    kappa: Vec<u64>,
}

impl HallTrees {
    /// Tree `u_i` for the 1-based index `i`.
    pub fn tree(&self, i: usize) -> TreeId {
        self.trees[i - 1]
    }

    /// Symmetry number `σ(u_i)`.
    pub fn sigma(&self, i: usize) -> u64 {
        self.sigma[i - 1]
    }

    pub fn kappa(&self, i: usize) -> u64 {
        self.kappa[i - 1]
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }
}

/// Builds `u_i` and `σ_i = κ_i σ_{i'} σ_{i''}` for every index of `table`,
/// where `κ_i = κ_{i'} + 1` if `(i')'' = i''` and 1 otherwise.
pub fn hall_trees(table: &BasisTable, registry: &mut TreeRegistry) -> HallTrees {
    let mut trees = Vec::with_capacity(table.len());
    let mut sigma = Vec::with_capacity(table.len());
    let mut kappa: Vec<u64> = Vec::with_capacity(table.len());
    for (i, e) in table.entries() {
        if e.is_generator() {
            let color = if i == 1 { Color::Black } else { Color::White };
            trees.push(registry.leaf(color));
            sigma.push(1);
            kappa.push(1);
            continue;
        }
        let (l, r) = (e.left, e.right);
        let t = registry.graft_unchecked(trees[l - 1], trees[r - 1]);
        let k = if table.get(l).right == r { kappa[l - 1] + 1 } else { 1 };
        trees.push(t);
        kappa.push(k);
        sigma.push(k * sigma[l - 1] * sigma[r - 1]);
    }
    HallTrees { trees, sigma, kappa }
}

/// One distinct pair of a splitting sequence, with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Split {
    pub root: u32,
    pub cut: u32,
    pub mult: u32,
}

static NEXT_SET_ID: AtomicU64 = AtomicU64::new(1);

/// Frozen working set of trees, sorted by degree, with compressed splitting
/// sequences in local indices. Immutable; safe to share across threads.
#[derive(Debug)]
pub struct TreeSet {
    tag: u64,
    max_degree: usize,
    trees: Vec<TreeId>,
    degrees: Vec<u8>,
    degree_offsets: Vec<usize>,
    split_offsets: Vec<u32>,
    splits: Vec<Split>,
    local: HashMap<TreeId, u32>,
    swap: Option<Vec<u32>>,
    closure_len: usize,
}

impl TreeSet {
    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub(crate) fn tag(&self) -> u64 {
        self.tag
    }

    /// Size of the closure `T̃_N` proper (excluding trees added only for colour swapping).
    pub fn closure_len(&self) -> usize {
        self.closure_len
    }

    pub fn tree(&self, local: usize) -> TreeId {
        self.trees[local]
    }

    pub fn degree(&self, local: usize) -> usize {
        self.degrees[local] as usize
    }

    pub fn local_index(&self, id: TreeId) -> Option<usize> {
        self.local.get(&id).map(|&l| l as usize)
    }

    /// Local indices of the trees with exactly `n` vertices.
    pub fn degree_block(&self, n: usize) -> std::ops::Range<usize> {
        if n == 0 || n > self.max_degree {
            return 0..0;
        }
        self.degree_offsets[n]..self.degree_offsets[n + 1]
    }

    pub fn splits(&self, local: usize) -> &[Split] {
        let a = self.split_offsets[local] as usize;
        let b = self.split_offsets[local + 1] as usize;
        &self.splits[a..b]
    }

    pub fn black(&self) -> usize {
        0
    }

    pub fn white(&self) -> usize {
        1
    }

    pub fn has_swaps(&self) -> bool {
        self.swap.is_some()
    }

    pub fn swap_index(&self, local: usize) -> Option<usize> {
        self.swap.as_ref().map(|s| s[local] as usize)
    }

    /// Total number of stored `(pair, multiplicity)` runs.
    pub fn split_run_count(&self) -> usize {
        self.splits.len()
    }

    /// Approximate heap footprint in bytes.
    pub fn memory_bytes(&self) -> usize {
        self.trees.len() * (4 + 1 + 4 + 24)
            + self.splits.len() * std::mem::size_of::<Split>()
            + self.swap.as_ref().map_or(0, |s| s.len() * 4)
    }

    /// Debug dump: `id<TAB>degree<TAB>canonical-string`, one tree per line.
    pub fn dump(&self, registry: &TreeRegistry) -> String {
        let mut out = String::new();
        for (l, &t) in self.trees.iter().enumerate() {
            out.push_str(&format!("{l}\t{}\t{}\n", self.degree(l), registry.canonical_string(t)));
        }
        out
    }
}

/// The minimal set containing `{u_i : |i| ≤ N}` and closed under splitting.
pub fn closure_set(hall: &HallTrees, table: &BasisTable, registry: &mut TreeRegistry, max_degree: usize) -> TreeSet {
    freeze(hall, table, registry, max_degree, false)
}

/// Like [`closure_set`], additionally closed under colour swapping (needed by
/// the substitution `X ↦ −Y`, `Y ↦ −X`).
pub fn closure_set_with_swaps(
    hall: &HallTrees,
    table: &BasisTable,
    registry: &mut TreeRegistry,
    max_degree: usize,
) -> TreeSet {
    freeze(hall, table, registry, max_degree, true)
}

fn close_under_splits(seeds: &[TreeId], registry: &mut TreeRegistry) -> HashSet<TreeId> {
    let mut seen: HashSet<TreeId> = HashSet::new();
    let mut stack: Vec<TreeId> = Vec::new();
    for &s in seeds {
        if seen.insert(s) {
            stack.push(s);
        }
    }
    while let Some(u) = stack.pop() {
        let pairs = registry.splits_of(u).to_vec();
        for (a, b) in pairs {
            for t in [a, b] {
                if seen.insert(t) {
                    stack.push(t);
                }
            }
        }
    }
    seen
}

fn freeze(
    hall: &HallTrees,
    table: &BasisTable,
    registry: &mut TreeRegistry,
    max_degree: usize,
    with_swaps: bool,
) -> TreeSet {
    assert!(max_degree <= table.max_degree(), "closure bound exceeds basis table");
    let mut seeds: Vec<TreeId> = vec![registry.leaf(Color::Black), registry.leaf(Color::White)];
    seeds.extend((1..=table.len()).filter(|&i| table.get(i).degree <= max_degree).map(|i| hall.tree(i)));
    let closure = close_under_splits(&seeds, registry);
    let closure_len = closure.len();
    let mut members: Vec<TreeId> = closure.iter().copied().collect();
    if with_swaps {
        let swapped: Vec<TreeId> = members.iter().map(|&t| registry.swap_unchecked(t)).collect();
        let extra: Vec<TreeId> = swapped.into_iter().filter(|t| !closure.contains(t)).collect();
        let extra_closed = close_under_splits(&extra, registry);
        members.extend(extra_closed.into_iter().filter(|t| !closure.contains(t)));
    }
    members.sort_by_key(|&t| (registry.degree(t), t.0));
    members.dedup();
    let local: HashMap<TreeId, u32> = members.iter().enumerate().map(|(k, &t)| (t, k as u32)).collect();
    let degrees: Vec<u8> = members.iter().map(|&t| registry.degree(t) as u8).collect();
    let mut degree_offsets = vec![0usize; max_degree + 2];
    for (n, off) in degree_offsets.iter_mut().enumerate().skip(1) {
        *off = degrees.partition_point(|&d| (d as usize) < n);
    }
    let mut split_offsets = Vec::with_capacity(members.len() + 1);
    let mut splits = Vec::new();
    split_offsets.push(0u32);
    let mut pairs: Vec<(u32, u32)> = Vec::new();
    for &t in &members {
        pairs.clear();
        pairs.extend(registry.splits_of(t).iter().map(|(a, b)| (local[a], local[b])));
        pairs.sort_unstable();
        let mut k = 0;
        while k < pairs.len() {
            let mut m = 1;
            while k + m < pairs.len() && pairs[k + m] == pairs[k] {
                m += 1;
            }
            splits.push(Split { root: pairs[k].0, cut: pairs[k].1, mult: m as u32 });
            k += m;
        }
        split_offsets.push(splits.len() as u32);
    }
    let swap = with_swaps.then(|| {
        members
            .iter()
            .map(|&t| local[&registry.swap_unchecked(t)])
            .collect::<Vec<u32>>()
    });
    TreeSet {
        tag: NEXT_SET_ID.fetch_add(1, Ordering::Relaxed),
        max_degree,
        trees: members,
        degrees,
        degree_offsets,
        split_offsets,
        splits,
        local,
        swap,
        closure_len,
    }
}
