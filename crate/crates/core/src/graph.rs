// SPDX-License-Identifier: Apache-2.0

//! Dense simple graphs with bit-packed adjacency rows, exact densities,
//! homogeneity verdicts, blowups and equipartitions.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_rational::Ratio;
use rand::Rng;

use crate::error::{bail, Error, Result};
use crate::rng;

/// Exact rational used for densities, weights and thresholds.
pub type Rational = Ratio<i128>;

pub(crate) fn ratio(num: u128, den: u128) -> Rational {
    Rational::new(num as i128, den as i128)
}

const WORD: usize = 64;

#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

/// Iterates the set bits of a word slice in increasing order.
pub(crate) fn bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        core::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * WORD + b)
            }
        })
    })
}

/// An undirected simple graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        let words = words_for(n);
        Graph {
            n,
            words,
            adj: vec![0; n * words],
        }
    }

    pub fn empty(n: usize) -> Self {
        Self::new(n)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    /// The cycle `0-1-...-(n-1)-0`. Requires `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let mut g = Self::path(n);
        g.add_edge(0, n - 1);
        g
    }

    /// The path `0-1-...-(n-1)`.
    pub fn path(n: usize) -> Self {
        let mut g = Self::new(n);
        for u in 1..n {
            g.add_edge(u - 1, u);
        }
        g
    }

    /// `K_{a,b}` with sides `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut g = Self::new(a + b);
        for u in 0..a {
            for v in a..a + b {
                g.add_edge(u, v);
            }
        }
        g
    }

    /// Builds a graph from an edge list, rejecting loops and out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::new(n);
        for (u, v) in edges {
            if u >= n || v >= n {
                bail!(Parameter, "edge ({u},{v}) out of range for n = {n}");
            }
            if u == v {
                bail!(Parameter, "loop at vertex {u}");
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    /// Disjoint union, with `other` shifted after `self`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let mut g = Graph::new(self.n + other.n);
        for (u, v) in self.edges() {
            g.add_edge(u, v);
        }
        for (u, v) in other.edges() {
            g.add_edge(u + self.n, v + self.n);
        }
        g
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        (self.adj[u * self.words + v / WORD] >> (v % WORD)) & 1 == 1
    }

    /// Inserts the edge `{u,v}`. Panics on loops.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.set_edge(u, v, true);
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.set_edge(u, v, false);
    }

    pub fn set_edge(&mut self, u: usize, v: usize, present: bool) {
        assert!(u != v, "loops are not allowed");
        assert!(u < self.n && v < self.n, "vertex out of range");
        let (wu, bu) = (u * self.words + v / WORD, 1u64 << (v % WORD));
        let (wv, bv) = (v * self.words + u / WORD, 1u64 << (u % WORD));
        if present {
            self.adj[wu] |= bu;
            self.adj[wv] |= bv;
        } else {
            self.adj[wu] &= !bu;
            self.adj[wv] &= !bv;
        }
    }

    pub fn toggle_edge(&mut self, u: usize, v: usize) {
        let present = self.has_edge(u, v);
        self.set_edge(u, v, !present);
    }

    /// Bit-packed neighbourhood of `u`.
    #[inline]
    pub fn row(&self, u: usize) -> &[u64] {
        &self.adj[u * self.words..(u + 1) * self.words]
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        bits(self.row(u))
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|u| self.degree(u)).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adj
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    /// Edges `(u,v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.neighbors(u)
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Number of neighbours of `u` inside the bit mask `mask`.
    #[inline]
    pub(crate) fn degree_into(&self, u: usize, mask: &[u64]) -> usize {
        self.row(u)
            .iter()
            .zip(mask)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// The complement on the same vertex set.
    pub fn complement(&self) -> Graph {
        let mut g = Graph::new(self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    /// The subgraph induced by `x`, reindexed in increasing order of members.
    pub fn induced_subgraph(&self, x: &VertexSet) -> Result<Graph> {
        if x.is_empty() {
            bail!(DegenerateSet, "induced subgraph of an empty set");
        }
        x.check_within(self.n)?;
        Ok(self.induced_on(x.members()))
    }

    /// Induced subgraph on an arbitrary ordered list of distinct vertices;
    /// vertex `i` of the result is `vs[i]`.
    pub fn induced_on(&self, vs: &[usize]) -> Graph {
        let mut g = Graph::new(vs.len());
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                if self.has_edge(vs[i], vs[j]) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// Relabels so that vertex `v` of `self` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        let mut g = Graph::new(self.n);
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]);
        }
        g
    }

    pub fn is_clique(&self, vs: &[usize]) -> bool {
        vs.iter()
            .enumerate()
            .all(|(i, &u)| vs[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }

    pub fn is_independent(&self, vs: &[usize]) -> bool {
        vs.iter()
            .enumerate()
            .all(|(i, &u)| vs[i + 1..].iter().all(|&v| !self.has_edge(u, v)))
    }

    /// Upper-triangle adjacency bits in column order `(0,1),(0,2),(1,2),(0,3),...`,
    /// the order used by the graph6 encoding.
    pub fn upper_triangle_bits(&self) -> impl Iterator<Item = bool> + '_ {
        (1..self.n).flat_map(move |j| (0..j).map(move |i| self.has_edge(i, j)))
    }

    /// Edge count inside `x`.
    pub fn edges_within(&self, x: &VertexSet) -> usize {
        let mask = x.mask(self.n);
        x.members()
            .iter()
            .map(|&u| self.degree_into(u, &mask))
            .sum::<usize>()
            / 2
    }

    /// Edge count between `x` and `y` (assumed disjoint).
    pub fn edges_between(&self, x: &VertexSet, y: &VertexSet) -> usize {
        let mask = y.mask(self.n);
        x.members()
            .iter()
            .map(|&u| self.degree_into(u, &mask))
            .sum()
    }
}

/// A sorted, duplicate-free set of vertex indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new<I: IntoIterator<Item = usize>>(members: I) -> Self {
        let mut v: Vec<usize> = members.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }

    pub fn range(start: usize, end: usize) -> Self {
        VertexSet((start..end).collect())
    }

    pub fn all(n: usize) -> Self {
        Self::range(0, n)
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                core::cmp::Ordering::Less => i += 1,
                core::cmp::Ordering::Greater => j += 1,
                core::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.iter().all(|&v| other.contains(v))
    }

    pub fn check_within(&self, n: usize) -> Result<()> {
        match self.0.last() {
            Some(&v) if v >= n => bail!(Parameter, "vertex {v} out of range for n = {n}"),
            _ => Ok(()),
        }
    }

    pub(crate) fn mask(&self, n: usize) -> Vec<u64> {
        let mut m = vec![0u64; words_for(n)];
        for &v in &self.0 {
            m[v / WORD] |= 1 << (v % WORD);
        }
        m
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::new(iter)
    }
}

/// `d(X) = e(X) / C(|X|,2)`, exactly.
pub fn density_within(g: &Graph, x: &VertexSet) -> Result<Rational> {
    if x.len() < 2 {
        bail!(
            DegenerateSet,
            "density needs at least two vertices, got {}",
            x.len()
        );
    }
    x.check_within(g.n())?;
    let k = x.len() as u128;
    Ok(ratio(g.edges_within(x) as u128, k * (k - 1) / 2))
}

/// `d(X,Y) = e(X,Y) / (|X||Y|)`, exactly. `X` and `Y` must be disjoint and non-empty.
pub fn density_between(g: &Graph, x: &VertexSet, y: &VertexSet) -> Result<Rational> {
    check_pair(g, x, y)?;
    Ok(ratio(
        g.edges_between(x, y) as u128,
        x.len() as u128 * y.len() as u128,
    ))
}

fn check_pair(g: &Graph, x: &VertexSet, y: &VertexSet) -> Result<()> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::InvalidPair("empty side".into()));
    }
    if !x.is_disjoint(y) {
        return Err(Error::InvalidPair("sides overlap".into()));
    }
    x.check_within(g.n())?;
    y.check_within(g.n())
}

/// Density, dominant value and δ-homogeneity of a pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneityVerdict {
    pub density: Rational,
    pub dominant_value: u8,
    pub is_delta_homogeneous: bool,
}

impl HomogeneityVerdict {
    pub fn from_density(density: Rational, delta: Rational) -> Self {
        let one = Rational::from_integer(1);
        HomogeneityVerdict {
            dominant_value: dominant_value(density),
            is_delta_homogeneous: density >= one - delta || density <= delta,
            density,
        }
    }
}

/// 1 iff `density >= 1/2`.
pub fn dominant_value(density: Rational) -> u8 {
    u8::from(density >= Rational::new(1, 2))
}

pub(crate) fn check_delta(delta: Rational) -> Result<()> {
    if delta <= Rational::from_integer(0) || delta >= Rational::new(1, 2) {
        bail!(Parameter, "delta must lie in (0, 1/2), got {delta}");
    }
    Ok(())
}

pub fn homogeneity(
    g: &Graph,
    x: &VertexSet,
    y: &VertexSet,
    delta: Rational,
) -> Result<HomogeneityVerdict> {
    check_delta(delta)?;
    let d = density_between(g, x, y)?;
    Ok(HomogeneityVerdict::from_density(d, delta))
}

/// How the parts of a blowup are filled in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartKind {
    /// Every part is an independent set.
    Plain,
    /// Part `i` is a clique iff `g[i]`.
    Pattern(Vec<bool>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupSpec {
    pub base: Graph,
    pub kind: PartKind,
    pub sizes: Vec<usize>,
}

impl BlowupSpec {
    pub fn plain(base: Graph, s: usize) -> Self {
        let sizes = vec![s; base.n()];
        BlowupSpec {
            base,
            kind: PartKind::Plain,
            sizes,
        }
    }

    pub fn pattern(base: Graph, g: Vec<bool>, s: usize) -> Self {
        let sizes = vec![s; base.n()];
        BlowupSpec {
            base,
            kind: PartKind::Pattern(g),
            sizes,
        }
    }

    /// Part `i` occupies `offsets[i]..offsets[i+1]`.
    pub fn offsets(&self) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.sizes.len() + 1);
        off.push(0);
        for &s in &self.sizes {
            off.push(off.last().unwrap() + s);
        }
        off
    }
}

/// Expands a blowup: parts are contiguous index ranges ordered by base vertex.
pub fn blowup(spec: &BlowupSpec) -> Result<Graph> {
    let p = spec.base.n();
    if spec.sizes.len() != p {
        bail!(
            Parameter,
            "{} part sizes for a base on {p} vertices",
            spec.sizes.len()
        );
    }
    if let Some(i) = spec.sizes.iter().position(|&s| s == 0) {
        bail!(Parameter, "part {i} has size zero");
    }
    if let PartKind::Pattern(g) = &spec.kind {
        if g.len() != p {
            bail!(
                Parameter,
                "g-map has {} entries for {p} base vertices",
                g.len()
            );
        }
    }
    let off = spec.offsets();
    let mut out = Graph::new(off[p]);
    for (i, j) in spec.base.edges() {
        for u in off[i]..off[i + 1] {
            for v in off[j]..off[j + 1] {
                out.add_edge(u, v);
            }
        }
    }
    if let PartKind::Pattern(g) = &spec.kind {
        for i in (0..p).filter(|&i| g[i]) {
            for u in off[i]..off[i + 1] {
                for v in u + 1..off[i + 1] {
                    out.add_edge(u, v);
                }
            }
        }
    }
    Ok(out)
}

/// A partition of `0..n` into parts whose sizes differ by at most one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equipartition {
    parts: Vec<VertexSet>,
}

impl Equipartition {
    /// Validates disjointness, coverage of `0..n` and the size balance.
    pub fn new(parts: Vec<VertexSet>, n: usize) -> Result<Self> {
        if parts.is_empty() {
            bail!(Parameter, "equipartition without parts");
        }
        let mut seen = vec![false; n];
        for p in &parts {
            p.check_within(n)?;
            for &v in p.members() {
                if seen[v] {
                    bail!(Parameter, "vertex {v} lies in two parts");
                }
                seen[v] = true;
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            bail!(Parameter, "vertex {v} is not covered");
        }
        let max = parts.iter().map(VertexSet::len).max().unwrap();
        let min = parts.iter().map(VertexSet::len).min().unwrap();
        if max - min > 1 {
            bail!(Parameter, "part sizes range from {min} to {max}");
        }
        Ok(Equipartition { parts })
    }

    /// Parts `0..q` over consecutive index ranges, larger parts first.
    pub fn contiguous(n: usize, q: usize) -> Result<Self> {
        check_parts(n, q)?;
        Ok(Equipartition {
            parts: chunk(&(0..n).collect::<Vec<_>>(), q),
        })
    }

    pub fn parts(&self) -> &[VertexSet] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

fn check_parts(n: usize, q: usize) -> Result<()> {
    if q == 0 || q > n {
        bail!(Parameter, "part count {q} outside 1..={n}");
    }
    Ok(())
}

fn chunk(order: &[usize], q: usize) -> Vec<VertexSet> {
    let n = order.len();
    let (base, extra) = (n / q, n % q);
    let mut parts = Vec::with_capacity(q);
    let mut at = 0;
    for i in 0..q {
        let len = base + usize::from(i < extra);
        parts.push(VertexSet::new(order[at..at + len].iter().copied()));
        at += len;
    }
    parts
}

/// A seeded random equipartition of `0..n` into `q` parts; the first
/// `n mod q` parts receive the extra vertex.
pub fn equipartition(n: usize, q: usize, seed: u64) -> Result<Equipartition> {
    check_parts(n, q)?;
    let mut r = rng::seeded(seed);
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = r.random_range(0..=i);
        order.swap(i, j);
    }
    Ok(Equipartition {
        parts: chunk(&order, q),
    })
}
