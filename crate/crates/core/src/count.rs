// SPDX-License-Identifier: Apache-2.0

//! Exhaustive embedding search: copy counting, induced-copy search, induced
//! bipartite copies, greedy pair-disjoint packings, Claim-10 style tuple
//! collections and layered cycle enumeration.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use num_bigint::BigUint;

use crate::construct::LayeredCliqueGraph;
use crate::error::{bail, Error, Result};
use crate::graph::{bits, words_for, Graph, VertexSet};
use crate::limits::Limits;
use crate::recognize::{BipartitePattern, GraphFamily, MatchMode};

/// Whether a copy must be induced or only edge-preserving.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CopyMode {
    Induced,
    Subgraph,
}

impl From<MatchMode> for CopyMode {
    fn from(m: MatchMode) -> Self {
        match m {
            MatchMode::Induced => CopyMode::Induced,
            MatchMode::Subgraph => CopyMode::Subgraph,
        }
    }
}

/// One embedding of a pattern: `vertices[i]` hosts pattern vertex `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CopyRecord {
    /// Index of the pattern inside its family (0 for single patterns).
    pub member: usize,
    pub vertices: Vec<usize>,
    pub induced: bool,
}

impl CopyRecord {
    /// Checks injectivity and the adjacency constraints of `mode`.
    pub fn is_valid(&self, host: &Graph, pattern: &Graph) -> bool {
        let vs = &self.vertices;
        if vs.len() != pattern.n() || vs.iter().any(|&v| v >= host.n()) {
            return false;
        }
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                if vs[i] == vs[j] {
                    return false;
                }
                let (p, h) = (pattern.has_edge(i, j), host.has_edge(vs[i], vs[j]));
                if (self.induced && p != h) || (p && !h) {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Disjointness {
    /// Any two copies share at most one vertex.
    PairDisjoint,
    /// No host edge is used by two copies.
    EdgeDisjoint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Packing {
    pub copies: Vec<CopyRecord>,
    pub disjointness: Disjointness,
}

impl Packing {
    pub fn len(&self) -> usize {
        self.copies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.copies.is_empty()
    }

    /// Index of the first copy that collides with an earlier one, if any.
    pub fn first_collision(&self, host: &Graph, patterns: &[Graph]) -> Option<usize> {
        let mut used = Graph::new(host.n());
        for (idx, c) in self.copies.iter().enumerate() {
            let vs = &c.vertices;
            if vs.iter().any(|&v| v >= host.n()) {
                return Some(idx);
            }
            let pairs: Vec<(usize, usize)> = match self.disjointness {
                Disjointness::PairDisjoint => (0..vs.len())
                    .flat_map(|i| (i + 1..vs.len()).map(move |j| (i, j)))
                    .collect(),
                Disjointness::EdgeDisjoint => match patterns.get(c.member) {
                    Some(p) => p.edges().collect(),
                    None => return Some(idx),
                },
            };
            for &(i, j) in &pairs {
                let (a, b) = (vs[i], vs[j]);
                if a == b || used.has_edge(a, b) {
                    return Some(idx);
                }
            }
            for &(i, j) in &pairs {
                used.add_edge(vs[i], vs[j]);
            }
        }
        None
    }

    /// Disjointness plus per-copy validity; returns the index of the first
    /// failing copy.
    pub fn verify(&self, host: &Graph, patterns: &[Graph]) -> core::result::Result<(), usize> {
        for (i, c) in self.copies.iter().enumerate() {
            match patterns.get(c.member) {
                Some(p) if c.is_valid(host, p) => {}
                _ => return Err(i),
            }
        }
        match self.first_collision(host, patterns) {
            Some(i) => Err(i),
            None => Ok(()),
        }
    }
}

/// What the embedding callback wants next.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Step {
    Continue,
    /// Mark every vertex pair of this embedding as used, then continue.
    Claim,
    Stop,
}

/// Adjacency constraints of a pattern on `0..order`: pairs in `must` must map
/// to host edges, pairs in `must_not` to host non-edges, other pairs are free.
pub(crate) struct Constraints {
    pub must: Graph,
    pub must_not: Graph,
}

impl Constraints {
    pub fn for_pattern(pattern: &Graph, mode: CopyMode) -> Self {
        Constraints {
            must: pattern.clone(),
            must_not: match mode {
                CopyMode::Induced => pattern.complement(),
                CopyMode::Subgraph => Graph::new(pattern.n()),
            },
        }
    }

    pub fn bipartite(h: &BipartitePattern) -> Self {
        let order = h.s_size + h.t_size;
        let mut must = Graph::new(order);
        let mut must_not = Graph::new(order);
        for i in 0..h.s_size {
            for j in 0..h.t_size {
                if h.has_cross_edge(i, j) {
                    must.add_edge(i, h.s_size + j);
                } else {
                    must_not.add_edge(i, h.s_size + j);
                }
            }
        }
        Constraints { must, must_not }
    }

    fn order(&self) -> usize {
        self.must.n()
    }
}

/// Lexicographic backtracking over injections into `host`, restricted to the
/// vertices in `allowed` and, when `used` is supplied, to vertex pairs not yet
/// claimed.
pub(crate) struct Embedder<'a> {
    host: &'a Graph,
    cons: &'a Constraints,
    allowed: Vec<u64>,
    nodes: u64,
    node_limit: u64,
}

impl<'a> Embedder<'a> {
    pub fn new(host: &'a Graph, cons: &'a Constraints, limits: &Limits) -> Self {
        let words = words_for(host.n());
        let mut allowed = vec![u64::MAX; words];
        if !host.n().is_multiple_of(64) {
            if let Some(last) = allowed.last_mut() {
                *last = (1u64 << (host.n() % 64)) - 1;
            }
        }
        Embedder {
            host,
            cons,
            allowed,
            nodes: 0,
            node_limit: limits.backtrack_nodes,
        }
    }

    pub fn restrict(mut self, x: &VertexSet) -> Self {
        self.allowed = x.mask(self.host.n());
        self
    }

    pub fn run<F>(&mut self, mut used: Option<&mut Graph>, mut visit: F) -> Result<bool>
    where
        F: FnMut(&[usize]) -> Step,
    {
        let k = self.cons.order();
        if k > self.host.n() {
            return Ok(false);
        }
        let mut phi = Vec::with_capacity(k);
        let stopped = self.extend(&mut phi, &mut used, &mut visit)?;
        Ok(stopped.is_break())
    }

    fn extend<F>(
        &mut self,
        phi: &mut Vec<usize>,
        used: &mut Option<&mut Graph>,
        visit: &mut F,
    ) -> Result<ControlFlow<()>>
    where
        F: FnMut(&[usize]) -> Step,
    {
        let depth = phi.len();
        if depth == self.cons.order() {
            return Ok(match visit(phi) {
                Step::Continue => ControlFlow::Continue(()),
                Step::Stop => ControlFlow::Break(()),
                Step::Claim => {
                    if let Some(u) = used.as_deref_mut() {
                        for i in 0..phi.len() {
                            for j in i + 1..phi.len() {
                                u.add_edge(phi[i], phi[j]);
                            }
                        }
                    }
                    ControlFlow::Continue(())
                }
            });
        }
        self.nodes += 1;
        if self.nodes > self.node_limit {
            return Err(Error::Scale(format!(
                "backtracking exceeded {} nodes",
                self.node_limit
            )));
        }
        let mut cand = self.allowed.clone();
        for (j, &v) in phi.iter().enumerate() {
            cand[v / 64] &= !(1u64 << (v % 64));
            let row = self.host.row(v);
            if self.cons.must.has_edge(j, depth) {
                cand.iter_mut().zip(row).for_each(|(c, r)| *c &= r);
            } else if self.cons.must_not.has_edge(j, depth) {
                cand.iter_mut().zip(row).for_each(|(c, r)| *c &= !r);
            }
            if let Some(u) = used.as_deref() {
                cand.iter_mut().zip(u.row(v)).for_each(|(c, r)| *c &= !r);
            }
        }
        let cands: Vec<usize> = bits(&cand).collect();
        for w in cands {
            // claims made deeper in this subtree can invalidate later siblings
            if let Some(u) = used.as_deref() {
                if phi.iter().any(|&v| u.has_edge(v, w)) {
                    continue;
                }
            }
            phi.push(w);
            let flow = self.extend(phi, used, visit)?;
            phi.pop();
            if flow.is_break() {
                return Ok(flow);
            }
            // a claim below covers every pair of the current prefix
            if let (Some(u), true) = (used.as_deref(), depth >= 2) {
                if u.has_edge(phi[depth - 2], phi[depth - 1]) {
                    break;
                }
            }
        }
        Ok(ControlFlow::Continue(()))
    }
}

/// Number of automorphisms of `h`, by exhaustive permutation search.
pub fn automorphism_count(h: &Graph) -> u64 {
    let cons = Constraints::for_pattern(h, CopyMode::Induced);
    let mut count = 0u64;
    let limits = Limits::default();
    Embedder::new(h, &cons, &limits)
        .run(None, |_| {
            count += 1;
            Step::Continue
        })
        .expect("automorphism search on a small pattern");
    count
}

/// Labeled embeddings of `h` into `g`, without the automorphism quotient.
pub fn count_embeddings(g: &Graph, h: &Graph, mode: CopyMode, limits: &Limits) -> Result<u128> {
    let cons = Constraints::for_pattern(h, mode);
    let mut count = 0u128;
    Embedder::new(g, &cons, limits).run(None, |_| {
        count += 1;
        Step::Continue
    })?;
    Ok(count)
}

/// Unlabeled copies of `h` in `g`: labeled embeddings divided by `|Aut(h)|`.
pub fn count_copies(g: &Graph, h: &Graph, mode: CopyMode, limits: &Limits) -> Result<BigUint> {
    if h.n() > limits.pattern_vertices {
        bail!(
            Scale,
            "pattern has {} vertices, cap is {}",
            h.n(),
            limits.pattern_vertices
        );
    }
    let labeled = count_embeddings(g, h, mode, limits)?;
    let aut = automorphism_count(h) as u128;
    debug_assert_eq!(labeled % aut, 0);
    Ok(BigUint::from(labeled / aut))
}

/// First copy of a family member (members tried in order), optionally inside
/// `G[X]`. Each member is matched induced or as a plain subgraph according to
/// its family entry.
pub fn find_induced_copy(
    g: &Graph,
    family: &GraphFamily,
    x: Option<&VertexSet>,
    limits: &Limits,
) -> Result<Option<CopyRecord>> {
    if let Some(x) = x {
        x.check_within(g.n())?;
    }
    for (idx, member) in family.entries().iter().enumerate() {
        let mode = CopyMode::from(member.mode);
        let cons = Constraints::for_pattern(&member.graph, mode);
        let mut emb = Embedder::new(g, &cons, limits);
        if let Some(x) = x {
            emb = emb.restrict(x);
        }
        let mut found = None;
        emb.run(None, |phi| {
            found = Some(phi.to_vec());
            Step::Stop
        })?;
        if let Some(vertices) = found {
            return Ok(Some(CopyRecord {
                member: idx,
                vertices,
                induced: mode == CopyMode::Induced,
            }));
        }
    }
    Ok(None)
}

/// Labeled injections `φ` with `φ(s)φ(t)` an edge iff `st` is a cross edge of
/// `h`; edges inside `φ(S)` and `φ(T)` are unconstrained.
pub fn count_induced_bipartite_copies(
    g: &Graph,
    h: &BipartitePattern,
    limits: &Limits,
) -> Result<BigUint> {
    if h.s_size + h.t_size > limits.pattern_vertices {
        bail!(
            Scale,
            "bipartite pattern has {} vertices, cap is {}",
            h.s_size + h.t_size,
            limits.pattern_vertices
        );
    }
    let cons = Constraints::bipartite(h);
    let mut count = 0u128;
    Embedder::new(g, &cons, limits).run(None, |_| {
        count += 1;
        Step::Continue
    })?;
    Ok(BigUint::from(count))
}

/// Induced bipartite copies with `S` placed inside `a` and `T` inside `b`.
/// Edges inside `a` or inside `b` never affect the result.
pub fn count_induced_bipartite_copies_across(
    g: &Graph,
    h: &BipartitePattern,
    a: &VertexSet,
    b: &VertexSet,
    limits: &Limits,
) -> Result<BigUint> {
    a.check_within(g.n())?;
    b.check_within(g.n())?;
    if h.s_size + h.t_size > limits.pattern_vertices {
        bail!(
            Scale,
            "bipartite pattern has {} vertices, cap is {}",
            h.s_size + h.t_size,
            limits.pattern_vertices
        );
    }
    let cons = Constraints::bipartite(h);
    let mut count = 0u128;
    Embedder::new(g, &cons, limits).run(None, |phi| {
        let (s, t) = phi.split_at(h.s_size);
        if s.iter().all(|&v| a.contains(v)) && t.iter().all(|&v| b.contains(v)) {
            count += 1;
        }
        Step::Continue
    })?;
    Ok(BigUint::from(count))
}

/// Whether some induced bipartite copy of `h` lies inside `G[X]`.
pub fn has_induced_bipartite_copy(
    g: &Graph,
    h: &BipartitePattern,
    x: &VertexSet,
    limits: &Limits,
) -> Result<bool> {
    let cons = Constraints::bipartite(h);
    Embedder::new(g, &cons, limits)
        .restrict(x)
        .run(None, |_| Step::Stop)
}

/// Greedy pair-disjoint packing: walks embeddings in lexicographic order and
/// keeps each one whose vertex pairs are all still unclaimed.
pub fn greedy_pair_disjoint_packing(
    g: &Graph,
    h: &Graph,
    mode: CopyMode,
    limits: &Limits,
) -> Result<Packing> {
    if h.n() > limits.pattern_vertices {
        bail!(
            Scale,
            "pattern has {} vertices, cap is {}",
            h.n(),
            limits.pattern_vertices
        );
    }
    let mut used = Graph::new(g.n());
    let copies = pack_into(g, h, mode, 0, &mut used, limits)?;
    Ok(Packing {
        copies,
        disjointness: Disjointness::PairDisjoint,
    })
}

/// Greedy packing of one pattern against an existing claimed-pair table.
pub(crate) fn pack_into(
    g: &Graph,
    h: &Graph,
    mode: CopyMode,
    member: usize,
    used: &mut Graph,
    limits: &Limits,
) -> Result<Vec<CopyRecord>> {
    let cons = Constraints::for_pattern(h, mode);
    let mut copies = Vec::new();
    if h.n() < 2 {
        // a single vertex shares no pair with anything
        if h.n() == 1 {
            copies.extend((0..g.n()).map(|v| CopyRecord {
                member,
                vertices: vec![v],
                induced: mode == CopyMode::Induced,
            }));
        }
        return Ok(copies);
    }
    Embedder::new(g, &cons, limits).run(Some(used), |phi| {
        copies.push(CopyRecord {
            member,
            vertices: phi.to_vec(),
            induced: mode == CopyMode::Induced,
        });
        Step::Claim
    })?;
    Ok(copies)
}

/// Greedy collection of `h`-tuples over `1..=m`, any two agreeing in at most
/// one coordinate, built in lexicographic order.
pub fn tuple_collection(m: usize, h: usize) -> Vec<Vec<usize>> {
    if m == 0 || h == 0 {
        return Vec::new();
    }
    if h == 1 {
        return (1..=m).map(|v| vec![v]).collect();
    }
    let mut search = TupleSearch {
        m,
        h,
        words: m.div_ceil(64),
        used: vec![0; h * h * m * m.div_ceil(64)],
        t: Vec::with_capacity(h),
        out: Vec::new(),
    };
    search.extend();
    search.out
}

/// Claimed pairs are stored per coordinate pair: for coordinates `a < b` and
/// value `x` at `a`, a bitset over the values at `b` (zero based).
struct TupleSearch {
    m: usize,
    h: usize,
    words: usize,
    used: Vec<u64>,
    t: Vec<usize>,
    out: Vec<Vec<usize>>,
}

impl TupleSearch {
    fn slot(&self, a: usize, b: usize, x: usize) -> usize {
        ((a * self.h + b) * self.m + x) * self.words
    }

    fn claimed(&self, a: usize, b: usize, x: usize, y: usize) -> bool {
        self.used[self.slot(a, b, x) + y / 64] >> (y % 64) & 1 == 1
    }

    /// Values at the next coordinate in word `w` that share no claimed pair
    /// with the prefix.
    fn free_word(&self, w: usize) -> u64 {
        let i = self.t.len();
        let mut word = if w + 1 == self.words && !self.m.is_multiple_of(64) {
            (1u64 << (self.m % 64)) - 1
        } else {
            u64::MAX
        };
        for (c, &x) in self.t.iter().enumerate() {
            word &= !self.used[self.slot(c, i, x - 1) + w];
        }
        word
    }

    fn extend(&mut self) {
        let i = self.t.len();
        if i == self.h {
            for a in 0..self.h {
                for b in a + 1..self.h {
                    let (x, y) = (self.t[a] - 1, self.t[b] - 1);
                    let s = self.slot(a, b, x);
                    self.used[s + y / 64] |= 1 << (y % 64);
                }
            }
            self.out.push(self.t.clone());
            return;
        }
        for w in 0..self.words {
            let mut word = self.free_word(w);
            while word != 0 {
                let bit = word.trailing_zeros() as usize;
                self.t.push(w * 64 + bit + 1);
                self.extend();
                self.t.pop();
                // a tuple completed below claims every pair of this prefix
                if i >= 2 && self.claimed(i - 2, i - 1, self.t[i - 2] - 1, self.t[i - 1] - 1) {
                    return;
                }
                let done = if bit == 63 {
                    u64::MAX
                } else {
                    (2u64 << bit) - 1
                };
                word = self.free_word(w) & !done;
            }
        }
    }
}

/// Number of coordinates in which two tuples agree.
pub fn agreement(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x == y).count()
}

fn check_layer_indices(r: &LayeredCliqueGraph, indices: &[usize]) -> Result<()> {
    let t = indices.len();
    if t < 3 || t > r.h {
        bail!(Parameter, "need 3 <= t <= h = {}, got t = {t}", r.h);
    }
    if indices[0] < 1 || indices[t - 1] > r.h || indices.windows(2).any(|w| w[0] >= w[1]) {
        bail!(
            Parameter,
            "indices must increase strictly within 1..={}",
            r.h
        );
    }
    Ok(())
}

/// Visits every cycle `v_{i1} v_{i2} ... v_{it} v_{i1}` with `v_{ij}` in layer
/// `i_j` (layers are 1-based). The callback gets the graph vertex ids.
pub fn for_each_layered_cycle<F>(
    r: &LayeredCliqueGraph,
    indices: &[usize],
    mut visit: F,
) -> Result<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    check_layer_indices(r, indices)?;
    let masks: Vec<Vec<u64>> = indices
        .iter()
        .map(|&i| r.layer(i).mask(r.graph.n()))
        .collect();
    let mut path = Vec::with_capacity(indices.len());
    for &start in r.layer(indices[0]).members() {
        path.push(start);
        let flow = cycle_walk(&r.graph, &masks, &mut path, &mut visit);
        path.pop();
        if flow.is_break() {
            break;
        }
    }
    Ok(())
}

fn cycle_walk<F>(
    g: &Graph,
    masks: &[Vec<u64>],
    path: &mut Vec<usize>,
    visit: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    let d = path.len();
    let last = *path.last().unwrap();
    if d == masks.len() {
        if g.has_edge(last, path[0]) {
            return visit(path);
        }
        return ControlFlow::Continue(());
    }
    let words: Vec<u64> = g
        .row(last)
        .iter()
        .zip(&masks[d])
        .map(|(a, b)| a & b)
        .collect();
    let next: Vec<usize> = bits(&words).collect();
    for w in next {
        path.push(w);
        let flow = cycle_walk(g, masks, path, visit);
        path.pop();
        flow?;
    }
    ControlFlow::Continue(())
}

/// Counts layered cycles over the given increasing layer indices.
pub fn count_layered_cycles(r: &LayeredCliqueGraph, indices: &[usize]) -> Result<BigUint> {
    let mut count = 0u128;
    for_each_layered_cycle(r, indices, |_| {
        count += 1;
        ControlFlow::Continue(())
    })?;
    Ok(BigUint::from(count))
}
