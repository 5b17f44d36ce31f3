// SPDX-License-Identifier: Apache-2.0

//! Homomorphism search, cores, the homomorphism order on the cores of a
//! family, and canonical forms.

use alloc::vec;
use alloc::vec::Vec;

use crate::count::{Constraints, CopyMode, Embedder, Step};
use crate::error::{bail, Error, Result};
use crate::graph::{bits, Graph, VertexSet};
use crate::limits::Limits;
use crate::recognize::GraphFamily;

/// A vertex map `source -> target`; `assignment[v]` is the image of `v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomMap {
    pub assignment: Vec<usize>,
}

impl HomMap {
    pub fn is_valid(&self, source: &Graph, target: &Graph) -> bool {
        self.assignment.len() == source.n()
            && self.assignment.iter().all(|&c| c < target.n())
            && source
                .edges()
                .all(|(u, v)| target.has_edge(self.assignment[u], self.assignment[v]))
    }

    pub fn image(&self, v: usize) -> usize {
        self.assignment[v]
    }
}

/// Some homomorphism `source -> target`, or `None` once the search space is
/// exhausted.
pub fn find_homomorphism(
    source: &Graph,
    target: &Graph,
    limits: &Limits,
) -> Result<Option<HomMap>> {
    if source.n() > limits.hom_source || target.n() > limits.hom_target {
        bail!(
            Scale,
            "homomorphism search is capped at {} -> {} vertices, got {} -> {}",
            limits.hom_source,
            limits.hom_target,
            source.n(),
            target.n()
        );
    }
    hom_search(source, target, limits)
}

// Backtracking with forward checking on bitmask domains; the next vertex is
// the unassigned one with the fewest remaining images, lowest index first.
fn hom_search(source: &Graph, target: &Graph, limits: &Limits) -> Result<Option<HomMap>> {
    let (n, t) = (source.n(), target.n());
    if t > 64 {
        bail!(Scale, "homomorphism targets are limited to 64 vertices");
    }
    if n == 0 {
        return Ok(Some(HomMap { assignment: vec![] }));
    }
    if t == 0 {
        return Ok(None);
    }
    let full = if t == 64 { u64::MAX } else { (1u64 << t) - 1 };
    let tmask: Vec<u64> = (0..t).map(|c| target.row(c)[0]).collect();
    let mut state = HomState {
        source,
        tmask,
        dom: vec![full; n],
        assign: vec![usize::MAX; n],
        nodes: 0,
        limit: limits.backtrack_nodes,
    };
    if state.descend()? {
        Ok(Some(HomMap {
            assignment: state.assign,
        }))
    } else {
        Ok(None)
    }
}

struct HomState<'a> {
    source: &'a Graph,
    tmask: Vec<u64>,
    dom: Vec<u64>,
    assign: Vec<usize>,
    nodes: u64,
    limit: u64,
}

impl HomState<'_> {
    fn descend(&mut self) -> Result<bool> {
        let next = (0..self.assign.len())
            .filter(|&v| self.assign[v] == usize::MAX)
            .min_by_key(|&v| (self.dom[v].count_ones(), v));
        let Some(v) = next else {
            return Ok(true);
        };
        let mut options = self.dom[v];
        while options != 0 {
            let c = options.trailing_zeros() as usize;
            options &= options - 1;
            self.nodes += 1;
            if self.nodes > self.limit {
                bail!(Scale, "homomorphism search exceeded {} nodes", self.limit);
            }
            let saved = self.dom.clone();
            self.assign[v] = c;
            self.dom[v] = 1 << c;
            let mut ok = true;
            for w in self.source.neighbors(v) {
                if self.assign[w] == usize::MAX {
                    self.dom[w] &= self.tmask[c];
                    if self.dom[w] == 0 {
                        ok = false;
                        break;
                    }
                }
            }
            if ok && self.descend()? {
                return Ok(true);
            }
            self.assign[v] = usize::MAX;
            self.dom = saved;
        }
        Ok(false)
    }
}

/// The core of a graph together with where it sits and how the host folds
/// onto it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreResult {
    /// `G[embedding]`, with core vertex `i` being `embedding.members()[i]`.
    pub core: Graph,
    pub embedding: VertexSet,
    /// Homomorphism from the host onto `core`, the identity on `embedding`.
    pub retraction: HomMap,
}

/// Core by iterated single-vertex retraction. For graphs on at most nine
/// vertices the result is cross-checked against an exhaustive subset search.
pub fn core(g: &Graph, limits: &Limits) -> Result<CoreResult> {
    let n = g.n();
    if n > limits.core_vertices {
        bail!(
            Scale,
            "core computation is capped at {} vertices, got {n}",
            limits.core_vertices
        );
    }
    let mut keep: Vec<usize> = (0..n).collect();
    // retraction[v] is an original vertex inside `keep`
    let mut retraction: Vec<usize> = (0..n).collect();
    'shrink: loop {
        let current = g.induced_on(&keep);
        for drop in 0..keep.len() {
            let rest: Vec<usize> = keep
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != drop)
                .map(|(_, &v)| v)
                .collect();
            let target = g.induced_on(&rest);
            if let Some(f) = hom_search(&current, &target, limits)? {
                for r in retraction.iter_mut() {
                    let pos = keep.binary_search(r).expect("retraction stays inside keep");
                    *r = rest[f.image(pos)];
                }
                keep = rest;
                continue 'shrink;
            }
        }
        break;
    }
    // the retraction restricted to a core is an automorphism; undo it there
    let pos = |v: usize| keep.binary_search(&v).expect("vertex of the core");
    let mut inverse = vec![0; keep.len()];
    for (i, &v) in keep.iter().enumerate() {
        inverse[pos(retraction[v])] = i;
    }
    let assignment: Vec<usize> = retraction.iter().map(|&r| inverse[pos(r)]).collect();
    let embedding = VertexSet::new(keep);
    let core = g.induced_on(embedding.members());
    let retraction = HomMap { assignment };
    if !retraction.is_valid(g, &core)
        || embedding
            .members()
            .iter()
            .enumerate()
            .any(|(i, &v)| retraction.image(v) != i)
    {
        bail!(Consistency, "retraction onto the core failed verification");
    }
    if n <= 9 {
        let smallest = smallest_retract_size(g, limits)?;
        if smallest != core.n() {
            bail!(
                Consistency,
                "retraction stopped at {} vertices, exhaustive search finds {smallest}",
                core.n()
            );
        }
    }
    Ok(CoreResult {
        core,
        embedding,
        retraction,
    })
}

/// Size of the smallest induced subgraph that `g` maps into, by trying every
/// vertex subset in order of size.
pub fn smallest_retract_size(g: &Graph, limits: &Limits) -> Result<usize> {
    let n = g.n();
    if n > 16 {
        bail!(Scale, "exhaustive retract search is capped at 16 vertices");
    }
    let mut subsets: Vec<u32> = (0..1u32 << n).collect();
    subsets.sort_by_key(|s| (s.count_ones(), *s));
    for s in subsets {
        let vs: Vec<usize> = (0..n).filter(|&v| s >> v & 1 == 1).collect();
        if hom_search(g, &g.induced_on(&vs), limits)?.is_some() {
            return Ok(vs.len());
        }
    }
    Ok(n)
}

/// An isomorphism `a -> b` as a vertex map, if one exists.
pub fn find_isomorphism(a: &Graph, b: &Graph) -> Option<Vec<usize>> {
    if a.n() != b.n() || a.edge_count() != b.edge_count() {
        return None;
    }
    let (mut da, mut db) = (a.degrees(), b.degrees());
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return None;
    }
    let cons = Constraints::for_pattern(a, CopyMode::Induced);
    let mut found = None;
    let limits = Limits::default();
    Embedder::new(b, &cons, &limits)
        .run(None, |phi| {
            if (0..a.n()).all(|v| a.degree(v) == b.degree(phi[v])) {
                found = Some(phi.to_vec());
                Step::Stop
            } else {
                Step::Continue
            }
        })
        .ok()?;
    found
}

pub fn is_isomorphic(a: &Graph, b: &Graph) -> bool {
    find_isomorphism(a, b).is_some()
}

/// Lexicographically least upper-triangle bit string (column order, the
/// graph6 order) over all relabelings.
pub fn canonical_bits(g: &Graph) -> Vec<bool> {
    let mut search = Canon {
        g,
        perm: Vec::with_capacity(g.n()),
        used: vec![false; g.n()],
        cur: Vec::new(),
        best: None,
    };
    search.run();
    search.best.unwrap_or_default()
}

/// The relabeling of `g` whose bit string is [`canonical_bits`].
pub fn canonical_form(g: &Graph) -> Graph {
    let bits = canonical_bits(g);
    let mut out = Graph::new(g.n());
    let mut k = 0;
    for j in 1..g.n() {
        for i in 0..j {
            if bits[k] {
                out.add_edge(i, j);
            }
            k += 1;
        }
    }
    out
}

struct Canon<'a> {
    g: &'a Graph,
    perm: Vec<usize>,
    used: Vec<bool>,
    cur: Vec<bool>,
    best: Option<Vec<bool>>,
}

impl Canon<'_> {
    fn run(&mut self) {
        let n = self.g.n();
        if self.perm.len() == n {
            if self.best.as_ref().is_none_or(|b| self.cur < *b) {
                self.best = Some(self.cur.clone());
            }
            return;
        }
        let len = self.cur.len();
        for v in 0..n {
            if self.used[v] {
                continue;
            }
            for &u in &self.perm {
                self.cur.push(self.g.has_edge(u, v));
            }
            let worse = self
                .best
                .as_ref()
                .is_some_and(|b| self.cur[..] > b[..self.cur.len()]);
            if !worse {
                self.used[v] = true;
                self.perm.push(v);
                self.run();
                self.perm.pop();
                self.used[v] = false;
            }
            self.cur.truncate(len);
        }
    }
}

/// The cores of a family grouped into isomorphism classes, with the
/// homomorphism order between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorePoset {
    /// Class of each family member's core.
    pub member_class: Vec<usize>,
    /// Canonical form of each class, in order of first appearance.
    pub classes: Vec<Graph>,
    /// `below[i][j]` iff class `j` maps homomorphically into class `i`.
    pub below: Vec<Vec<bool>>,
    /// The chosen maximal class: nothing else maps into it.
    pub maximal: usize,
}

impl CorePoset {
    pub fn chosen(&self) -> &Graph {
        &self.classes[self.maximal]
    }
}

pub fn core_poset(f: &GraphFamily, limits: &Limits) -> Result<CorePoset> {
    let mut classes: Vec<Graph> = Vec::new();
    let mut member_class = Vec::with_capacity(f.len());
    for m in f.entries() {
        let c = core(&m.graph, limits)?.core;
        let canon = canonical_form(&c);
        let idx = match classes.iter().position(|k| *k == canon) {
            Some(i) => i,
            None => {
                classes.push(canon);
                classes.len() - 1
            }
        };
        member_class.push(idx);
    }
    let k = classes.len();
    let mut below = vec![vec![false; k]; k];
    for i in 0..k {
        for j in 0..k {
            below[i][j] = i == j || hom_search(&classes[j], &classes[i], limits)?.is_some();
        }
    }
    if let Some((i, j)) = (0..k)
        .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
        .find(|&(i, j)| below[i][j] && below[j][i])
    {
        bail!(
            Consistency,
            "distinct core classes {i} and {j} are hom-equivalent"
        );
    }
    let maximal = (0..k)
        .filter(|&i| (0..k).all(|j| j == i || !below[i][j]))
        .min_by(|&a, &b| canonical_bits(&classes[a]).cmp(&canonical_bits(&classes[b])))
        .ok_or_else(|| Error::Consistency("the core order has no maximal class".into()))?;
    Ok(CorePoset {
        member_class,
        classes,
        below,
        maximal,
    })
}

/// A set `X` of vertices of `f_graph` on which `f` is an isomorphism onto `k`.
/// Tries the core embedding first, then every `|V(k)|`-subset.
pub fn core_isomorphic_witness(
    f_graph: &Graph,
    k: &Graph,
    f: &HomMap,
    limits: &Limits,
) -> Result<VertexSet> {
    if !f.is_valid(f_graph, k) {
        bail!(Parameter, "the supplied map is not a homomorphism");
    }
    let works = |x: &[usize]| {
        let mut hit = vec![false; k.n()];
        for &v in x {
            let c = f.image(v);
            if hit[c] {
                return false;
            }
            hit[c] = true;
        }
        x.iter().enumerate().all(|(a, &u)| {
            x[a + 1..]
                .iter()
                .all(|&w| f_graph.has_edge(u, w) == k.has_edge(f.image(u), f.image(w)))
        })
    };
    if f_graph.n() <= limits.core_vertices {
        let c = core(f_graph, limits)?;
        if c.core.n() == k.n() && works(c.embedding.members()) {
            return Ok(c.embedding);
        }
    }
    // one vertex per colour class, classes taken in colour order
    let classes: Vec<Vec<usize>> = (0..k.n())
        .map(|c| (0..f_graph.n()).filter(|&v| f.image(v) == c).collect())
        .collect();
    if classes.iter().any(|c| c.is_empty()) {
        bail!(
            Consistency,
            "the map is not onto the target, so no witness exists"
        );
    }
    let mut pick = Vec::with_capacity(k.n());
    if pick_transversal(&classes, &mut pick, &works) {
        return Ok(VertexSet::new(pick));
    }
    bail!(
        Consistency,
        "no vertex set maps isomorphically onto the target; the target is not maximal for this graph"
    )
}

fn pick_transversal(
    classes: &[Vec<usize>],
    pick: &mut Vec<usize>,
    works: &dyn Fn(&[usize]) -> bool,
) -> bool {
    if pick.len() == classes.len() {
        return works(pick);
    }
    for &v in &classes[pick.len()] {
        pick.push(v);
        if works(pick) && pick_transversal(classes, pick, works) {
            return true;
        }
        pick.pop();
    }
    false
}

/// Odd girth by breadth-first search from every vertex; `None` if bipartite.
pub fn odd_girth(g: &Graph) -> Option<usize> {
    let n = g.n();
    let mut best: Option<usize> = None;
    let mut dist = vec![usize::MAX; n];
    let mut queue = alloc::collections::VecDeque::new();
    for root in 0..n {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[root] = 0;
        queue.clear();
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            for w in g.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                } else if dist[w] == dist[u] {
                    // an edge inside a BFS level closes an odd closed walk
                    let len = 2 * dist[u] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
    }
    best
}

/// Shortest odd cycle as a vertex sequence, ties broken by the
/// lexicographically least sequence.
pub fn shortest_odd_cycle(g: &Graph) -> Option<Vec<usize>> {
    let len = odd_girth(g)?;
    let n = g.n();
    let mut path = Vec::with_capacity(len);
    for start in 0..n {
        path.push(start);
        if cycle_from(g, len, &mut path) {
            return Some(path);
        }
        path.pop();
    }
    None
}

// cycles of the shortest odd length are induced, so a plain walk search over
// distinct vertices returns one; vertices after the start exceed it
fn cycle_from(g: &Graph, len: usize, path: &mut Vec<usize>) -> bool {
    let last = *path.last().unwrap();
    if path.len() == len {
        return g.has_edge(last, path[0]);
    }
    let next: Vec<usize> = bits(g.row(last))
        .filter(|&w| w > path[0] && !path.contains(&w))
        .collect();
    for w in next {
        path.push(w);
        if cycle_from(g, len, path) {
            return true;
        }
        path.pop();
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named::parse_named;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn hom_examples() {
        let c9 = Graph::cycle(9);
        let k3 = Graph::complete(3);
        let f = find_homomorphism(&c9, &k3, &lim()).unwrap().unwrap();
        assert!(f.is_valid(&c9, &k3));
        let modmap = HomMap {
            assignment: (0..9).map(|v| v % 3).collect(),
        };
        assert!(modmap.is_valid(&c9, &k3));
        // C5 is 3-colourable, so it maps to C3 = K3
        assert!(find_homomorphism(&Graph::cycle(5), &k3, &lim())
            .unwrap()
            .is_some());
        assert!(find_homomorphism(&k3, &Graph::cycle(5), &lim())
            .unwrap()
            .is_none());
        let id = find_homomorphism(&k3, &k3, &lim()).unwrap().unwrap();
        assert!(id.is_valid(&k3, &k3));
        assert!(matches!(
            find_homomorphism(&Graph::cycle(40), &k3, &lim()),
            Err(Error::Scale(_))
        ));
    }

    #[test]
    fn core_examples() {
        for k in 1..6 {
            assert_eq!(core(&Graph::complete(k), &lim()).unwrap().core.n(), k);
        }
        let c = core(&Graph::cycle(6), &lim()).unwrap();
        assert_eq!(c.core, Graph::complete(2));
        assert!(c.retraction.is_valid(&Graph::cycle(6), &c.core));
        assert_eq!(core(&Graph::cycle(5), &lim()).unwrap().core.n(), 5);
        assert_eq!(core(&Graph::new(3), &lim()).unwrap().core.n(), 1);
    }

    #[test]
    fn poset_examples() {
        let f = GraphFamily::new(vec![Graph::complete(3), Graph::cycle(5)]).unwrap();
        let p = core_poset(&f, &lim()).unwrap();
        assert_eq!(p.classes.len(), 2);
        assert!(is_isomorphic(p.chosen(), &Graph::cycle(5)));
        let f = GraphFamily::new(vec![Graph::complete(2)]).unwrap();
        assert_eq!(
            *core_poset(&f, &lim()).unwrap().chosen(),
            Graph::complete(2)
        );
        let f = GraphFamily::new(vec![Graph::cycle(6), Graph::complete(2)]).unwrap();
        let p = core_poset(&f, &lim()).unwrap();
        assert_eq!(p.classes.len(), 1);
        assert_eq!(p.member_class, [0, 0]);
    }

    #[test]
    fn witness_examples() {
        let k = parse_named("C5").unwrap();
        let id = HomMap {
            assignment: (0..5).collect(),
        };
        assert_eq!(
            core_isomorphic_witness(&k, &k, &id, &lim()).unwrap(),
            VertexSet::all(5)
        );
        // C9 has no triangle, so index mod 3 has no isomorphic restriction
        let modmap = HomMap {
            assignment: (0..9).map(|v| v % 3).collect(),
        };
        assert!(matches!(
            core_isomorphic_witness(&Graph::cycle(9), &Graph::complete(3), &modmap, &lim()),
            Err(Error::Consistency(_))
        ));
        let bad = HomMap {
            assignment: vec![0; 5],
        };
        assert!(matches!(
            core_isomorphic_witness(&k, &k, &bad, &lim()),
            Err(Error::Parameter(_))
        ));
        // a triangle with a pendant vertex folds onto its triangle
        let mut g = Graph::complete(3).disjoint_union(&Graph::new(1));
        g.add_edge(2, 3);
        let f = HomMap {
            assignment: vec![0, 1, 2, 0],
        };
        let x = core_isomorphic_witness(&g, &Graph::complete(3), &f, &lim()).unwrap();
        assert_eq!(x.members(), [0, 1, 2]);
    }

    #[test]
    fn canonical_forms() {
        let a = Graph::path(4);
        let b = a.relabel(&[2, 0, 3, 1]);
        assert_eq!(canonical_form(&a), canonical_form(&b));
        assert_ne!(
            canonical_form(&a),
            canonical_form(&Graph::complete_bipartite(1, 3))
        );
        assert!(is_isomorphic(&a, &b));
        assert!(!is_isomorphic(
            &Graph::cycle(6),
            &Graph::cycle(3).disjoint_union(&Graph::cycle(3))
        ));
    }

    #[test]
    fn odd_girths() {
        assert_eq!(odd_girth(&Graph::cycle(6)), None);
        assert_eq!(odd_girth(&Graph::cycle(7)), Some(7));
        assert_eq!(odd_girth(&Graph::complete(4)), Some(3));
        let c = shortest_odd_cycle(&parse_named("C5").unwrap()).unwrap();
        assert_eq!(c, [0, 1, 2, 3, 4]);
    }
}
