// SPDX-License-Identifier: Apache-2.0

//! The layered graph built from arithmetic-progression cliques `A(x, s)`.

use alloc::vec::Vec;
use core::ops::ControlFlow;

use super::behrend::{behrend_set, BehrendSet};
use crate::count::{count_layered_cycles, for_each_layered_cycle};
use crate::error::{bail, Error, Result};
use crate::graph::{ratio, Graph, Rational, VertexSet};
use crate::limits::Limits;

/// Layers `V_1..V_h` with `|V_j| = j m`, and one `h`-clique
/// `{x, x+s, ..., x+(h-1)s}` per `(x, s)` in `[m] × S`, where `x + j s` lies
/// in layer `j + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeredCliqueGraph {
    pub h: usize,
    pub m: usize,
    pub set: BehrendSet,
    pub graph: Graph,
    /// Registry of `(x, s)` pairs, `x` major.
    pub cliques: Vec<(u64, u64)>,
}

impl LayeredCliqueGraph {
    /// Builds the graph for explicit `h`, `m` and difference set.
    pub fn build(h: usize, m: usize, set: BehrendSet, limits: &Limits) -> Result<Self> {
        if h < 3 {
            bail!(Parameter, "layer count must be at least 3, got {h}");
        }
        if m == 0 {
            bail!(Parameter, "scale m must be positive");
        }
        if set.members.iter().any(|&s| s == 0 || s > m as u64) {
            bail!(Parameter, "difference set must lie in 1..={m}");
        }
        let n = h * (h + 1) / 2 * m;
        if n > limits.construct_vertices {
            bail!(
                Scale,
                "{n} vertices exceed the construction cap of {}",
                limits.construct_vertices
            );
        }
        let mut r = LayeredCliqueGraph {
            h,
            m,
            set,
            graph: Graph::new(n),
            cliques: Vec::new(),
        };
        let diffs = r.set.members.clone();
        for x in 1..=m as u64 {
            for &s in &diffs {
                r.cliques.push((x, s));
            }
        }
        for idx in 0..r.cliques.len() {
            let vs = r.clique_vertices(idx);
            for a in 0..vs.len() {
                for b in a + 1..vs.len() {
                    r.graph.add_edge(vs[a], vs[b]);
                }
            }
        }
        Ok(r)
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// First vertex of layer `j` (1-based).
    pub fn offset(&self, j: usize) -> usize {
        self.m * j * (j - 1) / 2
    }

    pub fn layer(&self, j: usize) -> VertexSet {
        VertexSet::range(self.offset(j), self.offset(j + 1))
    }

    /// Vertex holding `value` (1-based) in layer `j`.
    pub fn vertex(&self, j: usize, value: u64) -> usize {
        self.offset(j) + value as usize - 1
    }

    /// Layer and value of a vertex.
    pub fn locate(&self, v: usize) -> (usize, u64) {
        let mut j = 1;
        while self.offset(j + 1) <= v {
            j += 1;
        }
        (j, (v - self.offset(j) + 1) as u64)
    }

    /// Vertices of registry clique `idx`, one per layer in layer order.
    pub fn clique_vertices(&self, idx: usize) -> Vec<usize> {
        let (x, s) = self.cliques[idx];
        (0..self.h)
            .map(|j| self.vertex(j + 1, x + j as u64 * s))
            .collect()
    }

    /// The unique `(x, s)` whose clique contains both vertices, if any.
    pub fn clique_of_pair(&self, u: usize, w: usize) -> Option<(u64, u64)> {
        let (mut i, mut a) = self.locate(u);
        let (mut j, mut b) = self.locate(w);
        if i == j {
            return None;
        }
        if i > j {
            core::mem::swap(&mut i, &mut j);
            core::mem::swap(&mut a, &mut b);
        }
        let gap = (j - i) as u64;
        if b <= a || (b - a) % gap != 0 {
            return None;
        }
        let s = (b - a) / gap;
        let shift = (i as u64 - 1) * s;
        if !self.set.contains(s) || a <= shift || a - shift > self.m as u64 {
            return None;
        }
        Some((a - shift, s))
    }

    pub fn clique_index(&self, x: u64, s: u64) -> Option<usize> {
        let pos = self.set.members.binary_search(&s).ok()?;
        if x == 0 || x > self.m as u64 {
            return None;
        }
        Some((x as usize - 1) * self.set.len() + pos)
    }

    /// Whether all of `vs` lie in one registry clique.
    pub fn single_clique(&self, vs: &[usize]) -> Option<usize> {
        let (x, s) = self.clique_of_pair(*vs.first()?, *vs.get(1)?)?;
        let idx = self.clique_index(x, s)?;
        vs.iter()
            .all(|&v| {
                let (j, val) = self.locate(v);
                val == x + (j as u64 - 1) * s
            })
            .then_some(idx)
    }

    /// Number of cliques over `|V|^2`.
    pub fn clique_density(&self) -> Rational {
        ratio(self.cliques.len() as u128, (self.n() as u128).pow(2))
    }
}

/// The difference set used for scale `m` with coefficient budget `k`: the
/// digit-shell set when its digit cap allows, otherwise `{1}`.
pub fn difference_set(m: usize, k: usize) -> BehrendSet {
    match behrend_set(m as u64, k as u64) {
        Ok(s) => s,
        Err(_) => BehrendSet::singleton(m as u64, k as u64),
    }
}

fn feasible(h: usize, m: usize, delta: Rational) -> Option<BehrendSet> {
    let set = difference_set(m, h - 1);
    let c = (h * (h + 1) / 2) as i128;
    // m |S| >= delta (c m)^2, i.e. |S| >= delta c^2 m
    (Rational::from_integer(set.len() as i128) >= delta * c * c * m as i128).then_some(set)
}

/// Builds `R(h, delta)`. Without a hint, takes the largest scale `m <= m_max`
/// found by a geometric scan refined by bisection at which the clique count
/// reaches `delta |V|^2`.
pub fn rs_graph(
    h: usize,
    delta: Rational,
    m_hint: Option<usize>,
    m_max: Option<usize>,
    limits: &Limits,
) -> Result<LayeredCliqueGraph> {
    if h < 3 {
        bail!(Parameter, "h must be at least 3, got {h}");
    }
    let zero = Rational::from_integer(0);
    let one = Rational::from_integer(1);
    if delta <= zero || delta >= one {
        bail!(Parameter, "delta must lie in (0, 1), got {delta}");
    }
    let c = h * (h + 1) / 2;
    if let Some(m) = m_hint {
        let set = feasible(h, m.max(1), delta).ok_or_else(|| {
            Error::InfeasibleDelta(alloc::format!(
                "m = {m} gives fewer than delta |V|^2 cliques for h = {h}"
            ))
        })?;
        return LayeredCliqueGraph::build(h, m, set, limits);
    }
    let cap = (limits.construct_vertices / c).min(m_max.unwrap_or(usize::MAX));
    if cap == 0 {
        bail!(Scale, "no scale m fits the vertex cap for h = {h}");
    }
    let mut lo = None;
    let mut hi = None;
    let mut m = 1;
    while m <= cap {
        if feasible(h, m, delta).is_some() {
            lo = Some(m);
            hi = None;
        } else if hi.is_none() {
            hi = Some(m);
        }
        m *= 2;
    }
    let Some(mut lo) = lo else {
        bail!(
            InfeasibleDelta,
            "no m <= {cap} reaches delta = {delta} for h = {h}; delta must be at most 1/{}",
            c * c
        );
    };
    let mut hi = hi.unwrap_or(cap + 1).min(cap + 1);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if feasible(h, mid, delta).is_some() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let set = feasible(h, lo, delta).expect("bisection keeps a feasible lower end");
    LayeredCliqueGraph::build(h, lo, set, limits)
}

/// Outcome of the exact structural checks on a layered clique graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeredReport {
    pub layers_independent: bool,
    pub cliques_edge_disjoint: bool,
    pub clique_count: usize,
    pub vertex_count: usize,
    /// `Some` when the layered-cycle bound was enumerated.
    pub cycle_bound: Option<bool>,
}

impl LayeredReport {
    pub fn passed(&self) -> bool {
        self.layers_independent && self.cliques_edge_disjoint && self.cycle_bound != Some(false)
    }
}

/// Checks layer independence, edge-disjointness of the registry (by claiming
/// every clique edge once) and, if asked, that every layered cycle over every
/// increasing index sequence numbers at most `|V|^2`.
pub fn verify_layered(r: &LayeredCliqueGraph, check_cycles: bool) -> Result<LayeredReport> {
    let layers_independent = (1..=r.h).all(|j| r.graph.edges_within(&r.layer(j)) == 0);
    let mut claimed = Graph::new(r.n());
    let mut disjoint = true;
    'cliques: for idx in 0..r.cliques.len() {
        let vs = r.clique_vertices(idx);
        for a in 0..vs.len() {
            for b in a + 1..vs.len() {
                if claimed.has_edge(vs[a], vs[b]) {
                    disjoint = false;
                    break 'cliques;
                }
                claimed.add_edge(vs[a], vs[b]);
            }
        }
    }
    let cycle_bound = if check_cycles {
        let bound = num_bigint::BigUint::from(r.n()).pow(2);
        let mut ok = true;
        for idx in increasing_sequences(r.h) {
            if count_layered_cycles(r, &idx)? > bound {
                ok = false;
                break;
            }
        }
        Some(ok)
    } else {
        None
    };
    Ok(LayeredReport {
        layers_independent,
        cliques_edge_disjoint: disjoint && claimed == r.graph,
        clique_count: r.cliques.len(),
        vertex_count: r.n(),
        cycle_bound,
    })
}

/// Every strictly increasing sequence over `1..=h` of length at least 3.
pub fn increasing_sequences(h: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 0u32..1 << h {
        if mask.count_ones() >= 3 {
            out.push(
                (0..h)
                    .filter(|&i| mask >> i & 1 == 1)
                    .map(|i| i + 1)
                    .collect(),
            );
        }
    }
    out.sort();
    out
}

/// Finds a layered cycle, over any increasing index sequence, that is not
/// contained in a single registry clique.
pub fn stray_layered_cycle(r: &LayeredCliqueGraph) -> Result<Option<Vec<usize>>> {
    let mut stray = None;
    for idx in increasing_sequences(r.h) {
        for_each_layered_cycle(r, &idx, |cycle| {
            if r.single_clique(cycle).is_none() {
                stray = Some(cycle.to_vec());
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })?;
        if stray.is_some() {
            break;
        }
    }
    Ok(stray)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::count_layered_cycles;
    use num_bigint::BigUint;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn triangle_layers() {
        let set = difference_set(4, 2);
        let r = LayeredCliqueGraph::build(3, 4, set, &lim()).unwrap();
        assert_eq!(r.n(), 24);
        assert_eq!(r.layer(1).len(), 4);
        assert_eq!(r.layer(2).len(), 8);
        assert_eq!(r.layer(3).len(), 12);
        for idx in 0..r.cliques.len() {
            let (x, s) = r.cliques[idx];
            let vs = r.clique_vertices(idx);
            let vals: Vec<u64> = vs.iter().map(|&v| r.locate(v).1).collect();
            assert_eq!(vals, [x, x + s, x + 2 * s]);
            assert_eq!(r.single_clique(&vs), Some(idx));
        }
        let rep = verify_layered(&r, true).unwrap();
        assert!(rep.passed());
    }

    #[test]
    fn single_clique_cycle() {
        let r = LayeredCliqueGraph::build(3, 1, BehrendSet::singleton(1, 2), &lim()).unwrap();
        assert_eq!(r.cliques, [(1, 1)]);
        assert_eq!(
            count_layered_cycles(&r, &[1, 2, 3]).unwrap(),
            BigUint::from(1u32)
        );
        let mut bare = r.clone();
        bare.graph = Graph::new(r.n());
        assert_eq!(
            count_layered_cycles(&bare, &[1, 2, 3]).unwrap(),
            BigUint::from(0u32)
        );
        assert!(count_layered_cycles(&r, &[1, 3, 2]).is_err());
        assert!(count_layered_cycles(&r, &[1, 2]).is_err());
    }

    #[test]
    fn delta_search() {
        let delta = Rational::new(1, 400);
        let r = rs_graph(3, delta, None, Some(50), &lim()).unwrap();
        let c = Rational::from_integer(r.cliques.len() as i128);
        assert!(c >= delta * (r.n() as i128).pow(2));
        assert!(stray_layered_cycle(&r).unwrap().is_none());
        assert!(matches!(
            rs_graph(3, Rational::new(1, 30), None, None, &lim()),
            Err(Error::InfeasibleDelta(_))
        ));
        assert!(matches!(
            rs_graph(2, delta, None, None, &lim()),
            Err(Error::Parameter(_))
        ));
    }
}
