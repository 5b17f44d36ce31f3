// SPDX-License-Identifier: Apache-2.0

//! Blowup instances that are far from induced-freeness yet hard to detect by
//! sampling, each shipped with certificates that re-verify independently.

use alloc::vec;
use alloc::vec::Vec;

use super::layered::{rs_graph, LayeredCliqueGraph};
use crate::count::{tuple_collection, CopyRecord, Disjointness, Packing};
use crate::error::{bail, Error, Result};
use crate::graph::{blowup, ratio, BlowupSpec, Graph, Rational, VertexSet};
use crate::homomorphism::{core, odd_girth, shortest_odd_cycle, HomMap};
use crate::limits::Limits;
use crate::named::m_graph;
use crate::recognize::{is_bipartite, GraphFamily, MatchMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceKind {
    /// Layered `C8` blowup that is induced-`{C8, M}`-free-hard.
    C8,
    /// Blowup of `R(h, h^2 eps)` carrying an induced copy of `H` per clique.
    Homomorphic,
    /// Plain blowup of an odd cycle.
    OddCycle,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomCertificate {
    pub target: Graph,
    pub map: HomMap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HardInstance {
    pub kind: InstanceKind,
    pub graph: Graph,
    pub epsilon: Rational,
    pub requested_n: usize,
    /// Size of every blowup part.
    pub blowup_factor: usize,
    pub forbidden: GraphFamily,
    /// The layered graph underneath, when there is one.
    pub base: Option<LayeredCliqueGraph>,
    /// Pair-disjoint copies; `member` indexes `packing_patterns`.
    pub packing: Packing,
    pub packing_patterns: Vec<Graph>,
    /// Structural partition witness, when the construction has one.
    pub parts: Option<Vec<VertexSet>>,
    pub hom: Option<HomCertificate>,
}

impl HardInstance {
    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// Whether the packing reaches `epsilon n^2`.
    pub fn packing_reaches_epsilon(&self) -> bool {
        let n = self.n() as i128;
        Rational::from_integer(self.packing.len() as i128) >= self.epsilon * n * n
    }
}

fn check_epsilon(epsilon: Rational) -> Result<()> {
    if epsilon <= Rational::from_integer(0) || epsilon >= Rational::from_integer(1) {
        bail!(Parameter, "epsilon must lie in (0, 1), got {epsilon}");
    }
    Ok(())
}

fn blowup_transversals(
    r: &LayeredCliqueGraph,
    factor: usize,
    member: usize,
    induced: bool,
) -> Vec<CopyRecord> {
    let tuples = tuple_collection(factor, r.h);
    let mut copies = Vec::with_capacity(tuples.len() * r.cliques.len());
    for idx in 0..r.cliques.len() {
        let base = r.clique_vertices(idx);
        for t in &tuples {
            copies.push(CopyRecord {
                member,
                vertices: base
                    .iter()
                    .zip(t)
                    .map(|(&v, &ti)| v * factor + ti - 1)
                    .collect(),
                induced,
            });
        }
    }
    copies
}

/// The `C8` construction: each vertex of `R(8, 64 eps)` becomes a part of
/// `n / |V(R)|` vertices, parts over odd layers form cliques, parts over even
/// layers stay independent, and every registry clique carries a plain `C8`
/// blowup around its eight parts. `n` is rounded down to a multiple of
/// `|V(R)|`.
pub fn c8_instance(n: usize, epsilon: Rational, limits: &Limits) -> Result<HardInstance> {
    check_epsilon(epsilon)?;
    let delta = epsilon * 64;
    if n < 36 {
        return Err(Error::InsufficientVertices {
            needed: 36,
            actual: n,
        });
    }
    let r = rs_graph(8, delta, None, Some(n / 36), limits)?;
    let factor = n / r.n();
    let n_eff = factor * r.n();
    if n_eff > limits.instance_vertices {
        bail!(Scale, "{n_eff} vertices exceed the instance cap");
    }
    let mut g = Graph::new(n_eff);
    let part = |v: usize| v * factor..(v + 1) * factor;
    let parts: Vec<VertexSet> = (1..=8)
        .map(|j| r.layer(j).members().iter().flat_map(|&v| part(v)).collect())
        .collect();
    for j in [0, 2, 4, 6] {
        let vs = parts[j].members();
        for a in 0..vs.len() {
            for &b in &vs[a + 1..] {
                g.add_edge(vs[a], b);
            }
        }
    }
    for idx in 0..r.cliques.len() {
        let vs = r.clique_vertices(idx);
        for i in 0..8 {
            for u in part(vs[i]) {
                for w in part(vs[(i + 1) % 8]) {
                    g.add_edge(u, w);
                }
            }
        }
    }
    let copies = blowup_transversals(&r, factor, 0, true);
    let c8 = Graph::cycle(8);
    let inst = HardInstance {
        kind: InstanceKind::C8,
        graph: g,
        epsilon,
        requested_n: n,
        blowup_factor: factor,
        forbidden: GraphFamily::new(vec![c8.clone(), m_graph()])?,
        base: Some(r),
        packing: Packing {
            copies,
            disjointness: Disjointness::PairDisjoint,
        },
        packing_patterns: vec![c8],
        parts: Some(parts),
        hom: None,
    };
    if !inst.packing_reaches_epsilon() {
        bail!(
            Consistency,
            "packing of {} copies is below epsilon n^2",
            inst.packing.len()
        );
    }
    Ok(inst)
}

/// True iff `parts` are eight sets partitioning `V(G)` with odd-indexed parts
/// (1-based) cliques, even-indexed parts independent, and edges only between
/// cyclically consecutive parts.
pub fn check_c8_structure(g: &Graph, parts: &[VertexSet]) -> Result<bool> {
    if parts.len() != 8 {
        bail!(Parameter, "expected 8 parts, got {}", parts.len());
    }
    let mut owner = vec![usize::MAX; g.n()];
    for (i, p) in parts.iter().enumerate() {
        p.check_within(g.n())?;
        for &v in p.members() {
            if owner[v] != usize::MAX {
                bail!(Parameter, "vertex {v} lies in two parts");
            }
            owner[v] = i;
        }
    }
    if let Some(v) = owner.iter().position(|&o| o == usize::MAX) {
        bail!(Parameter, "vertex {v} lies in no part");
    }
    for (i, p) in parts.iter().enumerate() {
        let vs = p.members();
        let ok = if i % 2 == 0 {
            g.is_clique(vs)
        } else {
            g.is_independent(vs)
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(g.edges().all(|(u, v)| {
        let (a, b) = (owner[u], owner[v]);
        a == b || (a + 1) % 8 == b || (b + 1) % 8 == a
    }))
}

/// Relabeling data for a non-bipartite pattern: its core with the shortest
/// odd cycle first, and the pattern reordered class by class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassLabeling {
    /// Core with `a_1 .. a_t` (vertices `0..t`) the chosen odd cycle.
    pub core: Graph,
    pub odd_cycle_len: usize,
    /// The pattern with vertices sorted by class, then by original index.
    pub pattern: Graph,
    /// `order[i]` is the original vertex now labelled `i`.
    pub order: Vec<usize>,
    /// Class (core vertex) of each relabelled pattern vertex.
    pub class: Vec<usize>,
}

pub fn class_labeling(h: &Graph, limits: &Limits) -> Result<ClassLabeling> {
    if is_bipartite(h).is_some() {
        bail!(
            Condition,
            "the pattern is bipartite; a non-bipartite graph is required"
        );
    }
    let c = core(h, limits)?;
    let cycle = shortest_odd_cycle(&c.core).ok_or_else(|| {
        Error::Consistency("core of a non-bipartite graph has no odd cycle".into())
    })?;
    let k = c.core.n();
    let mut new_label = vec![usize::MAX; k];
    for (i, &v) in cycle.iter().enumerate() {
        new_label[v] = i;
    }
    let mut next = cycle.len();
    for l in new_label.iter_mut() {
        if *l == usize::MAX {
            *l = next;
            next += 1;
        }
    }
    let core_graph = c.core.relabel(&new_label);
    let phi: Vec<usize> = (0..h.n())
        .map(|v| new_label[c.retraction.image(v)])
        .collect();
    let mut order: Vec<usize> = (0..h.n()).collect();
    order.sort_by_key(|&v| (phi[v], v));
    let class = order.iter().map(|&v| phi[v]).collect();
    Ok(ClassLabeling {
        core: core_graph,
        odd_cycle_len: cycle.len(),
        pattern: h.induced_on(&order),
        order,
        class,
    })
}

/// The construction for a single non-bipartite pattern `H` on `h` vertices:
/// `R(h, h^2 eps)` with an induced copy of the class-ordered `H` on every
/// registry clique, blown up by `n / |V(R)|`. The blowup maps onto the core of
/// `H` layer by layer.
pub fn homomorphic_instance(
    h_graph: &Graph,
    epsilon: Rational,
    n: usize,
    limits: &Limits,
) -> Result<HardInstance> {
    check_epsilon(epsilon)?;
    let lab = class_labeling(h_graph, limits)?;
    let h = h_graph.n();
    let c = h * (h + 1) / 2;
    if n < c {
        return Err(Error::InsufficientVertices {
            needed: c as u128,
            actual: n,
        });
    }
    let delta = epsilon * (h * h) as i128;
    let r = rs_graph(h, delta, None, Some(n / c), limits)?;
    let factor = n / r.n();
    if factor * r.n() > limits.instance_vertices {
        bail!(Scale, "{} vertices exceed the instance cap", factor * r.n());
    }
    let mut base = Graph::new(r.n());
    for idx in 0..r.cliques.len() {
        let vs = r.clique_vertices(idx);
        for (a, b) in lab.pattern.edges() {
            base.add_edge(vs[a], vs[b]);
        }
    }
    let g = blowup(&BlowupSpec::plain(base, factor))?;
    let assignment = (0..g.n())
        .map(|u| lab.class[r.locate(u / factor).0 - 1])
        .collect();
    let copies = blowup_transversals(&r, factor, 0, true);
    let inst = HardInstance {
        kind: InstanceKind::Homomorphic,
        graph: g,
        epsilon,
        requested_n: n,
        blowup_factor: factor,
        forbidden: GraphFamily::new(vec![lab.pattern.clone()])?,
        base: Some(r),
        packing: Packing {
            copies,
            disjointness: Disjointness::PairDisjoint,
        },
        packing_patterns: vec![lab.pattern],
        parts: None,
        hom: Some(HomCertificate {
            target: lab.core,
            map: HomMap { assignment },
        }),
    };
    if !inst.packing_reaches_epsilon() {
        bail!(
            Consistency,
            "packing of {} copies is below epsilon n^2",
            inst.packing.len()
        );
    }
    Ok(inst)
}

/// Plain `n / k`-blowup of `C_k` for odd `k >= 5`. Every transversal of the
/// parts in cyclic order is an induced `C_k`; the packing takes them along a
/// pair-disjoint tuple collection, so `epsilon = 1/k^4`.
pub fn odd_cycle_blowup_instance(k: usize, n: usize, limits: &Limits) -> Result<HardInstance> {
    if k < 5 || k.is_multiple_of(2) {
        bail!(Parameter, "k must be odd and at least 5, got {k}");
    }
    let factor = n / k;
    if factor == 0 {
        return Err(Error::InsufficientVertices {
            needed: k as u128,
            actual: n,
        });
    }
    if factor * k > limits.instance_vertices {
        bail!(Scale, "{} vertices exceed the instance cap", factor * k);
    }
    let ck = Graph::cycle(k);
    let g = blowup(&BlowupSpec::plain(ck.clone(), factor))?;
    let parts: Vec<VertexSet> = (0..k)
        .map(|i| VertexSet::range(i * factor, (i + 1) * factor))
        .collect();
    let copies = tuple_collection(factor, k)
        .into_iter()
        .map(|t| CopyRecord {
            member: 0,
            vertices: t
                .iter()
                .enumerate()
                .map(|(i, &ti)| i * factor + ti - 1)
                .collect(),
            induced: true,
        })
        .collect();
    let assignment = (0..g.n()).map(|u| u / factor).collect();
    Ok(HardInstance {
        kind: InstanceKind::OddCycle,
        graph: g,
        epsilon: ratio(1, (k as u128).pow(4)),
        requested_n: n,
        blowup_factor: factor,
        forbidden: GraphFamily::with_modes(vec![
            (Graph::cycle(6), MatchMode::Induced),
            (ck.clone(), MatchMode::Subgraph),
        ])?,
        base: None,
        packing: Packing {
            copies,
            disjointness: Disjointness::PairDisjoint,
        },
        packing_patterns: vec![ck.clone()],
        parts: Some(parts),
        hom: Some(HomCertificate {
            target: ck,
            map: HomMap { assignment },
        }),
    })
}

/// Searches the sample types of a plain blowup: a `q`-vertex sample is
/// determined up to isomorphism by how many vertices it takes from each part.
/// Returns a count vector whose sample contains a family member, or `None`
/// if every `q`-vertex sample is free.
pub fn blowup_type_search(
    base: &Graph,
    part_size: usize,
    q: usize,
    family: &GraphFamily,
    limits: &Limits,
) -> Result<Option<Vec<usize>>> {
    let p = base.n();
    if q > p * part_size {
        return Ok(None);
    }
    let mut counts = vec![0usize; p];
    type_walk(base, part_size, q, family, limits, 0, &mut counts)
}

fn type_walk(
    base: &Graph,
    cap: usize,
    left: usize,
    family: &GraphFamily,
    limits: &Limits,
    i: usize,
    counts: &mut Vec<usize>,
) -> Result<Option<Vec<usize>>> {
    let p = base.n();
    if i == p - 1 {
        if left > cap {
            return Ok(None);
        }
        counts[i] = left;
        let g = type_graph(base, counts)?;
        let hit = !family.is_free(&g, limits)?;
        let out = hit.then(|| counts.clone());
        counts[i] = 0;
        return Ok(out);
    }
    for c in 0..=left.min(cap) {
        counts[i] = c;
        if let Some(v) = type_walk(base, cap, left - c, family, limits, i + 1, counts)? {
            counts[i] = 0;
            return Ok(Some(v));
        }
    }
    counts[i] = 0;
    Ok(None)
}

/// The sample graph for a count vector over the parts of a plain blowup.
pub fn type_graph(base: &Graph, counts: &[usize]) -> Result<Graph> {
    let keep: Vec<usize> = (0..base.n()).filter(|&i| counts[i] > 0).collect();
    if keep.is_empty() {
        return Ok(Graph::new(0));
    }
    let sizes = keep.iter().map(|&i| counts[i]).collect();
    blowup(&BlowupSpec {
        base: base.induced_on(&keep),
        kind: crate::graph::PartKind::Plain,
        sizes,
    })
}

/// Odd girth of the instance and whether it is induced-`C6`-free, decided by
/// the sample-type search over 6-vertex samples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddCycleReport {
    pub odd_girth: Option<usize>,
    pub induced_c6_free: bool,
}

pub fn check_odd_cycle_blowup(k: usize, factor: usize, limits: &Limits) -> Result<OddCycleReport> {
    let base = Graph::cycle(k);
    let c6 = GraphFamily::new(vec![Graph::cycle(6)])?;
    let hit = blowup_type_search(&base, factor, 6, &c6, limits)?;
    // the blowup maps onto C_k and contains it, so both share their odd girth
    Ok(OddCycleReport {
        odd_girth: odd_girth(&base),
        induced_c6_free: hit.is_none(),
    })
}
