// SPDX-License-Identifier: Apache-2.0

//! Certificate sidecars and their verification. The checks here recompute
//! everything from the graph and the certificate alone; nothing is taken from
//! the generator.

use std::collections::HashMap;
use std::path::Path;

use removal_lab_core::construct::LayeredCliqueGraph;
use removal_lab_core::construct::{check_c8_structure, verify_convex_free, HardInstance};
use removal_lab_core::count::{CopyRecord, Disjointness, Packing};
use removal_lab_core::homomorphism::HomMap;
use removal_lab_core::{Graph, Rational, VertexSet};
use serde::{Deserialize, Serialize};

use crate::format::{fingerprint, format_rational, from_graph6, parse_rational, to_graph6};
use crate::{read_text, LabError, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphRef {
    pub n: usize,
    pub edges: usize,
    pub sha256: String,
}

impl GraphRef {
    pub fn of(g: &Graph) -> Self {
        GraphRef {
            n: g.n(),
            edges: g.edge_count(),
            sha256: fingerprint(g),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CopyEntry {
    pub member: usize,
    pub vertices: Vec<usize>,
    pub induced: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DisjointnessKind {
    PairDisjoint,
    EdgeDisjoint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// Copies of the patterns, pairwise disjoint as declared; with `epsilon`,
    /// at least `epsilon n^2` of them.
    Packing {
        patterns: Vec<String>,
        disjointness: DisjointnessKind,
        copies: Vec<CopyEntry>,
        epsilon: Option<String>,
    },
    /// An edge-preserving map onto `target`.
    Homomorphism { target: String, map: Vec<usize> },
    /// Eight parts: 1st, 3rd, 5th, 7th cliques, the others independent, edges
    /// only between cyclically consecutive parts.
    C8Structure { parts: Vec<Vec<usize>> },
    /// Layers of sizes `m, 2m, ..., hm` and the cliques `(x, s)` placing
    /// `x + (j-1)s` in layer `j`; the cliques must be edge-disjoint and cover
    /// every edge. With `delta`, at least `delta n^2` cliques.
    Layered {
        h: usize,
        m: usize,
        set: Vec<u64>,
        cliques: Vec<[u64; 2]>,
        delta: Option<String>,
    },
    /// `members` has no nontrivial solution of a weighted-average equation
    /// with total weight at most `k`.
    ConvexFree { m: u64, k: u64, members: Vec<u64> },
}

impl Certificate {
    fn label(&self) -> &'static str {
        match self {
            Certificate::Packing { .. } => "packing",
            Certificate::Homomorphism { .. } => "homomorphism",
            Certificate::C8Structure { .. } => "c8_structure",
            Certificate::Layered { .. } => "layered",
            Certificate::ConvexFree { .. } => "convex_free",
        }
    }

    fn needs_graph(&self) -> bool {
        !matches!(self, Certificate::ConvexFree { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sidecar {
    pub schema_version: u32,
    /// Generator name and parameters, for the record only.
    pub generator: String,
    pub graph: Option<GraphRef>,
    pub certificates: Vec<Certificate>,
}

impl Sidecar {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("sidecars serialize");
        s.push('\n');
        s
    }

    /// Claimed `epsilon` of the first packing, if any.
    pub fn epsilon(&self) -> Option<Rational> {
        self.certificates.iter().find_map(|c| match c {
            Certificate::Packing {
                epsilon: Some(e), ..
            } => parse_rational(e).ok(),
            _ => None,
        })
    }
}

pub fn read_sidecar(path: &Path) -> Result<Sidecar> {
    let text = read_text(path)?;
    let s: Sidecar = serde_json::from_str(&text)
        .map_err(|e| LabError::Format(format!("{}: {e}", path.display())))?;
    if s.schema_version != SCHEMA_VERSION {
        return Err(LabError::Format(format!(
            "unsupported schema version {}",
            s.schema_version
        )));
    }
    Ok(s)
}

pub fn packing_certificate(
    packing: &Packing,
    patterns: &[Graph],
    epsilon: Option<Rational>,
) -> Certificate {
    Certificate::Packing {
        patterns: patterns.iter().map(to_graph6).collect(),
        disjointness: match packing.disjointness {
            Disjointness::PairDisjoint => DisjointnessKind::PairDisjoint,
            Disjointness::EdgeDisjoint => DisjointnessKind::EdgeDisjoint,
        },
        copies: packing
            .copies
            .iter()
            .map(|c| CopyEntry {
                member: c.member,
                vertices: c.vertices.clone(),
                induced: c.induced,
            })
            .collect(),
        epsilon: epsilon.map(format_rational),
    }
}

pub fn layered_certificate(r: &LayeredCliqueGraph, delta: Option<Rational>) -> Certificate {
    Certificate::Layered {
        h: r.h,
        m: r.m,
        set: r.set.members.clone(),
        cliques: r.cliques.iter().map(|&(x, s)| [x, s]).collect(),
        delta: delta.map(format_rational),
    }
}

pub fn instance_sidecar(inst: &HardInstance, generator: String) -> Sidecar {
    let mut certificates = vec![packing_certificate(
        &inst.packing,
        &inst.packing_patterns,
        Some(inst.epsilon),
    )];
    if let Some(h) = &inst.hom {
        certificates.push(Certificate::Homomorphism {
            target: to_graph6(&h.target),
            map: h.map.assignment.clone(),
        });
    }
    if let Some(parts) = &inst.parts {
        if parts.len() == 8 {
            certificates.push(Certificate::C8Structure {
                parts: parts.iter().map(|p| p.members().to_vec()).collect(),
            });
        }
    }
    Sidecar {
        schema_version: SCHEMA_VERSION,
        generator,
        graph: Some(GraphRef::of(&inst.graph)),
        certificates,
    }
}

/// Outcome of checking one certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckLine {
    pub index: usize,
    pub kind: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub lines: Vec<CheckLine>,
    pub warnings: Vec<String>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.passed)
    }
}

/// Checks every certificate in `sidecar` against `graph`. Certificates that
/// need a graph fail when none is given or when it does not match the
/// recorded fingerprint.
pub fn verify(graph: Option<&Graph>, sidecar: &Sidecar, convex_budget: u64) -> Verdict {
    let mut warnings = Vec::new();
    if sidecar.certificates.is_empty() {
        warnings.push("no certificates to check".to_string());
    }
    let mismatch = match (graph, &sidecar.graph) {
        (Some(g), Some(r)) => {
            let got = GraphRef::of(g);
            (got != *r).then(|| {
                format!(
                    "graph mismatch: certificate is for n = {}, {} edges, sha256 {}; file has n = {}, {} edges, sha256 {}",
                    r.n, r.edges, r.sha256, got.n, got.edges, got.sha256
                )
            })
        }
        (Some(_), None) => None,
        (None, _) => None,
    };
    let lines = sidecar
        .certificates
        .iter()
        .enumerate()
        .map(|(index, c)| {
            let outcome = match (graph, &mismatch) {
                _ if !c.needs_graph() => check(None, c, convex_budget),
                (_, Some(m)) => Err(m.clone()),
                (None, _) => Err("needs the graph file".to_string()),
                (Some(g), None) => check(Some(g), c, convex_budget),
            };
            let (passed, detail) = match outcome {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CheckLine {
                index,
                kind: c.label(),
                passed,
                detail,
            }
        })
        .collect();
    Verdict { lines, warnings }
}

type Check = std::result::Result<String, String>;

fn check(g: Option<&Graph>, c: &Certificate, convex_budget: u64) -> Check {
    match c {
        Certificate::Packing {
            patterns,
            disjointness,
            copies,
            epsilon,
        } => check_packing(
            g.expect("graph checked"),
            patterns,
            *disjointness,
            copies,
            epsilon,
        ),
        Certificate::Homomorphism { target, map } => {
            let g = g.expect("graph checked");
            let t = from_graph6(target).map_err(|e| format!("target: {e}"))?;
            if map.len() != g.n() {
                return Err(format!(
                    "map has {} entries for {} vertices",
                    map.len(),
                    g.n()
                ));
            }
            if let Some(v) = map.iter().position(|&x| x >= t.n()) {
                return Err(format!(
                    "vertex {v} maps outside the {}-vertex target",
                    t.n()
                ));
            }
            match g.edges().find(|&(u, v)| !t.has_edge(map[u], map[v])) {
                Some((u, v)) => Err(format!(
                    "edge ({u}, {v}) maps to the non-edge ({}, {})",
                    map[u], map[v]
                )),
                None => Ok(format!(
                    "{} edges preserved onto {} vertices",
                    g.edge_count(),
                    t.n()
                )),
            }
        }
        Certificate::C8Structure { parts } => {
            let g = g.expect("graph checked");
            if parts.iter().flatten().any(|&v| v >= g.n()) {
                return Err("part vertex out of range".into());
            }
            let sets: Vec<VertexSet> = parts.iter().map(|p| p.iter().copied().collect()).collect();
            match check_c8_structure(g, &sets) {
                Ok(true) => Ok("eight parts with the cyclic clique/independent pattern".into()),
                Ok(false) => Err("parts violate the cyclic clique/independent pattern".into()),
                Err(e) => Err(e.to_string()),
            }
        }
        Certificate::Layered {
            h,
            m,
            set,
            cliques,
            delta,
        } => check_layered(g.expect("graph checked"), *h, *m, set, cliques, delta),
        Certificate::ConvexFree { m, k, members } => {
            if members.windows(2).any(|w| w[0] >= w[1]) || members.iter().any(|&x| x == 0 || x > *m)
            {
                return Err(format!("members must be increasing within 1..={m}"));
            }
            let v = verify_convex_free(members, *k, convex_budget);
            match (v.passed(), v.exhaustive) {
                (true, true) => Ok(format!(
                    "{} members, exhaustive over {} tuples",
                    members.len(),
                    v.checked
                )),
                (true, false) => Ok(format!(
                    "{} members, sampled {} tuples (not exhaustive)",
                    members.len(),
                    v.checked
                )),
                (false, _) => Err(format!("nontrivial solution {:?}", v.violations[0])),
            }
        }
    }
}

fn check_packing(
    g: &Graph,
    patterns: &[String],
    disjointness: DisjointnessKind,
    copies: &[CopyEntry],
    epsilon: &Option<String>,
) -> Check {
    let pats: Vec<Graph> = patterns
        .iter()
        .map(|p| from_graph6(p))
        .collect::<Result<_>>()
        .map_err(|e| format!("pattern: {e}"))?;
    for (i, c) in copies.iter().enumerate() {
        let Some(p) = pats.get(c.member) else {
            return Err(format!("copy {i} names missing pattern {}", c.member));
        };
        if c.vertices.len() != p.n() || c.vertices.iter().any(|&v| v >= g.n()) {
            return Err(format!("copy {i} has a bad vertex list"));
        }
        let rec = CopyRecord {
            member: c.member,
            vertices: c.vertices.clone(),
            induced: c.induced,
        };
        if !rec.is_valid(g, p) {
            return Err(format!(
                "copy {i} is not a valid copy of pattern {}",
                c.member
            ));
        }
    }
    // recount the disjointness from scratch
    let mut owner: HashMap<(usize, usize), usize> = HashMap::new();
    for (i, c) in copies.iter().enumerate() {
        let vs = &c.vertices;
        let pairs: Vec<(usize, usize)> = match disjointness {
            DisjointnessKind::PairDisjoint => (0..vs.len())
                .flat_map(|a| (a + 1..vs.len()).map(move |b| (a, b)))
                .collect(),
            DisjointnessKind::EdgeDisjoint => pats[c.member].edges().collect(),
        };
        for (a, b) in pairs {
            let key = (vs[a].min(vs[b]), vs[a].max(vs[b]));
            if key.0 == key.1 {
                return Err(format!("copy {i} repeats vertex {}", key.0));
            }
            if let Some(j) = owner.insert(key, i) {
                return Err(format!("copy {i} shares pair {key:?} with copy {j}"));
            }
        }
    }
    let n = g.n() as i128;
    if let Some(e) = epsilon {
        let eps = parse_rational(e).map_err(|e| e.to_string())?;
        if Rational::from_integer(copies.len() as i128) < eps * n * n {
            return Err(format!(
                "{} copies, below epsilon n^2 = {}",
                copies.len(),
                format_rational(eps * n * n)
            ));
        }
    }
    Ok(format!("{} copies valid and disjoint", copies.len()))
}

fn check_layered(
    g: &Graph,
    h: usize,
    m: usize,
    set: &[u64],
    cliques: &[[u64; 2]],
    delta: &Option<String>,
) -> Check {
    let n = m * h * (h + 1) / 2;
    if g.n() != n {
        return Err(format!(
            "expected {n} vertices for h = {h}, m = {m}, got {}",
            g.n()
        ));
    }
    let offset = |j: usize| m * j * (j - 1) / 2;
    for j in 1..=h {
        let layer: Vec<usize> = (offset(j)..offset(j) + j * m).collect();
        if !g.is_independent(&layer) {
            return Err(format!("layer {j} is not independent"));
        }
    }
    let mut owner: HashMap<(usize, usize), usize> = HashMap::new();
    for (i, &[x, s]) in cliques.iter().enumerate() {
        if x == 0 || x > m as u64 || !set.contains(&s) {
            return Err(format!(
                "clique {i} has x = {x}, s = {s} outside 1..=m or the set"
            ));
        }
        let vs: Vec<usize> = (1..=h)
            .map(|j| offset(j) + (x + (j as u64 - 1) * s) as usize - 1)
            .collect();
        if !g.is_clique(&vs) {
            return Err(format!("clique {i} is missing an edge"));
        }
        for a in 0..h {
            for b in a + 1..h {
                if let Some(j) = owner.insert((vs[a], vs[b]), i) {
                    return Err(format!(
                        "cliques {j} and {i} share the edge ({}, {})",
                        vs[a], vs[b]
                    ));
                }
            }
        }
    }
    if owner.len() != g.edge_count() {
        return Err(format!(
            "cliques cover {} of {} edges",
            owner.len(),
            g.edge_count()
        ));
    }
    if cliques.len() != m * set.len() {
        return Err(format!(
            "{} cliques, expected m |S| = {}",
            cliques.len(),
            m * set.len()
        ));
    }
    if let Some(d) = delta {
        let d = parse_rational(d).map_err(|e| e.to_string())?;
        let nn = (n * n) as i128;
        if Rational::from_integer(cliques.len() as i128) < d * nn {
            return Err(format!("{} cliques, below delta n^2", cliques.len()));
        }
    }
    Ok(format!(
        "{h} independent layers, {} edge-disjoint cliques covering every edge",
        cliques.len()
    ))
}

/// Homomorphism certificate helper for callers holding a map.
pub fn homomorphism_certificate(target: &Graph, map: &HomMap) -> Certificate {
    Certificate::Homomorphism {
        target: to_graph6(target),
        map: map.assignment.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use removal_lab_core::construct::{c8_instance, rs_graph};
    use removal_lab_core::Limits;

    fn sidecar(g: &Graph, certs: Vec<Certificate>) -> Sidecar {
        Sidecar {
            schema_version: SCHEMA_VERSION,
            generator: "test".into(),
            graph: Some(GraphRef::of(g)),
            certificates: certs,
        }
    }

    #[test]
    fn layered_round_trip() {
        let r = rs_graph(3, Rational::new(1, 1000), Some(7), None, &Limits::default()).unwrap();
        let s = sidecar(
            &r.graph,
            vec![layered_certificate(&r, Some(Rational::new(1, 1000)))],
        );
        let back: Sidecar = serde_json::from_str(&s.to_json()).unwrap();
        assert_eq!(back, s);
        assert!(verify(Some(&r.graph), &back, 1_000_000).passed());
        let mut extra = r.graph.clone();
        extra.add_edge(0, 1);
        let v = verify(Some(&extra), &back, 1_000_000);
        assert!(!v.passed());
        assert!(v.lines[0].detail.contains("mismatch"));
    }

    #[test]
    fn packing_tamper_is_named() {
        let inst = c8_instance(300, Rational::new(1, 100_000), &Limits::default()).unwrap();
        let mut s = instance_sidecar(&inst, "c8".into());
        assert!(verify(Some(&inst.graph), &s, 0).passed());
        if let Certificate::Packing { copies, .. } = &mut s.certificates[0] {
            copies[3].vertices.swap(0, 1);
        }
        let v = verify(Some(&inst.graph), &s, 0);
        assert!(!v.lines[0].passed);
        assert!(
            v.lines[0].detail.contains("copy 3"),
            "{}",
            v.lines[0].detail
        );
    }

    #[test]
    fn empty_and_graphless() {
        let g = Graph::cycle(5);
        let v = verify(Some(&g), &sidecar(&g, vec![]), 0);
        assert!(v.passed());
        assert_eq!(v.warnings.len(), 1);
        let set = Sidecar {
            schema_version: SCHEMA_VERSION,
            generator: "behrend".into(),
            graph: None,
            certificates: vec![Certificate::ConvexFree {
                m: 5,
                k: 2,
                members: vec![1, 2, 4, 5],
            }],
        };
        assert!(verify(None, &set, 1000).passed());
        let bad = Sidecar {
            certificates: vec![Certificate::ConvexFree {
                m: 5,
                k: 2,
                members: vec![1, 2, 3],
            }],
            ..set
        };
        assert!(!verify(None, &bad, 1000).passed());
        let hom = sidecar(
            &g,
            vec![homomorphism_certificate(
                &Graph::complete(3),
                &HomMap {
                    assignment: vec![0, 1, 0, 1, 2],
                },
            )],
        );
        assert!(verify(Some(&g), &hom, 0).passed());
        assert!(!verify(None, &hom, 0).passed());
    }
}
