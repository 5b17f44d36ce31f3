// SPDX-License-Identifier: Apache-2.0

//! Brute-force oracles shared by the integration tests. None of them call into
//! the search code under test.

#![allow(dead_code)]

use proptest::prelude::*;
use removal_lab_core::Graph;

pub fn graph_from_bits(n: usize, bits: &[bool]) -> Graph {
    let mut g = Graph::new(n);
    let mut k = 0;
    for v in 1..n {
        for u in 0..v {
            if bits[k] {
                g.add_edge(u, v);
            }
            k += 1;
        }
    }
    g
}

pub fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * (n - 1) / 2)
            .prop_map(move |b| graph_from_bits(n, &b))
    })
}

pub fn arb_graph_n(n: usize) -> impl Strategy<Value = Graph> {
    prop::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |b| graph_from_bits(n, &b))
}

/// Calls `f` on every injective map `0..k -> 0..n`.
pub fn for_each_injection(n: usize, k: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn go(n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == k {
            return f(cur);
        }
        for v in 0..n {
            if !cur.contains(&v) {
                cur.push(v);
                if go(n, k, cur, f) {
                    return true;
                }
                cur.pop();
            }
        }
        false
    }
    go(n, k, &mut Vec::new(), f)
}

/// Every map `0..k -> 0..n`, stopping when `f` returns true.
pub fn for_each_map(n: usize, k: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    if k == 0 {
        return f(&[]);
    }
    if n == 0 {
        return false;
    }
    let mut cur = vec![0; k];
    loop {
        if f(&cur) {
            return true;
        }
        let mut i = 0;
        loop {
            cur[i] += 1;
            if cur[i] < n {
                break;
            }
            cur[i] = 0;
            i += 1;
            if i == k {
                return false;
            }
        }
    }
}

pub fn embeds(g: &Graph, h: &Graph, induced: bool) -> bool {
    for_each_injection(g.n(), h.n(), &mut |phi| {
        (0..h.n()).all(|i| {
            (i + 1..h.n()).all(|j| {
                let e = h.has_edge(i, j);
                let f = g.has_edge(phi[i], phi[j]);
                if induced {
                    e == f
                } else {
                    !e || f
                }
            })
        })
    })
}

pub fn count_injections(g: &Graph, h: &Graph, induced: bool) -> u64 {
    let mut c = 0;
    for_each_injection(g.n(), h.n(), &mut |phi| {
        let ok = (0..h.n()).all(|i| {
            (i + 1..h.n()).all(|j| {
                let e = h.has_edge(i, j);
                let f = g.has_edge(phi[i], phi[j]);
                if induced {
                    e == f
                } else {
                    !e || f
                }
            })
        });
        if ok {
            c += 1;
        }
        false
    });
    c
}

pub fn hom_exists(src: &Graph, dst: &Graph) -> bool {
    for_each_map(dst.n(), src.n(), &mut |f| {
        src.edges().all(|(u, v)| dst.has_edge(f[u], f[v]))
    })
}

/// Subsets of `0..n` as bitmasks.
pub fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n).map(move |m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
}

pub fn bipartite_oracle(g: &Graph) -> bool {
    subsets(g.n()).any(|a| g.edges().all(|(u, v)| a.contains(&u) != a.contains(&v)))
}

pub fn split_oracle(g: &Graph) -> bool {
    subsets(g.n()).any(|a| {
        let b: Vec<usize> = (0..g.n()).filter(|v| !a.contains(v)).collect();
        g.is_clique(&a) && g.is_independent(&b)
    })
}

/// Size of the smallest induced subgraph the graph maps onto.
pub fn core_size_oracle(g: &Graph) -> usize {
    let mut best = g.n();
    for s in subsets(g.n()) {
        if !s.is_empty() && s.len() < best && hom_exists(g, &g.induced_on(&s)) {
            best = s.len();
        }
    }
    best
}

/// Minimum number of pair toggles to a graph satisfying `free`, by scanning
/// all graphs on the same vertex set.
pub fn edit_distance_oracle(g: &Graph, free: &dyn Fn(&Graph) -> bool) -> usize {
    let n = g.n();
    let pairs = n * (n - 1) / 2;
    let base: Vec<bool> = g.upper_triangle_bits().collect();
    let mut best = usize::MAX;
    for m in 0u32..1 << pairs {
        let bits: Vec<bool> = (0..pairs).map(|i| m >> i & 1 == 1).collect();
        let d = bits.iter().zip(&base).filter(|(a, b)| a != b).count();
        if d < best && free(&graph_from_bits(n, &bits)) {
            best = d;
        }
    }
    best
}

pub fn upper_bits_order_matches(g: &Graph) -> bool {
    // `upper_triangle_bits` runs column by column, matching `graph_from_bits`
    let bits: Vec<bool> = g.upper_triangle_bits().collect();
    graph_from_bits(g.n(), &bits) == *g
}
