// SPDX-License-Identifier: Apache-2.0

mod common;

use common::*;
use proptest::prelude::*;
use removal_lab_core::construct::{
    behrend_set, rs_graph, stray_layered_cycle, verify_convex_free, verify_layered,
    LayeredCliqueGraph,
};
use removal_lab_core::count::{
    agreement, count_copies, count_induced_bipartite_copies_across, greedy_pair_disjoint_packing,
    tuple_collection, CopyMode,
};
use removal_lab_core::graph::{blowup, density_between, density_within};
use removal_lab_core::homomorphism::{core, find_homomorphism, is_isomorphic};
use removal_lab_core::partition::{
    check_block_partition, find_homogeneous_partition, BlockPartition,
};
use removal_lab_core::recognize::{
    is_bipartite, is_cobipartite, is_split, ramsey_homogeneous_set, vc_dimension,
    verify_bipartite_obstruction, BipartitePattern,
};
use removal_lab_core::tester::{
    detection_probability, epsilon_far_lower_bound, exact_edit_distance, sample_tester,
};
use removal_lab_core::{BlowupSpec, Graph, GraphFamily, Limits, MatchMode, Rational, VertexSet};

fn lim() -> Limits {
    Limits::default()
}

fn split_at_mask(n: usize, mask: u32) -> (VertexSet, VertexSet) {
    let a = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
    let b = (0..n).filter(|&i| mask >> i & 1 == 0).collect();
    (a, b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn density_matches_pair_count(g in arb_graph(10), mask in any::<u32>()) {
        let (x, y) = split_at_mask(g.n(), mask);
        prop_assume!(!x.is_empty() && !y.is_empty());
        let d = density_between(&g, &x, &y).unwrap();
        let hits = x.members().iter()
            .flat_map(|&u| y.members().iter().map(move |&v| (u, v)))
            .filter(|&(u, v)| g.has_edge(u, v))
            .count();
        prop_assert_eq!(d, Rational::new(hits as i128, (x.len() * y.len()) as i128));
        prop_assert!(d >= Rational::from_integer(0) && d <= Rational::from_integer(1));
        if x.len() >= 2 {
            let pairs = x.len() * (x.len() - 1) / 2;
            let inside = g.induced_subgraph(&x).unwrap().edge_count();
            prop_assert_eq!(density_within(&g, &x).unwrap(), Rational::new(inside as i128, pairs as i128));
        }
    }

    #[test]
    fn dense_pairs_pass_density_to_large_subsets(
        a in 4usize..12, b in 4usize..12,
        missing in prop::collection::vec((0usize..12, 0usize..12), 0..6),
        beta_num in 2i128..50, gamma_frac in 1i128..100,
        shrink_x in 0usize..12, shrink_y in 0usize..12, seed in any::<u64>(),
    ) {
        // X = 0..a, Y = a..a+b, nearly complete between them
        let mut g = Graph::new(a + b);
        for u in 0..a { for v in a..a + b { g.add_edge(u, v); } }
        for &(u, v) in &missing { g.remove_edge(u % a, a + v % b); }
        let x = VertexSet::range(0, a);
        let y = VertexSet::range(a, a + b);
        let beta = Rational::new(beta_num, 100);
        let d = density_between(&g, &x, &y).unwrap();
        // the smallest gamma the pair satisfies, scaled into (0, beta]
        let gamma = (Rational::from_integer(1) - d).max(beta * Rational::new(gamma_frac, 100));
        prop_assume!(gamma < beta);
        // |X'|^2 >= (gamma / beta) |X|^2, compared exactly
        let least = |whole: usize| (1..=whole)
            .find(|&k| Rational::from_integer((k * k) as i128) * beta
                >= gamma * Rational::from_integer((whole * whole) as i128))
            .unwrap();
        let kx = least(a) + shrink_x % (a - least(a) + 1);
        let ky = least(b) + shrink_y % (b - least(b) + 1);
        let px = permutation(a, seed);
        let py = permutation(b, seed ^ 1);
        let x2: VertexSet = px[..kx].iter().copied().collect();
        let y2: VertexSet = py[..ky].iter().map(|&i| a + i).collect();
        prop_assert!(density_between(&g, &x2, &y2).unwrap() >= Rational::from_integer(1) - beta);
        // the sparse side mirrors it through the complement
        let gc = g.complement();
        prop_assert!(density_between(&gc, &x2, &y2).unwrap() <= beta);
    }

    #[test]
    fn blowup_representatives_recover_base(f in arb_graph(5), s in 1usize..4) {
        let spec = BlowupSpec::plain(f.clone(), s);
        let g = blowup(&spec).unwrap();
        let reps: Vec<usize> = spec.offsets().into_iter().take(f.n()).collect();
        prop_assert_eq!(g.induced_on(&reps), f);
    }

    #[test]
    fn complement_involution(g in arb_graph(12), mask in any::<u32>()) {
        prop_assert_eq!(g.complement().complement(), g.clone());
        let (x, _) = split_at_mask(g.n(), mask);
        prop_assume!(!x.is_empty());
        prop_assert_eq!(
            g.induced_subgraph(&x).unwrap().complement(),
            g.complement().induced_subgraph(&x).unwrap()
        );
    }

    #[test]
    fn cobipartite_is_bipartite_complement(g in arb_graph(8)) {
        let co = is_cobipartite(&g);
        prop_assert_eq!(co.is_some(), is_bipartite(&g.complement()).is_some());
        prop_assert_eq!(co.is_some(), bipartite_oracle(&g.complement()));
        if let Some((a, b)) = co {
            prop_assert!(g.is_clique(a.members()) && g.is_clique(b.members()));
            prop_assert_eq!(a.len() + b.len(), g.n());
        }
    }

    #[test]
    fn split_matches_oracles(g in arb_graph(8)) {
        let forbidden = [Graph::cycle(5), Graph::cycle(4), Graph::cycle(4).complement()];
        let free = forbidden.iter().all(|h| !embeds(&g, h, true));
        let got = is_split(&g);
        prop_assert_eq!(got.is_some(), free);
        if g.n() <= 7 {
            prop_assert_eq!(got.is_some(), split_oracle(&g));
        }
        if let Some((k, i)) = got {
            prop_assert!(g.is_clique(k.members()) && g.is_independent(i.members()));
        }
    }

    #[test]
    fn ramsey_sets_are_homogeneous(k in 1usize..5, seed in any::<u64>()) {
        let n = 4usize.pow(k as u32);
        let g = random_graph(n, seed);
        let x = ramsey_homogeneous_set(&g, k).unwrap();
        prop_assert!(x.len() >= k);
        prop_assert!(g.is_clique(x.members()) || g.is_independent(x.members()));
    }

    #[test]
    fn vc_dimension_is_transpose_symmetric(g in arb_graph(8), perm_seed in any::<u64>()) {
        // the adjacency matrix is symmetric, so relabelling must not matter either
        let d = vc_dimension(&g, &lim()).unwrap();
        prop_assert_eq!(d, vc_dimension(&g.relabel(&permutation(g.n(), perm_seed)), &lim()).unwrap());
        prop_assert_eq!(d, vc_oracle_columns(&g));
    }

    #[test]
    fn greedy_completion_refutes_obstruction(cross in prop::collection::vec(any::<bool>(), 4), fill in any::<bool>()) {
        let h = BipartitePattern::new(2, 2, cross).unwrap();
        let f = GraphFamily::new(vec![Graph::cycle(4), Graph::path(4)]).unwrap();
        let mask = if fill { (1u64 << h.free_pairs()) - 1 } else { 0 };
        let completion = h.completion(mask);
        let avoids = f.graphs().iter().all(|m| !embeds(&completion, m, true));
        if avoids {
            prop_assert!(!verify_bipartite_obstruction(&h, &f, &lim()).unwrap());
        }
    }

    #[test]
    fn homomorphisms_preserve_edges(a in arb_graph(6), b in arb_graph(5)) {
        let got = find_homomorphism(&a, &b, &lim()).unwrap();
        prop_assert_eq!(got.is_some(), hom_exists(&a, &b));
        if let Some(f) = got {
            prop_assert!(f.is_valid(&a, &b));
        }
    }

    #[test]
    fn cores_are_minimal_and_idempotent(g in arb_graph(8)) {
        let c = core(&g, &lim()).unwrap();
        prop_assert!(c.retraction.is_valid(&g, &c.core));
        prop_assert_eq!(c.core.n(), core_size_oracle(&g));
        let again = core(&c.core, &lim()).unwrap();
        prop_assert!(is_isomorphic(&again.core, &c.core));
        prop_assert_eq!(again.core.n(), c.core.n());
        // every endomorphism of the core is a bijection
        let k = c.core.n();
        for_each_map(k, k, &mut |f| {
            if c.core.edges().all(|(u, v)| c.core.has_edge(f[u], f[v])) {
                let mut seen = f.to_vec();
                seen.sort_unstable();
                seen.dedup();
                assert_eq!(seen.len(), k);
            }
            false
        });
    }

    #[test]
    fn induced_count_below_subgraph_count(g in arb_graph(7), h in arb_graph(4)) {
        let ind = count_copies(&g, &h, CopyMode::Induced, &lim()).unwrap();
        let sub = count_copies(&g, &h, CopyMode::Subgraph, &lim()).unwrap();
        prop_assert!(ind <= sub);
        prop_assert_eq!(count_copies(&g, &Graph::complete(2), CopyMode::Subgraph, &lim()).unwrap(), g.edge_count().into());
        let aut = count_injections(&h, &h, true);
        prop_assert_eq!(ind, (count_injections(&g, &h, true) / aut).into());
        prop_assert_eq!(sub, (count_injections(&g, &h, false) / aut).into());
    }

    #[test]
    fn bipartite_counts_ignore_within_side_edges(
        g in arb_graph_n(8), mask in 1u32..255,
        toggles in prop::collection::vec((0usize..8, 0usize..8), 0..10),
        cross in prop::collection::vec(any::<bool>(), 4),
    ) {
        let (a, b) = split_at_mask(8, mask);
        let h = BipartitePattern::new(2, 2, cross).unwrap();
        let before = count_induced_bipartite_copies_across(&g, &h, &a, &b, &lim()).unwrap();
        let mut edited = g.clone();
        for (u, v) in toggles {
            if u != v && a.contains(u) == a.contains(v) {
                edited.toggle_edge(u, v);
            }
        }
        prop_assert_eq!(before, count_induced_bipartite_copies_across(&edited, &h, &a, &b, &lim()).unwrap());
    }

    #[test]
    fn packings_verify_and_bound_edit_distance(g in arb_graph(6)) {
        let k3 = Graph::complete(3);
        let p = greedy_pair_disjoint_packing(&g, &k3, CopyMode::Induced, &lim()).unwrap();
        prop_assert_eq!(p.verify(&g, std::slice::from_ref(&k3)), Ok(()));
        let f = GraphFamily::new(vec![k3.clone()]).unwrap();
        let exact = exact_edit_distance(&g, &f, &lim()).unwrap();
        prop_assert!(p.len() as u64 <= exact.value);
        let lb = epsilon_far_lower_bound(&g, &f, &lim()).unwrap().0;
        prop_assert!(lb.value <= exact.value);
        prop_assert_eq!(exact.value as usize, edit_distance_oracle(&g, &|h| !embeds(h, &k3, true)));
    }

    #[test]
    fn tester_never_rejects_free_graphs(g in arb_graph(10), q in 1usize..10, seed in any::<u64>()) {
        let f = GraphFamily::new(vec![Graph::complete(3), Graph::path(4)]).unwrap();
        prop_assume!(f.is_free(&g, &lim()).unwrap());
        let q = q.min(g.n());
        prop_assert!(!sample_tester(&g, &f, q, seed, &lim()).unwrap().rejected());
        prop_assert_eq!(detection_probability(&g, &f, q, 20, seed, &lim()).unwrap().rejections, 0);
    }

    #[test]
    fn singleton_partition_always_passes(g in arb_graph(64), delta_num in 1i128..49) {
        let delta = Rational::new(delta_num, 100);
        let r = check_block_partition(&g, &BlockPartition::singletons(g.n()), delta).unwrap();
        prop_assert!(r.pass);
        if let Some((p, rep)) = find_homogeneous_partition(&g, delta, 64).unwrap() {
            let again = check_block_partition(&g, &p, delta).unwrap();
            prop_assert!(again.pass);
            prop_assert_eq!(again, rep);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn tuple_collections_meet_bound(m in 1usize..=12, h in 2usize..=4) {
        let t = tuple_collection(m, h);
        let need = (m * m).div_ceil(h * h);
        prop_assert!(t.len() >= need);
        for (i, a) in t.iter().enumerate() {
            prop_assert_eq!(a.len(), h);
            prop_assert!(a.iter().all(|&v| (1..=m).contains(&v)));
            for b in &t[i + 1..] {
                prop_assert!(agreement(a, b) <= 1);
            }
        }
        // lexicographic greedy over every tuple
        let mut greedy: Vec<Vec<usize>> = Vec::new();
        let mut cur = vec![1; h];
        loop {
            if greedy.iter().all(|g| agreement(g, &cur) <= 1) {
                greedy.push(cur.clone());
            }
            let Some(pos) = (0..h).rev().find(|&p| cur[p] < m) else { break };
            cur[pos] += 1;
            for c in &mut cur[pos + 1..] {
                *c = 1;
            }
        }
        prop_assert_eq!(t, greedy);
    }

    #[test]
    fn behrend_sets_are_convex_free(m in 1u64..=2000, k in 2u64..=4) {
        let Ok(s) = behrend_set(m, k) else { return Ok(()); };
        prop_assert!(s.members.iter().all(|&x| (1..=m).contains(&x)));
        let v = verify_convex_free(&s.members, k, u64::MAX);
        prop_assert!(v.exhaustive);
        prop_assert!(v.passed());
        prop_assert!(brute_convex_free(&s.members, k));
    }

    #[test]
    fn layered_cycles_stay_in_one_clique(h in 3usize..=5, m in 2usize..=12) {
        let r = rs_graph(h, Rational::new(1, 1_000_000), Some(m), Some(50), &lim()).unwrap();
        let rep = verify_layered(&r, true).unwrap();
        prop_assert!(rep.passed());
        prop_assert_eq!(rep.clique_count, r.m * r.set.len());
        prop_assert!(stray_layered_cycle(&r).unwrap().is_none());
        check_registry_by_hand(&r);
    }
}

#[test]
fn odd_cycle_hom_order() {
    for k in 1..=5usize {
        for l in 1..=5usize {
            let src = Graph::cycle(2 * l + 1);
            let dst = Graph::cycle(2 * k + 1);
            let got = find_homomorphism(&src, &dst, &lim()).unwrap().is_some();
            assert_eq!(got, l >= k, "C{} -> C{}", 2 * l + 1, 2 * k + 1);
        }
    }
}

#[test]
fn detection_grows_with_sample_size() {
    // shared-prefix sampling couples q and q + 1 trial by trial
    let g = random_graph(40, 11);
    let f = GraphFamily::with_modes(vec![(Graph::complete(4), MatchMode::Subgraph)]).unwrap();
    let mut last = 0;
    for q in 4..=16 {
        let r = detection_probability(&g, &f, q, 200, 5, &lim()).unwrap();
        assert!(r.rejections >= last, "q = {q}");
        last = r.rejections;
    }
}

fn random_graph(n: usize, seed: u64) -> Graph {
    use rand::Rng;
    let mut rng = removal_lab_core::rng::seeded(seed);
    let mut g = Graph::new(n);
    for v in 1..n {
        for u in 0..v {
            if rng.random_bool(0.5) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

fn permutation(n: usize, seed: u64) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(&mut removal_lab_core::rng::seeded(seed));
    p
}

/// VC dimension of the adjacency matrix read column-wise, by brute force.
fn vc_oracle_columns(g: &Graph) -> usize {
    let n = g.n();
    let mut best = 0;
    for rows in subsets(n) {
        let d = rows.len();
        if d <= best {
            continue;
        }
        let mut seen = std::collections::HashSet::new();
        for c in 0..n {
            let sig: Vec<bool> = rows.iter().map(|&r| g.has_edge(c, r)).collect();
            seen.insert(sig);
        }
        if seen.len() == 1 << d {
            best = d;
        }
    }
    best
}

/// Direct search for a nontrivial solution of a weighted-average equation.
fn brute_convex_free(s: &[u64], k: u64) -> bool {
    // a_1 s_1 + ... + a_l s_l = (a_1 + ... + a_l) t, distinct s_i, l >= 2
    fn go(s: &[u64], k: u64, from: usize, used: u64, weight: u64, sum: u64, terms: usize) -> bool {
        if terms >= 2 && sum.is_multiple_of(weight) && s.binary_search(&(sum / weight)).is_ok() {
            return false;
        }
        for i in from..s.len() {
            for a in 1..=k - used {
                if !go(s, k, i + 1, used + a, weight + a, sum + a * s[i], terms + 1) {
                    return false;
                }
            }
        }
        true
    }
    if s.len() > 60 {
        // only the weight-2 case is cheap enough here: no three-term progression
        return s.iter().all(|&x| {
            s.iter()
                .filter(|&&y| y > x)
                .all(|&y| (x + y) % 2 == 1 || s.binary_search(&((x + y) / 2)).is_err())
        });
    }
    go(s, k, 0, 0, 0, 0, 0)
}

/// Recomputes each registry clique from its defining arithmetic and checks
/// the cliques pairwise.
fn check_registry_by_hand(r: &LayeredCliqueGraph) {
    let mut owner = std::collections::HashMap::new();
    for (idx, &(x, s)) in r.cliques.iter().enumerate() {
        let vs: Vec<usize> = (1..=r.h)
            .map(|j| r.offset(j) + (x + (j as u64 - 1) * s) as usize - 1)
            .collect();
        assert_eq!(vs, r.clique_vertices(idx));
        assert!(r.graph.is_clique(&vs));
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                assert!(
                    owner.insert((vs[i], vs[j]), idx).is_none(),
                    "pair shared by two cliques"
                );
            }
        }
    }
    assert_eq!(owner.len(), r.graph.edge_count());
}
