// SPDX-License-Identifier: Apache-2.0

/// Caps on the exhaustive kernels. Every operation that enumerates refuses
/// inputs beyond its cap with [`crate::Error::Scale`] instead of running
/// unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Search-tree nodes any single backtracking run may expand.
    pub backtrack_nodes: u64,
    /// Completions `verify_bipartite_obstruction` may enumerate.
    pub completions: u64,
    /// Largest pattern order for copy counting.
    pub pattern_vertices: usize,
    /// Largest host order for `vc_dimension`.
    pub vc_vertices: usize,
    /// Largest source order for homomorphism search.
    pub hom_source: usize,
    /// Largest target order for homomorphism search.
    pub hom_target: usize,
    /// Largest graph order for core computation.
    pub core_vertices: usize,
    /// Largest graph order for `exact_edit_distance`.
    pub edit_vertices: usize,
    /// Work budget (tuples examined) for exhaustive convex-freeness checks.
    pub convex_work: u64,
    /// Largest vertex count of a generated layered clique graph.
    pub construct_vertices: usize,
    /// Largest vertex count of a generated blowup instance.
    pub instance_vertices: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            backtrack_nodes: 2_000_000_000,
            completions: 1 << 22,
            pattern_vertices: 8,
            vc_vertices: 24,
            hom_source: 32,
            hom_target: 12,
            core_vertices: 12,
            edit_vertices: 7,
            convex_work: 200_000_000,
            construct_vertices: 20_000,
            instance_vertices: 20_000,
        }
    }
}
