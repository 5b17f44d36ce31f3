// SPDX-License-Identifier: Apache-2.0

//! Homogeneous partitions: exact checkers for block partitions of the
//! adjacency matrix and for equipartitions, a refinement heuristic, a pattern
//! frequency probe, a checker for refined subsets and uniform-family
//! extraction.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{bail, Result};
use crate::graph::{
    check_delta, density_between, dominant_value, ratio, Equipartition, Graph, HomogeneityVerdict,
    Rational, VertexSet,
};
use crate::recognize::ramsey_pivots;
use crate::rng::{sample_distinct, seeded};

/// Row and column partitions of the adjacency matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPartition {
    pub rows: Vec<VertexSet>,
    pub cols: Vec<VertexSet>,
}

fn check_cover(parts: &[VertexSet], n: usize, side: &str) -> Result<()> {
    let mut seen = vec![false; n];
    for p in parts {
        if p.is_empty() {
            bail!(DegenerateSet, "empty {side} part");
        }
        p.check_within(n)?;
        for &v in p.members() {
            if seen[v] {
                bail!(Parameter, "{side} index {v} lies in two parts");
            }
            seen[v] = true;
        }
    }
    if let Some(v) = seen.iter().position(|&s| !s) {
        bail!(Parameter, "{side} index {v} is not covered");
    }
    Ok(())
}

impl BlockPartition {
    pub fn new(rows: Vec<VertexSet>, cols: Vec<VertexSet>, n: usize) -> Result<Self> {
        check_cover(&rows, n, "row")?;
        check_cover(&cols, n, "column")?;
        Ok(BlockPartition { rows, cols })
    }

    pub fn trivial(n: usize) -> Self {
        BlockPartition {
            rows: vec![VertexSet::all(n)],
            cols: vec![VertexSet::all(n)],
        }
    }

    pub fn singletons(n: usize) -> Self {
        let parts: Vec<VertexSet> = (0..n).map(|v| VertexSet::new([v])).collect();
        BlockPartition {
            rows: parts.clone(),
            cols: parts,
        }
    }
}

/// Verdict for one block `R_i × C_j` or one part pair `(Q_i, Q_j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellVerdict {
    pub i: usize,
    pub j: usize,
    pub density: Rational,
    pub weight: Rational,
    pub homogeneous: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneityReport {
    pub delta: Rational,
    pub non_homogeneous_weight: Rational,
    pub cells: Vec<CellVerdict>,
    pub pass: bool,
    pub warning: Option<String>,
}

impl HomogeneityReport {
    fn from_cells(delta: Rational, cells: Vec<CellVerdict>, warning: Option<String>) -> Self {
        let non_homogeneous_weight = cells
            .iter()
            .filter(|c| !c.homogeneous)
            .fold(Rational::from_integer(0), |acc, c| acc + c.weight);
        HomogeneityReport {
            delta,
            pass: non_homogeneous_weight <= delta,
            non_homogeneous_weight,
            cells,
            warning,
        }
    }

    pub fn failing(&self) -> impl Iterator<Item = &CellVerdict> {
        self.cells.iter().filter(|c| !c.homogeneous)
    }
}

/// Ones in the block `rows × cols`; diagonal entries are zero.
fn block_ones(g: &Graph, rows: &VertexSet, cols: &VertexSet) -> usize {
    let mask = cols.mask(g.n());
    rows.members()
        .iter()
        .map(|&u| g.degree_into(u, &mask))
        .sum()
}

/// Exact block weights over the adjacency matrix. Passes iff the blocks that
/// are not `delta`-homogeneous weigh at most `delta` in total.
pub fn check_block_partition(
    g: &Graph,
    p: &BlockPartition,
    delta: Rational,
) -> Result<HomogeneityReport> {
    check_delta(delta)?;
    let n = g.n() as u128;
    let mut cells = Vec::with_capacity(p.rows.len() * p.cols.len());
    for (i, r) in p.rows.iter().enumerate() {
        for (j, c) in p.cols.iter().enumerate() {
            let size = (r.len() * c.len()) as u128;
            if size == 0 {
                bail!(DegenerateSet, "block {i} x {j} is empty");
            }
            let density = ratio(block_ones(g, r, c) as u128, size);
            cells.push(CellVerdict {
                i,
                j,
                density,
                weight: ratio(size, n * n),
                homogeneous: HomogeneityVerdict::from_density(density, delta).is_delta_homogeneous,
            });
        }
    }
    Ok(HomogeneityReport::from_cells(delta, cells, None))
}

/// Weights over unordered pairs of distinct parts only. A single part makes
/// the condition vacuous; the report then passes with a warning.
pub fn check_equipartition(
    g: &Graph,
    q: &Equipartition,
    delta: Rational,
) -> Result<HomogeneityReport> {
    check_delta(delta)?;
    let n = g.n() as u128;
    let parts = q.parts();
    let mut cells = Vec::new();
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            let density = density_between(g, &parts[i], &parts[j])?;
            cells.push(CellVerdict {
                i,
                j,
                density,
                weight: ratio((parts[i].len() * parts[j].len()) as u128, n * n),
                homogeneous: HomogeneityVerdict::from_density(density, delta).is_delta_homogeneous,
            });
        }
    }
    let warning = (parts.len() < 2)
        .then(|| String::from("a single part has no pairs; homogeneity is vacuous"));
    Ok(HomogeneityReport::from_cells(delta, cells, warning))
}

fn hamming(g: &Graph, u: usize, w: usize, mask: &[u64]) -> u32 {
    g.row(u)
        .iter()
        .zip(g.row(w))
        .zip(mask)
        .map(|((a, b), m)| ((a ^ b) & m).count_ones())
        .sum()
}

/// Splits `part` around its first member and the member farthest from it,
/// comparing adjacency restricted to `against`. `None` if all members agree.
fn two_means(g: &Graph, part: &VertexSet, against: &VertexSet) -> Option<(VertexSet, VertexSet)> {
    let mask = against.mask(g.n());
    let vs = part.members();
    let pivot = *vs.first()?;
    let (far, dist) =
        vs.iter()
            .map(|&v| (v, hamming(g, pivot, v, &mask)))
            .fold(
                (pivot, 0),
                |best, cur| if cur.1 > best.1 { cur } else { best },
            );
    if dist == 0 {
        return None;
    }
    let (a, b): (Vec<usize>, Vec<usize>) = vs
        .iter()
        .partition(|&&v| hamming(g, pivot, v, &mask) <= hamming(g, far, v, &mask));
    Some((VertexSet::new(a), VertexSet::new(b)))
}

/// Iterative refinement from the trivial partition: the heaviest failing
/// block has its row part and its column part split by a two-centre cut.
/// Gives up once either side exceeds `max_parts`. Whatever it returns has
/// passed [`check_block_partition`].
pub fn find_homogeneous_partition(
    g: &Graph,
    delta: Rational,
    max_parts: usize,
) -> Result<Option<(BlockPartition, HomogeneityReport)>> {
    check_delta(delta)?;
    if g.n() == 0 {
        return Ok(None);
    }
    let mut p = BlockPartition::trivial(g.n());
    loop {
        let report = check_block_partition(g, &p, delta)?;
        if report.pass {
            return Ok(Some((p, report)));
        }
        let worst = report
            .failing()
            .fold(None::<&CellVerdict>, |best, c| match best {
                Some(b) if b.weight >= c.weight => Some(b),
                _ => Some(c),
            })
            .expect("a failing report has a failing block");
        let (i, j) = (worst.i, worst.j);
        let row_split = two_means(g, &p.rows[i], &p.cols[j]);
        let col_split = two_means(g, &p.cols[j], &p.rows[i]);
        if row_split.is_none() && col_split.is_none() {
            // a block with identical rows and identical columns is constant
            bail!(Consistency, "failing block {i} x {j} admits no split");
        }
        if let Some((a, b)) = row_split {
            p.rows[i] = a;
            p.rows.insert(i + 1, b);
        }
        if let Some((a, b)) = col_split {
            p.cols[j] = a;
            p.cols.insert(j + 1, b);
        }
        if p.rows.len() > max_parts || p.cols.len() > max_parts {
            return Ok(None);
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProbeOutcome {
    /// A homogeneous partition was found; no sampling happened.
    Partition(BlockPartition, HomogeneityReport),
    Patterns(PatternFrequencies),
}

/// Hit counts for every `k × k` 0/1 pattern over sampled row and column
/// tuples. Pattern bit `i k + j` is entry `(r_i, c_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternFrequencies {
    pub k: usize,
    pub trials: u64,
    pub hits: Vec<u64>,
}

impl PatternFrequencies {
    pub fn frequency(&self, pattern: usize) -> f64 {
        self.hits[pattern] as f64 / self.trials.max(1) as f64
    }

    /// Least frequent pattern, lowest index on ties.
    pub fn min_pattern(&self) -> (usize, f64) {
        let (idx, _) = self
            .hits
            .iter()
            .enumerate()
            .min_by_key(|&(i, &h)| (h, i))
            .expect("at least one pattern");
        (idx, self.frequency(idx))
    }
}

/// Samples `2k` distinct vertices per trial; the first `k`, sorted, are the
/// rows and the other `k`, sorted, the columns.
pub fn pattern_frequencies(
    g: &Graph,
    k: usize,
    trials: u64,
    seed: u64,
) -> Result<PatternFrequencies> {
    if k == 0 || k > 3 {
        bail!(Scale, "pattern sweep supports 1 <= k <= 3, got {k}");
    }
    if g.n() < 2 * k {
        bail!(
            Parameter,
            "need at least {} vertices, graph has {}",
            2 * k,
            g.n()
        );
    }
    let mut rng = seeded(seed);
    let mut hits = vec![0u64; 1 << (k * k)];
    for _ in 0..trials {
        let s = sample_distinct(&mut rng, g.n(), 2 * k);
        let mut rows = s[..k].to_vec();
        let mut cols = s[k..].to_vec();
        rows.sort_unstable();
        cols.sort_unstable();
        let mut pat = 0;
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                if g.has_edge(r, c) {
                    pat |= 1 << (i * k + j);
                }
            }
        }
        hits[pat] += 1;
    }
    Ok(PatternFrequencies { k, trials, hits })
}

/// Tries the partition branch first and samples patterns only if it fails.
pub fn afn_dichotomy_probe(
    g: &Graph,
    k: usize,
    delta: Rational,
    max_parts: usize,
    trials: u64,
    seed: u64,
) -> Result<ProbeOutcome> {
    if k == 0 || k > 3 {
        bail!(Scale, "pattern sweep supports 1 <= k <= 3, got {k}");
    }
    if let Some((p, r)) = find_homogeneous_partition(g, delta, max_parts)? {
        return Ok(ProbeOutcome::Partition(p, r));
    }
    Ok(ProbeOutcome::Patterns(pattern_frequencies(
        g, k, trials, seed,
    )?))
}

/// Result of checking subsets `U_i ⊆ Q_i` against the three refinement
/// conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinementReport {
    /// Pairs where `(Q_i, Q_j)` is not `delta`-homogeneous or `(U_i, U_j)`
    /// has a different dominant value.
    pub exceptional_pairs: Vec<(usize, usize)>,
    /// `delta q^2`.
    pub allowed_exceptions: Rational,
    pub condition1: bool,
    /// Pairs `(U_i, U_j)` that are not `gamma`-homogeneous.
    pub inhomogeneous_subset_pairs: Vec<(usize, usize)>,
    pub condition2: bool,
    pub condition3: bool,
}

impl RefinementReport {
    pub fn passed(&self) -> bool {
        self.condition1 && self.condition2 && self.condition3
    }
}

/// Pure checker: (1) at most `delta q^2` exceptional pairs, (2) every
/// `(U_i, U_j)` is `gamma`-homogeneous, (3) every `|U_i| >= min_size`.
pub fn check_refinement(
    g: &Graph,
    q: &Equipartition,
    u: &[VertexSet],
    delta: Rational,
    gamma: Rational,
    min_size: usize,
) -> Result<RefinementReport> {
    check_delta(delta)?;
    check_delta(gamma)?;
    let parts = q.parts();
    if u.len() != parts.len() {
        bail!(Parameter, "{} subsets for {} parts", u.len(), parts.len());
    }
    for (i, (ui, qi)) in u.iter().zip(parts).enumerate() {
        if !ui.is_subset(qi) {
            bail!(Parameter, "U_{i} is not contained in Q_{i}");
        }
    }
    let mut exceptional = Vec::new();
    let mut inhomogeneous = Vec::new();
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            let dq = density_between(g, &parts[i], &parts[j])?;
            let du = density_between(g, &u[i], &u[j])?;
            let q_hom = HomogeneityVerdict::from_density(dq, delta).is_delta_homogeneous;
            if !q_hom || dominant_value(dq) != dominant_value(du) {
                exceptional.push((i, j));
            }
            if !HomogeneityVerdict::from_density(du, gamma).is_delta_homogeneous {
                inhomogeneous.push((i, j));
            }
        }
    }
    let qn = parts.len() as i128;
    let allowed = delta * qn * qn;
    Ok(RefinementReport {
        condition1: Rational::from_integer(exceptional.len() as i128) <= allowed,
        exceptional_pairs: exceptional,
        allowed_exceptions: allowed,
        condition2: inhomogeneous.is_empty(),
        inhomogeneous_subset_pairs: inhomogeneous,
        condition3: u.iter().all(|s| s.len() >= min_size),
    })
}

/// Whether the sets in a uniform family are pairwise dense or pairwise sparse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Uniformity {
    Dense,
    Sparse,
}

/// `m` disjoint sets with all pair densities `>= 1 - alpha` or all
/// `<= alpha`. Tries contiguous equipartitions into `w = 4^m, 2w, 4w, ...`
/// parts (and finally `n`), links parts whose pair is `alpha`-homogeneous,
/// grows a greedy clique of `4^m` parts, colours it by dominant value and
/// extracts a monochromatic `m`-set by the pivot recursion.
pub fn find_uniform_family(
    g: &Graph,
    m: usize,
    alpha: Rational,
) -> Result<Option<(Vec<VertexSet>, Uniformity)>> {
    check_delta(alpha)?;
    if m == 0 {
        bail!(Parameter, "m must be positive");
    }
    let n = g.n();
    let Some(need) = 4usize.checked_pow(m as u32).filter(|&w| w <= n) else {
        return Ok(None);
    };
    let mut widths = Vec::new();
    let mut w = need;
    while w < n {
        widths.push(w);
        w *= 2;
    }
    widths.push(n);
    for w in widths {
        let q = Equipartition::contiguous(n, w)?;
        let parts = q.parts();
        let mut dens = vec![vec![Rational::from_integer(0); w]; w];
        for i in 0..w {
            for j in i + 1..w {
                let d = density_between(g, &parts[i], &parts[j])?;
                dens[i][j] = d;
                dens[j][i] = d;
            }
        }
        let hom = |i: usize, j: usize| {
            HomogeneityVerdict::from_density(dens[i][j], alpha).is_delta_homogeneous
        };
        let mut clique: Vec<usize> = Vec::new();
        for i in 0..w {
            if clique.iter().all(|&c| hom(c, i)) {
                clique.push(i);
                if clique.len() == need {
                    break;
                }
            }
        }
        if clique.len() < need {
            continue;
        }
        let mut colour = Graph::new(need);
        for a in 0..need {
            for b in a + 1..need {
                if dominant_value(dens[clique[a]][clique[b]]) == 1 {
                    colour.add_edge(a, b);
                }
            }
        }
        let (dense, sparse) = ramsey_pivots(&colour, &VertexSet::all(need));
        let (pick, kind) = if dense.len() >= m {
            (dense, Uniformity::Dense)
        } else if sparse.len() >= m {
            (sparse, Uniformity::Sparse)
        } else {
            continue;
        };
        let chosen: Vec<usize> = pick.members()[..m].iter().map(|&a| clique[a]).collect();
        let one = Rational::from_integer(1);
        let ok = chosen.iter().enumerate().all(|(a, &i)| {
            chosen[a + 1..].iter().all(|&j| match kind {
                Uniformity::Dense => dens[i][j] >= one - alpha,
                Uniformity::Sparse => dens[i][j] <= alpha,
            })
        });
        if !ok {
            bail!(
                Consistency,
                "{}",
                format!("extracted family fails the {kind:?} check")
            );
        }
        return Ok(Some((
            chosen.iter().map(|&i| parts[i].clone()).collect(),
            kind,
        )));
    }
    Ok(None)
}
