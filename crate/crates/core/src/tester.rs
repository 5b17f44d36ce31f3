// SPDX-License-Identifier: Apache-2.0

//! The sampling tester, Monte-Carlo detection rates, farness certificates and
//! the sampling experiments.

use alloc::string::String;
use alloc::vec::Vec;

use crate::count::{
    count_induced_bipartite_copies, find_induced_copy, has_induced_bipartite_copy, pack_into,
    CopyMode, CopyRecord, Packing,
};
use crate::error::{bail, Error, Result};
use crate::graph::{blowup, density_between, ratio, BlowupSpec, Graph, Rational, VertexSet};
use crate::homomorphism::find_homomorphism;
use crate::limits::Limits;
use crate::recognize::{BipartitePattern, GraphFamily, MatchMode};
use crate::rng::{sample_distinct, seeded, trial_rng};
use crate::stats::wilson_interval;

/// The detection threshold of the tester definition.
pub const THRESHOLD: f64 = 2.0 / 3.0;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleOutcome {
    /// Sampled vertices in draw order.
    pub sample: Vec<usize>,
    /// A copy of a family member inside the sample, in host vertex ids.
    pub witness: Option<CopyRecord>,
}

impl SampleOutcome {
    pub fn rejected(&self) -> bool {
        self.witness.is_some()
    }
}

fn check_q(g: &Graph, q: usize) -> Result<()> {
    if q > g.n() {
        bail!(Parameter, "sample size {q} exceeds the {} vertices", g.n());
    }
    Ok(())
}

fn run_sample(
    g: &Graph,
    f: &GraphFamily,
    sample: Vec<usize>,
    limits: &Limits,
) -> Result<SampleOutcome> {
    let x: VertexSet = sample.iter().copied().collect();
    let witness = find_induced_copy(g, f, Some(&x), limits)?;
    Ok(SampleOutcome { sample, witness })
}

/// Draws `q` distinct vertices and rejects iff they span a family member.
pub fn sample_tester(
    g: &Graph,
    f: &GraphFamily,
    q: usize,
    seed: u64,
    limits: &Limits,
) -> Result<SampleOutcome> {
    check_q(g, q)?;
    let mut rng = seeded(seed);
    run_sample(g, f, sample_distinct(&mut rng, g.n(), q), limits)
}

/// Trial `index` of a detection run: its own stream of the seeded generator.
/// Samples of different sizes under the same seed and index share a prefix.
pub fn trial(
    g: &Graph,
    f: &GraphFamily,
    q: usize,
    seed: u64,
    index: u64,
    limits: &Limits,
) -> Result<SampleOutcome> {
    check_q(g, q)?;
    let mut rng = trial_rng(seed, index);
    run_sample(g, f, sample_distinct(&mut rng, g.n(), q), limits)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestReport {
    pub q: usize,
    pub trials: u64,
    pub rejections: u64,
    pub seed: u64,
    pub family: String,
    pub instance: String,
}

impl TestReport {
    pub fn frequency(&self) -> f64 {
        self.rejections as f64 / self.trials as f64
    }

    /// Two-sided 95% Wilson interval.
    pub fn interval(&self) -> (f64, f64) {
        wilson_interval(self.rejections, self.trials)
    }

    /// Whether the lower Wilson bound reaches the detection threshold.
    pub fn detects(&self) -> bool {
        self.interval().0 >= THRESHOLD
    }
}

/// Repeats [`trial`] for indices `0..trials`.
pub fn detection_probability(
    g: &Graph,
    f: &GraphFamily,
    q: usize,
    trials: u64,
    seed: u64,
    limits: &Limits,
) -> Result<TestReport> {
    if trials == 0 {
        bail!(Parameter, "need at least one trial");
    }
    let mut rejections = 0;
    for i in 0..trials {
        if trial(g, f, q, seed, i, limits)?.rejected() {
            rejections += 1;
        }
    }
    Ok(TestReport {
        q,
        trials,
        rejections,
        seed,
        family: String::new(),
        instance: String::new(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FarnessKind {
    PackingLowerBound,
    Exact,
}

/// A bound on the number of edge edits needed to make a graph free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FarnessCertificate {
    pub kind: FarnessKind,
    pub value: u64,
    pub n: usize,
}

impl FarnessCertificate {
    /// `value / n^2`.
    pub fn epsilon_equivalent(&self) -> Rational {
        if self.n == 0 {
            return Rational::from_integer(0);
        }
        ratio(self.value as u128, (self.n as u128).pow(2))
    }
}

/// Greedy pair-disjoint packing of every member; the largest one certifies
/// that many edits, since each edit touches one pair and so one copy.
pub fn epsilon_far_lower_bound(
    g: &Graph,
    f: &GraphFamily,
    limits: &Limits,
) -> Result<(FarnessCertificate, Packing)> {
    let mut best: Option<Packing> = None;
    for (idx, member) in f.entries().iter().enumerate() {
        let mut used = Graph::new(g.n());
        let copies = pack_into(
            g,
            &member.graph,
            CopyMode::from(member.mode),
            idx,
            &mut used,
            limits,
        )?;
        if best.as_ref().is_none_or(|b| copies.len() > b.len()) {
            best = Some(Packing {
                copies,
                disjointness: crate::count::Disjointness::PairDisjoint,
            });
        }
    }
    let packing = best.expect("families are non-empty");
    Ok((
        FarnessCertificate {
            kind: FarnessKind::PackingLowerBound,
            value: packing.len() as u64,
            n: g.n(),
        },
        packing,
    ))
}

/// Re-verifies a shipped packing and turns it into a certificate.
pub fn certificate_from_packing(
    g: &Graph,
    packing: &Packing,
    patterns: &[Graph],
) -> Result<FarnessCertificate> {
    if let Err(i) = packing.verify(g, patterns) {
        bail!(Consistency, "packing copy {i} fails verification");
    }
    Ok(FarnessCertificate {
        kind: FarnessKind::PackingLowerBound,
        value: packing.len() as u64,
        n: g.n(),
    })
}

/// Fewest pair toggles making `g` free of `f`, trying edit sets by increasing
/// size from the packing bound upwards.
pub fn exact_edit_distance(
    g: &Graph,
    f: &GraphFamily,
    limits: &Limits,
) -> Result<FarnessCertificate> {
    let n = g.n();
    if n > limits.edit_vertices {
        bail!(
            Scale,
            "exact edit distance is capped at {} vertices, got {n}",
            limits.edit_vertices
        );
    }
    let (lb, _) = epsilon_far_lower_bound(g, f, limits)?;
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let mut h = g.clone();
    for d in lb.value as usize..=pairs.len() {
        if edits_of_size(&mut h, f, &pairs, 0, d, limits)? {
            return Ok(FarnessCertificate {
                kind: FarnessKind::Exact,
                value: d as u64,
                n,
            });
        }
    }
    Err(Error::Consistency(
        "no edit set frees the graph, yet some graph on n vertices is always free".into(),
    ))
}

fn edits_of_size(
    h: &mut Graph,
    f: &GraphFamily,
    pairs: &[(usize, usize)],
    from: usize,
    left: usize,
    limits: &Limits,
) -> Result<bool> {
    if left == 0 {
        return f.is_free(h, limits);
    }
    for i in from..=pairs.len().saturating_sub(left) {
        let (u, v) = pairs[i];
        h.toggle_edge(u, v);
        let hit = edits_of_size(h, f, pairs, i + 1, left - 1, limits)?;
        h.toggle_edge(u, v);
        if hit {
            return Ok(true);
        }
    }
    Ok(false)
}

/// A sampling experiment: the sample size used and the measured rate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentReport {
    pub sample_size: usize,
    pub report: TestReport,
}

impl ExperimentReport {
    /// Success rate at least `2/3` minus the Wilson radius.
    pub fn meets_threshold(&self) -> bool {
        let (lo, hi) = self.report.interval();
        self.report.frequency() >= THRESHOLD - (hi - lo) / 2.0
    }
}

fn ceil_ratio(x: Rational) -> usize {
    x.ceil().to_integer() as usize
}

/// Samples `ceil(9r / lambda)` vertices and looks for an induced copy of
/// `pattern` (on `r` vertices). The sets `w` must be disjoint, of size at
/// least `lambda n`, with densities `>= 1 - 1/(2r^2)` on pattern edges and
/// `<= 1/(2r^2)` on non-edges.
pub fn counting_lemma_experiment(
    g: &Graph,
    pattern: &Graph,
    w: &[VertexSet],
    lambda: Rational,
    trials: u64,
    seed: u64,
    limits: &Limits,
) -> Result<ExperimentReport> {
    let r = pattern.n();
    if w.len() != r {
        bail!(Parameter, "{} sets for a pattern on {r} vertices", w.len());
    }
    if lambda <= Rational::from_integer(0) || lambda >= Rational::from_integer(1) {
        bail!(Parameter, "lambda must lie in (0, 1)");
    }
    let n = g.n() as i128;
    let slack = ratio(1, 2 * (r as u128).pow(2));
    let one = Rational::from_integer(1);
    for (i, wi) in w.iter().enumerate() {
        wi.check_within(g.n())?;
        if Rational::from_integer(wi.len() as i128) < lambda * n {
            bail!(Condition, "W_{i} has {} < lambda n vertices", wi.len());
        }
        for (j, wj) in w.iter().enumerate().skip(i + 1) {
            if !wi.is_disjoint(wj) {
                bail!(Condition, "W_{i} and W_{j} intersect");
            }
            let d = density_between(g, wi, wj)?;
            let ok = if pattern.has_edge(i, j) {
                d >= one - slack
            } else {
                d <= slack
            };
            if !ok {
                bail!(
                    Condition,
                    "density {d} of (W_{i}, W_{j}) violates the hypothesis"
                );
            }
        }
    }
    let q = ceil_ratio(Rational::from_integer(9 * r as i128) / lambda);
    let f = GraphFamily::new(alloc::vec![pattern.clone()])?;
    let report = detection_probability(g, &f, q, trials, seed, limits)?;
    Ok(ExperimentReport {
        sample_size: q,
        report,
    })
}

/// Samples `ceil(4k / alpha)` vertices and looks for an induced bipartite copy
/// of `h` (sides of size `k`). Unless `asserted`, the hypothesis of at least
/// `alpha n^{2k}` copies is verified by exact counting.
pub fn bipartite_sample_experiment(
    g: &Graph,
    h: &BipartitePattern,
    alpha: Rational,
    asserted: bool,
    trials: u64,
    seed: u64,
    limits: &Limits,
) -> Result<ExperimentReport> {
    if h.s_size != h.t_size || h.s_size == 0 {
        bail!(Parameter, "both sides must have the same positive size");
    }
    if alpha <= Rational::from_integer(0) || alpha >= Rational::from_integer(1) {
        bail!(Parameter, "alpha must lie in (0, 1)");
    }
    let k = h.s_size;
    if !asserted {
        let count = count_induced_bipartite_copies(g, h, limits).map_err(|e| {
            Error::Condition(alloc::format!(
                "copy count hypothesis cannot be verified: {e}"
            ))
        })?;
        let need = alpha * (g.n() as i128).pow(2 * k as u32);
        let have = Rational::from_integer(
            i128::try_from(count).map_err(|_| Error::Scale("copy count overflows".into()))?,
        );
        if have < need {
            bail!(
                Condition,
                "only {have} induced bipartite copies, hypothesis needs {need}"
            );
        }
    }
    let q = ceil_ratio(Rational::from_integer(4 * k as i128) / alpha);
    check_q(g, q)?;
    let mut rejections = 0;
    for i in 0..trials {
        let mut rng = trial_rng(seed, i);
        let x: VertexSet = sample_distinct(&mut rng, g.n(), q).into_iter().collect();
        if has_induced_bipartite_copy(g, h, &x, limits)? {
            rejections += 1;
        }
    }
    Ok(ExperimentReport {
        sample_size: q,
        report: TestReport {
            q,
            trials,
            rejections,
            seed,
            family: String::new(),
            instance: String::new(),
        },
    })
}

/// One row of a detection curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurvePoint {
    pub label: String,
    pub epsilon: Option<Rational>,
    /// Least grid size whose lower Wilson bound reaches 2/3; `None` is
    /// censored.
    pub q_star: Option<usize>,
    pub reports: Vec<TestReport>,
}

/// Sweeps `q_grid` (in the given order) on every instance.
pub fn tester_curve(
    instances: &[(String, Graph, Option<Rational>)],
    f: &GraphFamily,
    q_grid: &[usize],
    trials: u64,
    seed: u64,
    limits: &Limits,
) -> Result<Vec<CurvePoint>> {
    let mut out = Vec::with_capacity(instances.len());
    for (label, g, eps) in instances {
        let mut reports = Vec::new();
        let mut q_star = None;
        for &q in q_grid.iter().filter(|&&q| q <= g.n()) {
            let mut r = detection_probability(g, f, q, trials, seed, limits)?;
            r.instance = label.clone();
            if q_star.is_none() && r.detects() {
                q_star = Some(q);
            }
            reports.push(r);
        }
        out.push(CurvePoint {
            label: label.clone(),
            epsilon: *eps,
            q_star,
            reports,
        });
    }
    Ok(out)
}

/// Measured farness of the `n/k`-blowup of `k_graph` from being (not
/// necessarily induced) `f_graph`-free, next to `1 / (2k^2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupDistance {
    pub certificate: FarnessCertificate,
    pub threshold: Rational,
}

impl BlowupDistance {
    pub fn meets_threshold(&self) -> bool {
        self.certificate.epsilon_equivalent() >= self.threshold
    }
}

pub fn blowup_distance_experiment(
    k_graph: &Graph,
    f_graph: &Graph,
    n: usize,
    limits: &Limits,
) -> Result<BlowupDistance> {
    if find_homomorphism(f_graph, k_graph, limits)?.is_none() {
        bail!(
            Condition,
            "the pattern has no homomorphism into the base graph"
        );
    }
    let k = k_graph.n();
    let factor = n / k.max(1);
    if factor == 0 {
        return Err(Error::InsufficientVertices {
            needed: k as u128,
            actual: n,
        });
    }
    let g = blowup(&BlowupSpec::plain(k_graph.clone(), factor))?;
    let fam = GraphFamily::with_modes(alloc::vec![(f_graph.clone(), MatchMode::Subgraph)])?;
    let certificate = if g.n() <= limits.edit_vertices {
        exact_edit_distance(&g, &fam, limits)?
    } else {
        epsilon_far_lower_bound(&g, &fam, limits)?.0
    };
    Ok(BlowupDistance {
        certificate,
        threshold: ratio(1, 2 * (k as u128).pow(2)),
    })
}
