// SPDX-License-Identifier: Apache-2.0

//! Tester trials spread over a thread pool. Every trial draws from its own
//! seeded stream and the rejections are summed, so results do not depend on
//! the thread count or on scheduling.

use rayon::prelude::*;
use removal_lab_core::tester::{trial, CurvePoint, TestReport};
use removal_lab_core::{Graph, GraphFamily, Limits, Rational};

use crate::{LabError, Result};

/// A pool with `threads` workers; 0 means one per core.
pub fn pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| LabError::Usage(format!("thread pool: {e}")))
}

pub fn detection_probability(
    pool: &rayon::ThreadPool,
    g: &Graph,
    f: &GraphFamily,
    q: usize,
    trials: u64,
    seed: u64,
    limits: &Limits,
) -> Result<TestReport> {
    if trials == 0 {
        return Err(LabError::Usage("need at least one trial".into()));
    }
    let rejections = pool.install(|| {
        (0..trials)
            .into_par_iter()
            .map(|i| trial(g, f, q, seed, i, limits).map(|o| u64::from(o.rejected())))
            .try_reduce(|| 0, |a, b| Ok(a + b))
    })?;
    Ok(TestReport {
        q,
        trials,
        rejections,
        seed,
        family: String::new(),
        instance: String::new(),
    })
}

/// Detection curve over `q_grid`; grid sizes above an instance's order are
/// skipped. `family` materializes the family seen by a sample of size `q`.
pub fn tester_curve<F>(
    pool: &rayon::ThreadPool,
    instances: &[(String, Graph, Option<Rational>)],
    family: F,
    q_grid: &[usize],
    trials: u64,
    seed: u64,
    limits: &Limits,
) -> Result<Vec<CurvePoint>>
where
    F: Fn(usize) -> Result<GraphFamily>,
{
    let mut out = Vec::with_capacity(instances.len());
    for (label, g, eps) in instances {
        let mut reports = Vec::new();
        let mut q_star = None;
        for &q in q_grid.iter().filter(|&&q| q <= g.n()) {
            let f = family(q)?;
            let mut r = detection_probability(pool, g, &f, q, trials, seed, limits)?;
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

#[cfg(test)]
mod tests {
    use super::*;
    use removal_lab_core::tester;

    #[test]
    fn matches_sequential_runs() {
        let g = removal_lab_core::graph::blowup(&removal_lab_core::BlowupSpec::plain(
            Graph::cycle(5),
            8,
        ))
        .unwrap();
        let f = GraphFamily::new(vec![Graph::path(3).complement()]).unwrap();
        let lim = Limits::default();
        let seq = tester::detection_probability(&g, &f, 6, 300, 11, &lim).unwrap();
        for threads in [1, 3, 8] {
            let p = pool(threads).unwrap();
            assert_eq!(
                detection_probability(&p, &g, &f, 6, 300, 11, &lim).unwrap(),
                seq
            );
        }
        let inst = vec![("c5".to_string(), g, None)];
        let grid = [2, 4, 8, 64];
        let a = tester::tester_curve(&inst, &f, &grid, 200, 5, &lim).unwrap();
        let b = tester_curve(
            &pool(4).unwrap(),
            &inst,
            |_| Ok(f.clone()),
            &grid,
            200,
            5,
            &lim,
        )
        .unwrap();
        assert_eq!(a, b);
    }
}
