// SPDX-License-Identifier: Apache-2.0

//! Sets of integers without nontrivial solutions to convex linear equations,
//! by the digit-shell method.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{bail, Result};
use crate::rng::seeded;

/// How a set was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetMethod {
    /// Largest squared-norm shell among integers with small base-`b` digits.
    DigitShell,
    /// The single element `{1}`, used when the digit cap drops below 2.
    Singleton,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BehrendSet {
    pub m: u64,
    pub k: u64,
    /// Sorted members of `1..=m`.
    pub members: Vec<u64>,
    pub base: u64,
    pub digits: u32,
    /// Every digit of a member is below this cap.
    pub digit_cap: u64,
    /// Squared digit norm shared by all members.
    pub shell: u64,
    pub method: SetMethod,
}

impl BehrendSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub(crate) fn singleton(m: u64, k: u64) -> Self {
        BehrendSet {
            m,
            k,
            members: vec![1],
            base: 0,
            digits: 0,
            digit_cap: 0,
            shell: 1,
            method: SetMethod::Singleton,
        }
    }
}

/// Digit count, base and digit cap for `m` and coefficient budget `k`.
pub fn digit_parameters(m: u64, k: u64) -> (u32, u64, u64) {
    let d = (libm::sqrt(libm::log2(m as f64)) + 0.5) as u32;
    let d = d.max(1);
    // least b with b^d >= m
    let mut b = libm::ceil(libm::pow(m as f64, 1.0 / d as f64)) as u64;
    while b > 1 && pow_at_least(b - 1, d, m) {
        b -= 1;
    }
    while !pow_at_least(b, d, m) {
        b += 1;
    }
    (d, b, (b - 1) / k + 1)
}

fn pow_at_least(b: u64, d: u32, m: u64) -> bool {
    let mut acc: u128 = 1;
    for _ in 0..d {
        acc *= b as u128;
        if acc >= m as u128 {
            return true;
        }
    }
    acc >= m as u128
}

/// A subset of `1..=m` in which `a_1 s_1 + ... + a_l s_l = (a_1 + ... + a_l) s`
/// with `2 <= l`, `a_i >= 1` and `sum a_i <= k` only has trivial solutions.
///
/// With digits below `q = (b - 1)/k + 1` the weighted sums never carry, so a
/// solution holds digit by digit; on a sphere of fixed squared norm a convex
/// combination of points equals a point only when all of them coincide.
pub fn behrend_set(m: u64, k: u64) -> Result<BehrendSet> {
    if m < 2 || k < 2 {
        bail!(
            Parameter,
            "behrend_set needs m >= 2 and k >= 2, got m = {m}, k = {k}"
        );
    }
    let (d, b, q) = digit_parameters(m, k);
    if q < 2 {
        bail!(
            Parameter,
            "base {b} leaves digit cap {q} for k = {k}; try m >= {}",
            suggest_m(k)
        );
    }
    let mut shells: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for x in 1..=m {
        let mut y = x;
        let mut norm = 0;
        let mut ok = true;
        while y > 0 {
            let digit = y % b;
            if digit >= q {
                ok = false;
                break;
            }
            norm += digit * digit;
            y /= b;
        }
        if ok {
            shells.entry(norm).or_default().push(x);
        }
    }
    // biggest shell, smallest norm on ties
    let (&shell, members) = shells
        .iter()
        .rev()
        .max_by_key(|(_, v)| v.len())
        .expect("1 always has admissible digits");
    Ok(BehrendSet {
        m,
        k,
        members: members.clone(),
        base: b,
        digits: d,
        digit_cap: q,
        shell,
        method: SetMethod::DigitShell,
    })
}

/// Smallest `m` whose digit parameters give a cap of at least 2 for `k`.
pub fn suggest_m(k: u64) -> u64 {
    let mut m = 2u64;
    loop {
        if digit_parameters(m, k).2 >= 2 {
            return m;
        }
        m = m.saturating_mul(2);
    }
}

/// One nontrivial solution `sum a_i terms_i = (sum a_i) target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub coefficients: Vec<u64>,
    pub terms: Vec<u64>,
    pub target: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvexVerdict {
    /// Whether every coefficient and term tuple was examined.
    pub exhaustive: bool,
    /// Tuples examined.
    pub checked: u64,
    pub violations: Vec<Violation>,
}

impl ConvexVerdict {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

const MAX_REPORTED: usize = 16;
const MAX_SAMPLES: u64 = 2_000_000;

/// Ordered coefficient tuples of every length `2..=k` with entries `>= 1` and
/// sum at most `k`.
fn coefficient_tuples(k: u64) -> Vec<Vec<u64>> {
    fn go(k: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        let used: u64 = cur.iter().sum();
        if cur.len() >= 2 {
            out.push(cur.clone());
        }
        for a in 1..=k.saturating_sub(used) {
            cur.push(a);
            go(k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(k, &mut Vec::new(), &mut out);
    out
}

fn check_tuple(set: &[u64], a: &[u64], s: &[u64]) -> Option<Violation> {
    if s.iter().all(|&x| x == s[0]) {
        return None;
    }
    let total: u64 = a.iter().sum();
    let sum: u128 = a.iter().zip(s).map(|(&x, &y)| x as u128 * y as u128).sum();
    if !sum.is_multiple_of(total as u128) {
        return None;
    }
    let target = (sum / total as u128) as u64;
    set.binary_search(&target).ok().map(|_| Violation {
        coefficients: a.to_vec(),
        terms: s.to_vec(),
        target,
    })
}

/// Searches for nontrivial solutions. Runs exhaustively when the total work
/// fits in `budget`, otherwise checks a deterministic random sample.
pub fn verify_convex_free(set: &[u64], k: u64, budget: u64) -> ConvexVerdict {
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let size = sorted.len() as u128;
    let coeffs = coefficient_tuples(k);
    let work: u128 = coeffs
        .iter()
        .map(|a| size.saturating_pow(a.len() as u32))
        .fold(0u128, u128::saturating_add);
    let mut violations = Vec::new();
    if work <= budget as u128 || sorted.is_empty() {
        let mut checked = 0;
        let mut s = Vec::new();
        for a in &coeffs {
            enumerate_terms(&sorted, a, &mut s, &mut checked, &mut violations);
        }
        return ConvexVerdict {
            exhaustive: true,
            checked,
            violations,
        };
    }
    let mut rng = seeded(0);
    let samples = budget.min(MAX_SAMPLES);
    for _ in 0..samples {
        let a = &coeffs[rng.random_range(0..coeffs.len())];
        let s: Vec<u64> = (0..a.len())
            .map(|_| sorted[rng.random_range(0..sorted.len())])
            .collect();
        if let Some(v) = check_tuple(&sorted, a, &s) {
            if violations.len() < MAX_REPORTED {
                violations.push(v);
            }
        }
    }
    ConvexVerdict {
        exhaustive: false,
        checked: samples,
        violations,
    }
}

fn enumerate_terms(
    set: &[u64],
    a: &[u64],
    s: &mut Vec<u64>,
    checked: &mut u64,
    out: &mut Vec<Violation>,
) {
    if s.len() == a.len() {
        *checked += 1;
        if out.len() < MAX_REPORTED {
            if let Some(v) = check_tuple(set, a, s) {
                out.push(v);
            }
        }
        return;
    }
    for &x in set {
        s.push(x);
        enumerate_terms(set, a, s, checked, out);
        s.pop();
    }
}
