// SPDX-License-Identifier: Apache-2.0

//! The family `{C6} ∪ SG(C_{a_1}) ∪ SG(C_{a_2}) ∪ ...` with `a_1 = 3` and
//! `a_{i+1} = 2^{2(a_i + 2)^2} + 1`, kept symbolic beyond what fits in memory.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{bail, Result};
use crate::graph::Graph;
use crate::recognize::{GraphFamily, MatchMode};

/// Exponents beyond this many bits are not materialized as integers.
const MAX_EXPONENT: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CycleLength {
    Exact(BigUint),
    /// `a_index`, defined only through the recurrence.
    Recurrence {
        index: usize,
    },
}

impl CycleLength {
    pub fn as_usize(&self) -> Option<usize> {
        match self {
            CycleLength::Exact(a) => a.to_usize(),
            CycleLength::Recurrence { .. } => None,
        }
    }
}

/// Cycle lengths `a_1, a_2, ...`; every `C_{a_i}` is matched as a plain
/// subgraph, `C6` as an induced one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleFamily {
    pub lengths: Vec<CycleLength>,
    pub overridden: bool,
}

/// Next term of the recurrence, if its exponent is small enough to expand.
pub fn next_length(a: &BigUint) -> Option<BigUint> {
    let k = a + 2u32;
    let exponent = (&k * &k) * 2u32;
    let e = exponent.to_u64().filter(|&e| e <= MAX_EXPONENT)?;
    Some((BigUint::one() << e) + 1u32)
}

/// Builds the descriptor for `levels` terms, or from an explicit increasing
/// sequence of odd lengths.
pub fn cycle_family(levels: usize, growth: Option<&[u64]>) -> Result<CycleFamily> {
    if let Some(seq) = growth {
        if seq.is_empty() {
            bail!(Parameter, "override sequence is empty");
        }
        if seq.iter().any(|&a| a < 3 || a % 2 == 0) {
            bail!(Parameter, "override lengths must be odd and at least 3");
        }
        if seq.windows(2).any(|w| w[0] >= w[1]) {
            bail!(Parameter, "override lengths must increase strictly");
        }
        return Ok(CycleFamily {
            lengths: seq
                .iter()
                .map(|&a| CycleLength::Exact(BigUint::from(a)))
                .collect(),
            overridden: true,
        });
    }
    if levels == 0 {
        bail!(Parameter, "levels must be at least 1");
    }
    let mut lengths = vec![CycleLength::Exact(BigUint::from(3u32))];
    while lengths.len() < levels {
        let next = match lengths.last() {
            Some(CycleLength::Exact(a)) => next_length(a),
            _ => None,
        };
        lengths.push(match next {
            Some(a) => CycleLength::Exact(a),
            None => CycleLength::Recurrence {
                index: lengths.len() + 1,
            },
        });
    }
    Ok(CycleFamily {
        lengths,
        overridden: false,
    })
}

impl CycleFamily {
    /// `C6` plus every cycle of length at most `cap`. A sample on `q`
    /// vertices only needs `cap = q`: longer cycles cannot fit.
    pub fn materialize(&self, cap: usize) -> Result<GraphFamily> {
        let mut members = vec![(Graph::cycle(6), MatchMode::Induced)];
        for len in &self.lengths {
            if let Some(a) = len.as_usize().filter(|&a| a <= cap) {
                members.push((Graph::cycle(a), MatchMode::Subgraph));
            }
        }
        GraphFamily::with_modes(members)
    }

    /// Smallest cycle length above `cap`, if it is known exactly.
    pub fn first_beyond(&self, cap: usize) -> Option<&CycleLength> {
        self.lengths
            .iter()
            .find(|l| l.as_usize().is_none_or(|a| a > cap))
    }
}
