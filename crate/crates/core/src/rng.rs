// SPDX-License-Identifier: Apache-2.0

//! Seeding conventions. Every randomized path derives its generator from a
//! 64-bit seed here so that runs are reproducible and independent of
//! scheduling.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type LabRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> LabRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator for trial `index` of a repeated experiment: same key, separate
/// ChaCha stream per trial.
pub fn trial_rng(seed: u64, index: u64) -> LabRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index);
    r
}

/// The first `q` entries of a uniformly random permutation of `0..n`
/// (partial Fisher-Yates). With the same generator state the `q`-sample is a
/// prefix of the `q+1`-sample.
pub fn sample_distinct<R: Rng + ?Sized>(rng: &mut R, n: usize, q: usize) -> Vec<usize> {
    assert!(q <= n);
    let mut pool: Vec<usize> = (0..n).collect();
    for i in 0..q {
        let j = rng.random_range(i..n);
        pool.swap(i, j);
    }
    pool.truncate(q);
    pool
}
