//! Stable seed derivation.
//!
//! Every run in a sweep gets `seed = mix(base_seed, parameter tuple,
//! realization index)`, so any single run can be reproduced in
//! isolation from its logged seed. The mixer is a fixed splitmix64
//! chain — deliberately not a std hasher, whose output may change
//! across toolchains.

use alsf_core::{Cutoff, GrowthParams};

pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn absorb(h: u64, v: u64) -> u64 {
    splitmix64(h ^ v)
}

fn cutoff_code(k_c: Cutoff) -> u64 {
    match k_c {
        Cutoff::Unbounded => u64::MAX,
        Cutoff::Bounded(k) => k as u64,
    }
}

/// Seed of one (parameter tuple, realization) run.
pub fn derive_run_seed(base_seed: u64, p: &GrowthParams, realization: u64) -> u64 {
    let mut h = splitmix64(base_seed);
    h = absorb(h, p.mu.to_bits());
    h = absorb(h, p.tau_j as u64);
    h = absorb(h, p.tau_l as u64);
    h = absorb(h, cutoff_code(p.k_c));
    h = absorb(h, p.m as u64);
    h = absorb(h, p.n_target as u64);
    absorb(h, realization)
}

/// Independent stream for query sampling and searches over a grown
/// graph, derived from the run seed that grew it.
pub fn search_seed(run_seed: u64) -> u64 {
    splitmix64(run_seed ^ 0x5ea2_c4ab_71f0_3c99)
}
