//! Seeded query batches over a grown graph.
//!
//! A batch samples `q` source/target pairs uniformly from the giant
//! component (fragmented graphs would otherwise drown the statistics in
//! trivially failed queries), then replays every pair at every TTL for
//! every requested algorithm. Random walks are paired against
//! normalized flooding: the walk's step budget is the message count of
//! the NF run for the same (query, TTL) — the NF row when NF is part of
//! the batch, a dedicated target-less NF run otherwise.

use alsf_core::metrics::giant_component_nodes;
use alsf_core::search::{run_search, SearchParams};
use alsf_core::{rw_budget_from_nf, Algorithm, Graph, NodeId, SimRng};
use rand::Rng;

#[derive(Clone, Debug)]
pub struct QueryRow {
    pub algo: Algorithm,
    /// Nominal TTL (for RW: the TTL of the NF run its budget came from).
    pub ttl: usize,
    pub query_id: usize,
    pub source: NodeId,
    pub target: NodeId,
    pub covered: usize,
    pub messages: u64,
    pub success: bool,
    pub hops_to_target: Option<usize>,
    /// Step budget actually handed to a random walk.
    pub rw_budget: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchAggregate {
    pub algo: Algorithm,
    pub ttl: usize,
    pub mean_covered: f64,
    pub success_rate: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum QueryError {
    /// Giant component too small to draw distinct source/target pairs.
    GiantTooSmall { size: usize },
}

impl std::fmt::Display for QueryError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            QueryError::GiantTooSmall { size } => {
                write!(f, "giant component has {size} nodes; need >= 2 to sample queries")
            }
        }
    }
}

impl std::error::Error for QueryError {}

/// Uniform distinct source/target pairs from the giant component.
pub fn sample_query_pairs(
    g: &Graph,
    q: usize,
    rng: &mut SimRng,
) -> Result<Vec<(NodeId, NodeId)>, QueryError> {
    sample_query_pairs_from(g, q, None, rng)
}

/// Like [`sample_query_pairs`], but with an optionally pinned source;
/// targets still come uniformly from the giant component.
pub fn sample_query_pairs_from(
    g: &Graph,
    q: usize,
    source: Option<NodeId>,
    rng: &mut SimRng,
) -> Result<Vec<(NodeId, NodeId)>, QueryError> {
    let giant = giant_component_nodes(g);
    if giant.len() < 2 {
        return Err(QueryError::GiantTooSmall { size: giant.len() });
    }
    let mut pairs = Vec::with_capacity(q);
    for _ in 0..q {
        let s = match source {
            Some(s) => s,
            None => giant[rng.random_range(0..giant.len())],
        };
        let t = loop {
            let t = giant[rng.random_range(0..giant.len())];
            if t != s {
                break t;
            }
        };
        pairs.push((s, t));
    }
    Ok(pairs)
}

/// Runs every (pair, ttl, algorithm) combination.
///
/// Iteration order is TTL-major (ascending as given), then query, then
/// algorithm in the caller's order, so RNG consumption is reproducible.
/// When `coverage_stop` is set, an algorithm whose mean coverage at
/// some TTL exceeds `coverage_stop * live_count` is dropped from all
/// later TTLs — the curve has saturated.
pub fn run_query_set(
    g: &Graph,
    algos: &[Algorithm],
    ttls: &[usize],
    pairs: &[(NodeId, NodeId)],
    m: usize,
    coverage_stop: Option<f64>,
    rng: &mut SimRng,
) -> Vec<QueryRow> {
    let mut rows = Vec::new();
    let mut active: Vec<Algorithm> = algos.to_vec();
    for &ttl in ttls {
        if active.is_empty() {
            break;
        }
        let mut covered_sums = vec![0u64; active.len()];
        for (query_id, &(source, target)) in pairs.iter().enumerate() {
            let mut nf_messages: Option<u64> = None;
            for (ai, &algo) in active.iter().enumerate() {
                let (outcome, rw_budget) = match algo {
                    Algorithm::RandomWalk => {
                        let budget = match nf_messages {
                            Some(b) => b,
                            None => rw_budget_from_nf(g, source, ttl, m, rng)
                                .expect("source sampled from live nodes"),
                        };
                        let params = SearchParams {
                            algorithm: algo,
                            ttl: budget as usize,
                            m,
                        };
                        let out = run_search(g, source, Some(target), &params, rng)
                            .expect("endpoints sampled from live nodes");
                        (out, Some(budget))
                    }
                    _ => {
                        let params = SearchParams { algorithm: algo, ttl, m };
                        let out = run_search(g, source, Some(target), &params, rng)
                            .expect("endpoints sampled from live nodes");
                        if algo == Algorithm::NormalizedFlooding {
                            nf_messages = Some(out.messages);
                        }
                        (out, None)
                    }
                };
                covered_sums[ai] += outcome.covered_count() as u64;
                rows.push(QueryRow {
                    algo,
                    ttl,
                    query_id,
                    source,
                    target,
                    covered: outcome.covered_count(),
                    messages: outcome.messages,
                    success: outcome.success,
                    hops_to_target: outcome.hops_to_target,
                    rw_budget,
                });
            }
        }
        if let Some(stop) = coverage_stop {
            let threshold = stop * g.live_count() as f64;
            let sums: Vec<(Algorithm, u64)> = active
                .iter()
                .copied()
                .zip(covered_sums.iter().copied())
                .collect();
            active.retain(|&a| {
                let sum = sums.iter().find(|(b, _)| *b == a).unwrap().1;
                (sum as f64 / pairs.len() as f64) <= threshold
            });
        }
    }
    rows
}

/// Mean coverage and success rate per (algorithm, TTL), ordered by the
/// algorithm order of `algos` and ascending TTL.
pub fn aggregate(rows: &[QueryRow], algos: &[Algorithm], ttls: &[usize]) -> Vec<SearchAggregate> {
    let mut out = Vec::new();
    for &algo in algos {
        for &ttl in ttls {
            let mut n = 0u64;
            let mut covered = 0u64;
            let mut hits = 0u64;
            for row in rows.iter().filter(|r| r.algo == algo && r.ttl == ttl) {
                n += 1;
                covered += row.covered as u64;
                hits += u64::from(row.success);
            }
            if n > 0 {
                out.push(SearchAggregate {
                    algo,
                    ttl,
                    mean_covered: covered as f64 / n as f64,
                    success_rate: hits as f64 / n as f64,
                });
            }
        }
    }
    out
}
