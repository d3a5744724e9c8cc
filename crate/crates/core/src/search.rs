//! Decentralized search over an overlay graph.
//!
//! Three message-passing strategies, all target-agnostic in how they
//! spread (a designated target only flags success and the hop count of
//! the first hit):
//!
//! * **Flooding (FL)** — every first-time recipient forwards the query
//!   to all neighbors except the node it came from, one synchronous
//!   round per TTL unit.
//! * **Normalized flooding (NF)** — like FL, but a node with more than
//!   `m` eligible neighbors forwards to a uniformly random `m`-subset
//!   of them; the source likewise contacts at most `m` neighbors.
//! * **Random walk (RW)** — a single walker moving to a uniformly
//!   random neighbor, excluding the node it just came from, under a
//!   step budget. For a fair comparison against NF the budget is the
//!   message count of an NF search in the same scenario
//!   ([`rw_budget_from_nf`]).
//!
//! Messages are counted per transmission, duplicates included: a copy
//! arriving at an already-covered node costs a message but is not
//! re-forwarded. FL and NF run their full TTL even after the target is
//! hit, so coverage curves stay comparable; RW stops at the target.

use alloc::vec::Vec;
use core::fmt;

use indexmap::IndexSet;
use rand::Rng;
use rustc_hash::FxBuildHasher;

use crate::graph::{Graph, NodeId};

/// Which strategy a query uses.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Algorithm {
    Flooding,
    NormalizedFlooding,
    RandomWalk,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [
        Algorithm::Flooding,
        Algorithm::NormalizedFlooding,
        Algorithm::RandomWalk,
    ];

    /// Short name used in CSV output and on the command line.
    pub fn tag(self) -> &'static str {
        match self {
            Algorithm::Flooding => "fl",
            Algorithm::NormalizedFlooding => "nf",
            Algorithm::RandomWalk => "rw",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// One query's configuration.
///
/// `ttl` is a round count for FL/NF and a step budget for RW. `m` is
/// the network's minimum degree, which normalized flooding needs.
#[derive(Clone, Copy, Debug)]
pub struct SearchParams {
    pub algorithm: Algorithm,
    pub ttl: usize,
    pub m: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchError {
    SourceNotLive(NodeId),
    TargetNotLive(NodeId),
}

impl fmt::Display for SearchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchError::SourceNotLive(u) => write!(f, "search source {u} is not live"),
            SearchError::TargetNotLive(u) => write!(f, "search target {u} is not live"),
        }
    }
}

impl core::error::Error for SearchError {}

type NodeSet = IndexSet<NodeId, FxBuildHasher>;

/// What one query achieved.
#[derive(Clone, Debug, Default)]
pub struct SearchOutcome {
    /// Distinct nodes that received the query, excluding the source.
    pub covered: NodeSet,
    /// Total transmissions, duplicates included.
    pub messages: u64,
    /// Whether the designated target received the query.
    pub success: bool,
    /// Rounds (FL/NF) or steps (RW) until the target's first copy.
    pub hops_to_target: Option<usize>,
}

impl SearchOutcome {
    pub fn covered_count(&self) -> usize {
        self.covered.len()
    }

    fn deliver(&mut self, node: NodeId, target: Option<NodeId>, hops: usize) {
        self.covered.insert(node);
        if Some(node) == target && self.hops_to_target.is_none() {
            self.success = true;
            self.hops_to_target = Some(hops);
        }
    }
}

fn check_endpoints(
    g: &Graph,
    source: NodeId,
    target: Option<NodeId>,
) -> Result<(), SearchError> {
    if !g.is_live(source) {
        return Err(SearchError::SourceNotLive(source));
    }
    if let Some(t) = target {
        if !g.is_live(t) {
            return Err(SearchError::TargetNotLive(t));
        }
    }
    Ok(())
}

/// Flood/NF wavefront engine. `fanout` bounds how many eligible
/// neighbors a node forwards to (`usize::MAX` for plain flooding);
/// the RNG only fires when a subset actually has to be drawn.
fn wavefront<R: Rng>(
    g: &Graph,
    source: NodeId,
    target: Option<NodeId>,
    ttl: usize,
    fanout: usize,
    rng: &mut R,
) -> SearchOutcome {
    let mut out = SearchOutcome::default();
    // Nodes forwarding this round, with the neighbor they heard it from.
    let mut frontier: Vec<(NodeId, Option<NodeId>)> = Vec::new();
    frontier.push((source, None));
    let mut next: Vec<(NodeId, Option<NodeId>)> = Vec::new();
    let mut eligible: Vec<NodeId> = Vec::new();

    for round in 1..=ttl {
        if frontier.is_empty() {
            break;
        }
        for &(v, parent) in &frontier {
            eligible.clear();
            eligible.extend(g.neighbors(v).filter(|&w| Some(w) != parent));
            if eligible.len() > fanout {
                // Uniform fanout-subset via partial Fisher-Yates.
                for i in 0..fanout {
                    let j = rng.random_range(i..eligible.len());
                    eligible.swap(i, j);
                }
                eligible.truncate(fanout);
            }
            for &w in &eligible {
                out.messages += 1;
                if w != source && !out.covered.contains(&w) {
                    out.deliver(w, target, round);
                    next.push((w, Some(v)));
                }
            }
        }
        frontier.clear();
        core::mem::swap(&mut frontier, &mut next);
    }
    out
}

/// Flooding search from `source` for `ttl` synchronous rounds.
pub fn flood_search(
    g: &Graph,
    source: NodeId,
    target: Option<NodeId>,
    ttl: usize,
) -> Result<SearchOutcome, SearchError> {
    check_endpoints(g, source, target)?;
    // Flooding is deterministic; the engine's RNG is never consulted
    // because the fanout is unbounded.
    let mut no_rng = NoRng;
    Ok(wavefront(g, source, target, ttl, usize::MAX, &mut no_rng))
}

/// Normalized flooding from `source`: nodes forward to at most `m`
/// randomly chosen eligible neighbors per round.
pub fn nf_search<R: Rng>(
    g: &Graph,
    source: NodeId,
    target: Option<NodeId>,
    ttl: usize,
    m: usize,
    rng: &mut R,
) -> Result<SearchOutcome, SearchError> {
    assert!(m >= 1, "normalized flooding needs m >= 1");
    check_endpoints(g, source, target)?;
    Ok(wavefront(g, source, target, ttl, m, rng))
}

/// Non-backtracking random walk from `source` under a step budget.
///
/// Each step moves to a uniformly random neighbor of the current node,
/// excluding the node the walker just came from; at a degree-1 dead end
/// the walker backtracks instead of halting. The walk stops at the
/// target or when the budget is spent. `messages` equals steps taken.
pub fn rw_search<R: Rng>(
    g: &Graph,
    source: NodeId,
    target: Option<NodeId>,
    budget: usize,
    rng: &mut R,
) -> Result<SearchOutcome, SearchError> {
    check_endpoints(g, source, target)?;
    let mut out = SearchOutcome::default();
    if g.degree(source) == 0 {
        return Ok(out);
    }
    let mut current = source;
    let mut prev: Option<NodeId> = None;
    for step in 1..=budget {
        let d = g.degree(current);
        let next = match prev {
            None => g.neighbor_at(current, rng.random_range(0..d)),
            // The walker arrived over an edge, so `p` is a neighbor; at a
            // dead end (d == 1) the only move is back to it.
            Some(p) if d == 1 => p,
            Some(p) => {
                let skip = g
                    .neighbors(current)
                    .position(|w| w == p)
                    .expect("previous node is a neighbor");
                let mut idx = rng.random_range(0..d - 1);
                if idx >= skip {
                    idx += 1;
                }
                g.neighbor_at(current, idx)
            }
        };
        out.messages += 1;
        if next != source {
            out.deliver(next, target, step);
        }
        if Some(next) == target {
            break;
        }
        prev = Some(current);
        current = next;
    }
    Ok(out)
}

/// Message budget for a random walk paired against normalized flooding:
/// the message count of one target-less NF search from the same source
/// with the same TTL.
pub fn rw_budget_from_nf<R: Rng>(
    g: &Graph,
    source: NodeId,
    ttl: usize,
    m: usize,
    rng: &mut R,
) -> Result<u64, SearchError> {
    Ok(nf_search(g, source, None, ttl, m, rng)?.messages)
}

/// Runs one query with the strategy in `params`. For RW, `params.ttl`
/// is the step budget.
pub fn run_search<R: Rng>(
    g: &Graph,
    source: NodeId,
    target: Option<NodeId>,
    params: &SearchParams,
    rng: &mut R,
) -> Result<SearchOutcome, SearchError> {
    match params.algorithm {
        Algorithm::Flooding => flood_search(g, source, target, params.ttl),
        Algorithm::NormalizedFlooding => nf_search(g, source, target, params.ttl, params.m, rng),
        Algorithm::RandomWalk => rw_search(g, source, target, params.ttl, rng),
    }
}

/// Panics if asked for randomness; lets the deterministic flooding path
/// share the wavefront engine.
struct NoRng;

impl rand::RngCore for NoRng {
    fn next_u32(&mut self) -> u32 {
        unreachable!("flooding must not consume randomness")
    }

    fn next_u64(&mut self) -> u64 {
        unreachable!("flooding must not consume randomness")
    }

    fn fill_bytes(&mut self, _dest: &mut [u8]) {
        unreachable!("flooding must not consume randomness")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::SimRng;
    use alloc::collections::BTreeSet;
    use alloc::vec::Vec;
    use rand::SeedableRng;

    fn path(n: u32) -> Graph {
        let mut g = Graph::new();
        let ids: Vec<NodeId> = (0..n).map(|_| g.add_node()).collect();
        for w in ids.windows(2) {
            g.add_edge(w[0], w[1]).unwrap();
        }
        g
    }

    fn star(leaves: u32) -> (Graph, NodeId, Vec<NodeId>) {
        let mut g = Graph::new();
        let hub = g.add_node();
        let ls = (0..leaves)
            .map(|_| {
                let l = g.add_node();
                g.add_edge(hub, l).unwrap();
                l
            })
            .collect();
        (g, hub, ls)
    }

    fn triangle() -> Graph {
        let mut g = Graph::new();
        let ids: Vec<NodeId> = (0..3).map(|_| g.add_node()).collect();
        g.add_edge(ids[0], ids[1]).unwrap();
        g.add_edge(ids[1], ids[2]).unwrap();
        g.add_edge(ids[0], ids[2]).unwrap();
        g
    }

    fn covered_ids(out: &SearchOutcome) -> BTreeSet<u32> {
        out.covered.iter().map(|n| n.value()).collect()
    }

    fn rng(seed: u64) -> SimRng {
        SimRng::seed_from_u64(seed)
    }

    #[test]
    fn flood_chain_propagation() {
        let g = path(5);
        let out = flood_search(&g, NodeId::new(0), None, 3).unwrap();
        assert_eq!(covered_ids(&out), [1, 2, 3].into());
        assert_eq!(out.messages, 3);
    }

    #[test]
    fn flood_star_from_leaf() {
        let (g, _, leaves) = star(5);
        let out = flood_search(&g, leaves[0], None, 2).unwrap();
        assert_eq!(out.covered_count(), 5);
        assert_eq!(out.messages, 5);
    }

    #[test]
    fn flood_triangle_counts_duplicates() {
        let g = triangle();
        let out = flood_search(&g, NodeId::new(0), None, 2).unwrap();
        assert_eq!(covered_ids(&out), [1, 2].into());
        // Round 1: two sends; round 2: both duplicates (1->2, 2->1).
        assert_eq!(out.messages, 4);
    }

    #[test]
    fn flood_ttl_zero_is_empty() {
        let g = path(3);
        let out = flood_search(&g, NodeId::new(1), None, 0).unwrap();
        assert_eq!(out.covered_count(), 0);
        assert_eq!(out.messages, 0);
    }

    #[test]
    fn flood_stops_when_wavefront_dies() {
        let g = path(3);
        let out = flood_search(&g, NodeId::new(0), None, 1000).unwrap();
        assert_eq!(out.covered_count(), 2);
        assert_eq!(out.messages, 2);
    }

    #[test]
    fn flood_records_first_hit_round_and_keeps_running() {
        let g = path(5);
        let out = flood_search(&g, NodeId::new(0), Some(NodeId::new(2)), 4).unwrap();
        assert!(out.success);
        assert_eq!(out.hops_to_target, Some(2));
        // The wave keeps rolling past the target.
        assert_eq!(out.covered_count(), 4);
    }

    #[test]
    fn flood_rejects_dead_source() {
        let g = path(2);
        assert!(matches!(
            flood_search(&g, NodeId::new(7), None, 1),
            Err(SearchError::SourceNotLive(_))
        ));
    }

    #[test]
    fn nf_with_large_m_equals_flooding() {
        let (g, _, leaves) = star(5);
        for seed in 0..10 {
            let nf = nf_search(&g, leaves[0], None, 2, 10, &mut rng(seed)).unwrap();
            let fl = flood_search(&g, leaves[0], None, 2).unwrap();
            assert_eq!(nf.messages, fl.messages);
            assert_eq!(covered_ids(&nf), covered_ids(&fl));
        }
    }

    #[test]
    fn nf_star_hub_picks_two_of_four() {
        let (g, hub, leaves) = star(5);
        let mut r = rng(5);
        let mut leaf_pairs: BTreeSet<BTreeSet<u32>> = BTreeSet::new();
        for _ in 0..2000 {
            let out = nf_search(&g, leaves[0], None, 2, 2, &mut r).unwrap();
            assert_eq!(out.covered_count(), 3);
            assert_eq!(out.messages, 3);
            let mut ids = covered_ids(&out);
            assert!(ids.remove(&hub.value()));
            assert!(!ids.contains(&leaves[0].value()));
            leaf_pairs.insert(ids);
        }
        // All C(4,2) pairs of the other leaves occur.
        assert_eq!(leaf_pairs.len(), 6);
    }

    #[test]
    fn nf_on_a_path_with_m1_matches_flooding() {
        let g = path(4);
        let out = nf_search(&g, NodeId::new(0), None, 3, 1, &mut rng(1)).unwrap();
        assert_eq!(covered_ids(&out), [1, 2, 3].into());
        assert_eq!(out.messages, 3);
    }

    #[test]
    fn nf_messages_never_exceed_flooding() {
        // Same (graph, source, ttl): NF forwards to a subset per round.
        let mut r = rng(99);
        for seed in 0..40u64 {
            let g = random_graph(seed, 30, 60);
            let live = g.live_nodes();
            let source = live[(seed as usize) % live.len()];
            for ttl in 0..5 {
                let fl = flood_search(&g, source, None, ttl).unwrap();
                let nf = nf_search(&g, source, None, ttl, 2, &mut r).unwrap();
                assert!(nf.messages <= fl.messages, "seed {seed} ttl {ttl}");
            }
        }
    }

    fn random_graph(seed: u64, n: u32, edges: u32) -> Graph {
        let mut r = rng(seed);
        let mut g = Graph::new();
        let ids: Vec<NodeId> = (0..n).map(|_| g.add_node()).collect();
        let mut placed = 0;
        while placed < edges {
            let a = ids[r.random_range(0..ids.len())];
            let b = ids[r.random_range(0..ids.len())];
            if a != b && g.add_edge(a, b).unwrap() {
                placed += 1;
            }
        }
        g
    }

    #[test]
    fn flood_covers_everything_within_diameter() {
        let g = triangle();
        let out = flood_search(&g, NodeId::new(1), None, 5).unwrap();
        assert_eq!(out.covered_count(), g.live_count() - 1);
    }

    #[test]
    fn rw_on_a_path_is_forced() {
        let g = path(4);
        let out = rw_search(&g, NodeId::new(0), None, 3, &mut rng(0)).unwrap();
        assert_eq!(covered_ids(&out), [1, 2, 3].into());
        assert_eq!(out.messages, 3);
    }

    #[test]
    fn rw_backtracks_at_dead_ends() {
        let (g, hub, _) = star(5);
        for seed in 0..50 {
            let out = rw_search(&g, hub, None, 5, &mut rng(seed)).unwrap();
            // Steps 1, 3, 5 land on leaves; consecutive ones differ, so
            // the walk covers two or three distinct leaves.
            assert!(out.covered_count() == 2 || out.covered_count() == 3);
            assert_eq!(out.messages, 5);
        }
    }

    #[test]
    fn rw_stops_at_the_target() {
        let g = path(2);
        let out = rw_search(&g, NodeId::new(0), Some(NodeId::new(1)), 10, &mut rng(2)).unwrap();
        assert!(out.success);
        assert_eq!(out.hops_to_target, Some(1));
        assert_eq!(out.messages, 1);
    }

    #[test]
    fn rw_isolated_source_returns_empty_outcome() {
        let mut g = Graph::new();
        let a = g.add_node();
        let out = rw_search(&g, a, None, 10, &mut rng(0)).unwrap();
        assert_eq!(out.covered_count(), 0);
        assert_eq!(out.messages, 0);
        assert!(!out.success);
    }

    #[test]
    fn rw_distinct_visits_bounded_by_budget() {
        for seed in 0..20u64 {
            let g = random_graph(seed, 25, 50);
            let source = g.live_nodes()[0];
            for budget in [0usize, 1, 3, 7] {
                let out = rw_search(&g, source, None, budget, &mut rng(seed)).unwrap();
                assert!(out.covered_count() <= budget);
                assert!(out.covered.len() as u64 <= out.messages || budget == 0);
            }
        }
    }

    #[test]
    fn rw_budget_pairs_with_nf_messages() {
        let g = path(4);
        let b = rw_budget_from_nf(&g, NodeId::new(0), 3, 1, &mut rng(0)).unwrap();
        assert_eq!(b, 3);

        let (g, _, leaves) = star(5);
        let b = rw_budget_from_nf(&g, leaves[0], 2, 2, &mut rng(0)).unwrap();
        assert_eq!(b, 3);

        let b = rw_budget_from_nf(&g, leaves[0], 0, 2, &mut rng(0)).unwrap();
        assert_eq!(b, 0);
    }

    #[test]
    fn covered_monotone_in_ttl_for_flooding() {
        for seed in 0..20u64 {
            let g = random_graph(seed, 30, 45);
            let source = g.live_nodes()[3];
            let mut last: BTreeSet<u32> = BTreeSet::new();
            for ttl in 0..6 {
                let out = flood_search(&g, source, None, ttl).unwrap();
                let ids = covered_ids(&out);
                assert!(ids.is_superset(&last), "coverage shrank at ttl {ttl}");
                last = ids;
            }
        }
    }

    #[test]
    fn nf_and_rw_coverage_grow_with_ttl_in_distribution() {
        let g = random_graph(4, 30, 60);
        let source = g.live_nodes()[0];
        let trials = 1000;
        let mean_at = |ttl: usize, algo: Algorithm| -> f64 {
            let mut total = 0usize;
            let mut r = rng(1234);
            for _ in 0..trials {
                let params = SearchParams { algorithm: algo, ttl, m: 2 };
                total += run_search(&g, source, None, &params, &mut r)
                    .unwrap()
                    .covered_count();
            }
            total as f64 / trials as f64
        };
        for algo in [Algorithm::NormalizedFlooding, Algorithm::RandomWalk] {
            let mut last = 0.0;
            for ttl in [1usize, 2, 4, 8] {
                let mean = mean_at(ttl, algo);
                assert!(mean >= last, "{algo} mean coverage shrank at ttl {ttl}");
                last = mean;
            }
        }
    }
}
