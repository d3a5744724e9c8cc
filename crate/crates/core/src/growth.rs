//! Network growth by horizon-limited preferential attachment.
//!
//! The network starts as a complete graph on `m + 1` nodes. Each step a
//! new node joins and tries to place `m` links; with probability `mu` a
//! uniformly random node then leaves and its neighbors rewire. Joining
//! and rewiring both select targets degree-proportionally, but only
//! among nodes inside a bounded-hop horizon: `tau_j` hops around a
//! random contact point at join time, `tau_l` hops around the departed
//! node at leave time. Nodes whose degree already equals the hard
//! cutoff `k_c` never accept another link.

use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};

use crate::graph::{Graph, NodeId};
use crate::SimRng;

/// Hard cap on node degree. Nodes at the cap are skipped by every
/// candidate selection.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Cutoff {
    Unbounded,
    Bounded(usize),
}

impl Cutoff {
    /// May a node of this degree accept one more link?
    pub fn accepts(self, degree: usize) -> bool {
        match self {
            Cutoff::Unbounded => true,
            Cutoff::Bounded(k) => degree < k,
        }
    }

    pub fn bound(self) -> Option<usize> {
        match self {
            Cutoff::Unbounded => None,
            Cutoff::Bounded(k) => Some(k),
        }
    }
}

impl fmt::Display for Cutoff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cutoff::Unbounded => write!(f, "none"),
            Cutoff::Bounded(k) => write!(f, "{k}"),
        }
    }
}

/// The five topology-construction knobs plus run plumbing.
#[derive(Clone, Debug)]
pub struct GrowthParams {
    /// Ad-hocness: per-step probability that a random node leaves. In `[0, 1)`.
    pub mu: f64,
    /// Join horizon: hops of topology visible around the contact point.
    pub tau_j: usize,
    /// Leave horizon: hops of topology visible around a departed node.
    pub tau_l: usize,
    /// Hard degree cutoff.
    pub k_c: Cutoff,
    /// Minimum degree: number of link stubs a joining node brings.
    pub m: usize,
    /// Number of live nodes the grown network must reach.
    pub n_target: usize,
    /// Seed of the run's random stream.
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GrowthError {
    /// `m` must be at least 1.
    MinDegreeZero,
    /// `mu` must lie in `[0, 1)`.
    MuOutOfRange,
    /// A bounded cutoff must exceed `m`, or no joining node could ever
    /// place its stubs.
    CutoffNotAboveM { k_c: usize, m: usize },
    /// `n_target` must be at least `m + 2` (the seed clique plus one join).
    TargetTooSmall { n_target: usize, m: usize },
}

impl fmt::Display for GrowthError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrowthError::MinDegreeZero => write!(f, "m must be >= 1"),
            GrowthError::MuOutOfRange => write!(f, "mu must lie in [0, 1)"),
            GrowthError::CutoffNotAboveM { k_c, m } => {
                write!(f, "hard cutoff k_c={k_c} must exceed m={m}")
            }
            GrowthError::TargetTooSmall { n_target, m } => {
                write!(f, "n_target={n_target} must be at least m+2={}", m + 2)
            }
        }
    }
}

impl core::error::Error for GrowthError {}

impl GrowthParams {
    pub fn validate(&self) -> Result<(), GrowthError> {
        if self.m < 1 {
            return Err(GrowthError::MinDegreeZero);
        }
        if !(self.mu >= 0.0 && self.mu < 1.0) {
            return Err(GrowthError::MuOutOfRange);
        }
        if let Cutoff::Bounded(k_c) = self.k_c {
            if k_c <= self.m {
                return Err(GrowthError::CutoffNotAboveM { k_c, m: self.m });
            }
        }
        if self.n_target < self.m + 2 {
            return Err(GrowthError::TargetTooSmall {
                n_target: self.n_target,
                m: self.m,
            });
        }
        Ok(())
    }
}

/// Observability counters for one growth run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GrowthTrace {
    pub joins: u64,
    pub leaves: u64,
    /// Link stubs a joining node could not place before its attempt
    /// budget ran out.
    pub failed_stub_attachments: u64,
    /// Replacement links attempted by neighbors of departed nodes
    /// (one attempt per neighbor when `tau_l >= 1`).
    pub rewires_attempted: u64,
    /// Replacement links actually created.
    pub rewires_completed: u64,
}

/// Complete graph on `m + 1` nodes; every node has degree exactly `m`.
pub fn seed_clique(m: usize) -> Graph {
    assert!(m >= 1, "seed clique needs m >= 1");
    let mut g = Graph::new();
    let ids: Vec<NodeId> = (0..=m).map(|_| g.add_node()).collect();
    for (i, &u) in ids.iter().enumerate() {
        for &v in &ids[i + 1..] {
            g.add_edge(u, v).expect("clique edges are valid");
        }
    }
    g
}

/// Degree-proportional draw over the eligible members of `candidates`.
///
/// Weights are current degrees, normalized within the eligible set. When
/// every eligible candidate has degree zero there is nothing to
/// normalize; the draw falls back to uniform (required so the neighbors
/// of a departed star hub can still reconnect to each other).
fn pick_preferential<R: Rng, F: Fn(NodeId) -> bool>(
    g: &Graph,
    candidates: &[NodeId],
    eligible: F,
    rng: &mut R,
) -> Option<NodeId> {
    let mut total: u64 = 0;
    let mut eligible_count: usize = 0;
    for &c in candidates {
        if eligible(c) {
            total += g.degree(c) as u64;
            eligible_count += 1;
        }
    }
    if eligible_count == 0 {
        return None;
    }
    if total == 0 {
        let mut nth = rng.random_range(0..eligible_count);
        for &c in candidates {
            if eligible(c) {
                if nth == 0 {
                    return Some(c);
                }
                nth -= 1;
            }
        }
        unreachable!("uniform fallback index in range");
    }
    let mut x = rng.random_range(0..total);
    for &c in candidates {
        if eligible(c) {
            let w = g.degree(c) as u64;
            if x < w {
                return Some(c);
            }
            x -= w;
        }
    }
    unreachable!("weighted index in range");
}

/// Uniform draw over live nodes, excluding `skip`.
fn random_live_except<R: Rng>(g: &Graph, skip: NodeId, rng: &mut R) -> NodeId {
    let live = g.live_nodes();
    debug_assert!(live.len() >= 2);
    loop {
        let r = live[rng.random_range(0..live.len())];
        if r != skip {
            return r;
        }
    }
}

/// Adds one node and attaches up to `m` links by horizon-limited
/// preferential attachment.
///
/// Stubs are placed one at a time: draw a uniformly random contact node
/// `r`, collect the nodes within `tau_j` hops of it, and connect to one
/// of them with probability proportional to its degree — skipping the
/// new node itself, nodes it already linked to, and nodes at the hard
/// cutoff. An exhausted horizon triggers a fresh draw of `r`. With
/// `tau_j = 0` the horizon is just `{r}`, so attachment degenerates to a
/// direct connect whenever `r` is below the cutoff.
///
/// The loop is bounded by `10 * live_count` contact draws; a node whose
/// budget runs out keeps its partial degree and the shortfall is added
/// to `trace.failed_stub_attachments`. Returns the new node's id.
pub fn join<R: Rng>(
    g: &mut Graph,
    params: &GrowthParams,
    trace: &mut GrowthTrace,
    rng: &mut R,
) -> NodeId {
    assert!(g.live_count() >= 1, "join needs an existing node");
    let u = g.add_node();
    let budget = 10 * g.live_count();
    let mut draws = 0;
    while g.degree(u) < params.m && draws < budget {
        draws += 1;
        let r = random_live_except(g, u, rng);
        let horizon = g.ball(r, params.tau_j);
        // Sample without replacement until the stubs are placed or the
        // horizon has no eligible node left; freshly linked candidates
        // drop out via the adjacency check.
        while g.degree(u) < params.m {
            let eligible =
                |c: NodeId| c != u && params.k_c.accepts(g.degree(c)) && !g.contains_edge(u, c);
            match pick_preferential(g, &horizon, eligible, rng) {
                Some(c) => {
                    g.add_edge(u, c).expect("candidate is live and unlinked");
                    debug_assert!(
                        params.k_c.accepts(g.degree(c) - 1),
                        "link pushed a node past the cutoff"
                    );
                }
                None => break,
            }
        }
    }
    let placed = g.degree(u);
    if placed < params.m {
        trace.failed_stub_attachments += (params.m - placed) as u64;
    }
    trace.joins += 1;
    u
}

/// Removes `victim` and lets each former neighbor attempt one
/// replacement link inside the departed node's `tau_l`-hop horizon.
///
/// The horizon is collected around `victim` *before* removal. Neighbors
/// rewire in ascending id order and each earlier replacement link is
/// visible to later draws. Candidates exclude the rewiring node itself,
/// its current neighbors, nodes at the cutoff, and the dead victim.
/// With `tau_l = 0` the horizon is empty and no rewiring occurs.
///
/// A neighbor that is already back at the cutoff (an earlier neighbor's
/// replacement link can refill the slot the victim freed) cannot accept
/// a link and makes no attempt.
pub fn leave<R: Rng>(
    g: &mut Graph,
    victim: NodeId,
    params: &GrowthParams,
    trace: &mut GrowthTrace,
    rng: &mut R,
) -> Result<(), crate::graph::GraphError> {
    let horizon = if params.tau_l == 0 || !g.is_live(victim) {
        Vec::new()
    } else {
        g.ball(victim, params.tau_l)
    };
    let mut former = g.remove_node(victim)?;
    trace.leaves += 1;
    if params.tau_l == 0 {
        return Ok(());
    }
    former.sort_unstable();
    for w in former {
        if !params.k_c.accepts(g.degree(w)) {
            continue;
        }
        trace.rewires_attempted += 1;
        let eligible = |c: NodeId| {
            c != w && g.is_live(c) && params.k_c.accepts(g.degree(c)) && !g.contains_edge(w, c)
        };
        if let Some(c) = pick_preferential(g, &horizon, eligible, rng) {
            g.add_edge(w, c).expect("candidate is live and unlinked");
            trace.rewires_completed += 1;
        }
    }
    Ok(())
}

/// Grows a network to `params.n_target` live nodes.
///
/// Starts from [`seed_clique`], then loops: one [`join`]; stop when the
/// target size is reached; otherwise flip the `mu` coin and hand a
/// uniformly random victim to [`leave`]. Deletion is skipped while the
/// network has `m + 2` or fewer live nodes, so a run can never collapse
/// into nothing.
pub fn grow(params: &GrowthParams) -> Result<(Graph, GrowthTrace), GrowthError> {
    params.validate()?;
    let mut rng = SimRng::seed_from_u64(params.seed);
    let mut g = seed_clique(params.m);
    let mut trace = GrowthTrace::default();
    loop {
        join(&mut g, params, &mut trace, &mut rng);
        if g.live_count() == params.n_target {
            break;
        }
        let x: f64 = rng.random();
        if x < params.mu && g.live_count() > params.m + 2 {
            let live = g.live_nodes();
            let victim = live[rng.random_range(0..live.len())];
            leave(&mut g, victim, params, &mut trace, &mut rng)
                .expect("victim drawn from live nodes");
        }
    }
    Ok((g, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;
    use alloc::vec;

    fn params(m: usize, tau_j: usize, tau_l: usize, k_c: Cutoff) -> GrowthParams {
        GrowthParams {
            mu: 0.0,
            tau_j,
            tau_l,
            k_c,
            m,
            n_target: m + 2,
            seed: 0,
        }
    }

    fn rng(seed: u64) -> SimRng {
        SimRng::seed_from_u64(seed)
    }

    #[test]
    fn seed_clique_shapes() {
        let g = seed_clique(1);
        assert_eq!((g.live_count(), g.edge_count()), (2, 1));

        let g = seed_clique(3);
        assert_eq!((g.live_count(), g.edge_count()), (4, 6));
        for &u in g.live_nodes() {
            assert_eq!(g.degree(u), 3);
        }

        let g = seed_clique(2);
        assert_eq!((g.live_count(), g.edge_count()), (3, 3));
    }

    #[test]
    fn validate_rejects_bad_params() {
        assert_eq!(
            params(0, 1, 1, Cutoff::Unbounded).validate(),
            Err(GrowthError::MinDegreeZero)
        );
        assert_eq!(
            params(3, 1, 1, Cutoff::Bounded(2)).validate(),
            Err(GrowthError::CutoffNotAboveM { k_c: 2, m: 3 })
        );
        let mut p = params(1, 1, 1, Cutoff::Unbounded);
        p.mu = 1.0;
        assert_eq!(p.validate(), Err(GrowthError::MuOutOfRange));
        let mut p = params(3, 1, 1, Cutoff::Unbounded);
        p.n_target = 4;
        assert_eq!(
            p.validate(),
            Err(GrowthError::TargetTooSmall { n_target: 4, m: 3 })
        );
    }

    #[test]
    fn join_on_k4_attaches_to_three_distinct_nodes() {
        // Every 3-subset of K4 must show up; nothing but 3-subsets may.
        let p = params(3, 2, 0, Cutoff::Unbounded);
        let mut seen: BTreeSet<Vec<NodeId>> = BTreeSet::new();
        for seed in 0..200 {
            let mut g = seed_clique(3);
            let mut trace = GrowthTrace::default();
            let u = join(&mut g, &p, &mut trace, &mut rng(seed));
            assert_eq!(g.degree(u), 3);
            assert_eq!(trace.failed_stub_attachments, 0);
            let mut ns: Vec<NodeId> = g.neighbors(u).collect();
            ns.sort();
            assert_eq!(ns.len(), 3);
            seen.insert(ns);
            let stay_deg3 = g.live_nodes().iter().filter(|&&v| g.degree(v) == 3).count();
            // One old node keeps degree 3 (plus u itself), three become 4.
            assert_eq!(stay_deg3, 2);
            g.audit().unwrap();
        }
        assert_eq!(seen.len(), 4, "all four 3-subsets of K4 reachable");
    }

    #[test]
    fn join_tau_zero_bypasses_degree_weighting() {
        // Two nodes with one edge, m=1, tau_j=0: the contact draw alone
        // decides, so each side is hit half the time.
        let p = params(1, 0, 0, Cutoff::Unbounded);
        let trials = 100_000;
        let mut hits0 = 0u32;
        let mut r = rng(11);
        for _ in 0..trials {
            let mut g = Graph::new();
            let a = g.add_node();
            let b = g.add_node();
            g.add_edge(a, b).unwrap();
            let mut trace = GrowthTrace::default();
            let u = join(&mut g, &p, &mut trace, &mut r);
            assert_eq!(g.degree(u), 1);
            if g.contains_edge(u, a) {
                hits0 += 1;
            }
        }
        let freq = f64::from(hits0) / trials as f64;
        assert!((freq - 0.5).abs() < 0.01, "freq {freq}");
    }

    #[test]
    fn horizon_pick_is_degree_proportional() {
        // Star with 5 leaves; horizon of radius 1 around a leaf is
        // {leaf, hub}. The hub (degree 5) must win 5/6 of the draws.
        let p = params(1, 1, 0, Cutoff::Unbounded);
        let mut g = Graph::new();
        let hub = g.add_node();
        let leaves: Vec<NodeId> = (0..5).map(|_| g.add_node()).collect();
        for &l in &leaves {
            g.add_edge(hub, l).unwrap();
        }
        let pinned_leaf = leaves[0];
        let mut r = rng(7);
        let trials = 100_000;
        let mut hub_hits = 0u32;
        for _ in 0..trials {
            let mut g2 = g.clone();
            let u = g2.add_node();
            let horizon = g2.ball(pinned_leaf, p.tau_j);
            let c = pick_preferential(
                &g2,
                &horizon,
                |c| c != u && p.k_c.accepts(g2.degree(c)) && !g2.contains_edge(u, c),
                &mut r,
            )
            .unwrap();
            if c == hub {
                hub_hits += 1;
            }
        }
        let freq = f64::from(hub_hits) / trials as f64;
        assert!((freq - 5.0 / 6.0).abs() < 0.01, "freq {freq}");
    }

    #[test]
    fn join_on_saturated_network_places_no_links() {
        // Triangle with k_c = 2: every node is at the cutoff.
        let p = params(1, 2, 0, Cutoff::Bounded(2));
        let mut g = seed_clique(2);
        let mut trace = GrowthTrace::default();
        let u = join(&mut g, &p, &mut trace, &mut rng(3));
        assert_eq!(g.degree(u), 0);
        assert_eq!(trace.failed_stub_attachments, 1);
        g.audit().unwrap();
    }

    #[test]
    fn leave_without_horizon_leaves_orphans() {
        let p = params(1, 1, 0, Cutoff::Unbounded);
        let mut g = Graph::new();
        let ids: Vec<NodeId> = (0..3).map(|_| g.add_node()).collect();
        g.add_edge(ids[0], ids[1]).unwrap();
        g.add_edge(ids[1], ids[2]).unwrap();
        let mut trace = GrowthTrace::default();
        leave(&mut g, ids[1], &p, &mut trace, &mut rng(5)).unwrap();
        assert_eq!(g.degree(ids[0]), 0);
        assert_eq!(g.degree(ids[2]), 0);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(trace.rewires_attempted, 0);
    }

    #[test]
    fn leave_path_interior_with_horizon_one() {
        // 0-1-2, delete 1: node 0 rewires to 2; node 2 then has no
        // candidate left. Final graph is the single edge 0-2.
        let p = params(1, 1, 1, Cutoff::Unbounded);
        for seed in 0..50 {
            let mut g = Graph::new();
            let ids: Vec<NodeId> = (0..3).map(|_| g.add_node()).collect();
            g.add_edge(ids[0], ids[1]).unwrap();
            g.add_edge(ids[1], ids[2]).unwrap();
            let mut trace = GrowthTrace::default();
            leave(&mut g, ids[1], &p, &mut trace, &mut rng(seed)).unwrap();
            assert!(g.contains_edge(ids[0], ids[2]));
            assert_eq!(g.edge_count(), 1);
            assert_eq!(trace.rewires_attempted, 2);
            assert_eq!(trace.rewires_completed, 1);
        }
    }

    #[test]
    fn leave_star_hub_reconnects_all_leaves() {
        // Hub deleted with tau_l=1: the three leaves rewire among
        // themselves, ending with 2 or 3 edges and nobody isolated.
        let p = params(1, 1, 1, Cutoff::Unbounded);
        let mut two = 0u32;
        let mut three = 0u32;
        for seed in 0..2000 {
            let mut g = Graph::new();
            let hub = g.add_node();
            let leaves: Vec<NodeId> = (0..3).map(|_| g.add_node()).collect();
            for &l in &leaves {
                g.add_edge(hub, l).unwrap();
            }
            let mut trace = GrowthTrace::default();
            leave(&mut g, hub, &p, &mut trace, &mut rng(seed)).unwrap();
            for &l in &leaves {
                assert!(g.degree(l) >= 1, "leaf left isolated");
            }
            match g.edge_count() {
                2 => two += 1,
                3 => three += 1,
                n => panic!("unexpected edge count {n}"),
            }
            g.audit().unwrap();
        }
        assert!(two > 0 && three > 0, "both outcomes must occur");
    }

    #[test]
    fn leave_rejects_dead_victim() {
        let p = params(1, 1, 1, Cutoff::Unbounded);
        let mut g = seed_clique(1);
        let mut trace = GrowthTrace::default();
        assert!(leave(&mut g, NodeId::new(9), &p, &mut trace, &mut rng(0)).is_err());
    }

    #[test]
    fn grow_without_churn_builds_a_tree_for_m1() {
        let p = GrowthParams {
            mu: 0.0,
            tau_j: usize::MAX,
            tau_l: 0,
            k_c: Cutoff::Unbounded,
            m: 1,
            n_target: 1000,
            seed: 42,
        };
        let (g, trace) = grow(&p).unwrap();
        assert_eq!(g.live_count(), 1000);
        assert_eq!(g.edge_count(), 999);
        assert_eq!(trace.joins, 998);
        assert_eq!(trace.leaves, 0);
        assert_eq!(trace.failed_stub_attachments, 0);
        g.audit().unwrap();
    }

    #[test]
    fn grow_edge_count_formula_when_no_stub_fails() {
        for (m, seed) in [(1usize, 1u64), (2, 2), (3, 3)] {
            let p = GrowthParams {
                mu: 0.0,
                tau_j: 2,
                tau_l: 0,
                k_c: Cutoff::Unbounded,
                m,
                n_target: 500,
                seed,
            };
            let (g, trace) = grow(&p).unwrap();
            assert_eq!(trace.failed_stub_attachments, 0);
            let expected = m * (m + 1) / 2 + m * (p.n_target - m - 1);
            assert_eq!(g.edge_count(), expected);
        }
    }

    #[test]
    fn grow_respects_hard_cutoff_everywhere() {
        let p = GrowthParams {
            mu: 0.2,
            tau_j: 2,
            tau_l: 2,
            k_c: Cutoff::Bounded(10),
            m: 3,
            n_target: 600,
            seed: 9,
        };
        let (g, _) = grow(&p).unwrap();
        for &u in g.live_nodes() {
            assert!(g.degree(u) <= 10, "node {u} above cutoff");
        }
        g.audit().unwrap();
    }

    #[test]
    fn grow_with_churn_keeps_leave_ratio() {
        let mut ratios = vec![];
        for seed in 0..3 {
            let p = GrowthParams {
                mu: 0.3,
                tau_j: 2,
                tau_l: 1,
                k_c: Cutoff::Unbounded,
                m: 1,
                n_target: 4000,
                seed,
            };
            let (g, trace) = grow(&p).unwrap();
            assert_eq!(g.live_count(), 4000);
            assert!(trace.leaves <= trace.joins);
            ratios.push(trace.leaves as f64 / trace.joins as f64);
        }
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        assert!((mean - 0.3).abs() < 0.02, "leave/join ratio {mean}");
    }

    #[test]
    fn grow_is_deterministic_in_the_seed() {
        let p = GrowthParams {
            mu: 0.25,
            tau_j: 1,
            tau_l: 1,
            k_c: Cutoff::Bounded(20),
            m: 2,
            n_target: 300,
            seed: 77,
        };
        let (g1, t1) = grow(&p).unwrap();
        let (g2, t2) = grow(&p).unwrap();
        assert_eq!(t1, t2);
        assert_eq!(g1.live_count(), g2.live_count());
        assert_eq!(g1.edge_count(), g2.edge_count());
        for &u in g1.live_nodes() {
            let n1: BTreeSet<NodeId> = g1.neighbors(u).collect();
            let n2: BTreeSet<NodeId> = g2.neighbors(u).collect();
            assert_eq!(n1, n2);
        }
    }
}
