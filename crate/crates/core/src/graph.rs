//! Undirected simple-graph container for overlay simulations.
//!
//! Nodes carry no payload; the graph tracks adjacency, liveness, and the
//! edge count. Node ids are allocated monotonically and never reused
//! within a run, so experiment traces can refer to deleted nodes
//! unambiguously. Degree lookups are O(1) and neighbor membership tests
//! are O(1) expected; the growth loop performs millions of both.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use indexmap::IndexSet;
use rustc_hash::FxBuildHasher;

/// Identifier of a node, stable for the lifetime of the node.
///
/// Ids of deleted nodes are never handed out again by [`Graph::add_node`].
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct NodeId(u32);

impl NodeId {
    pub fn new(id: u32) -> Self {
        NodeId(id)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn value(self) -> u32 {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Neighbor set: hashed membership plus insertion-ordered iteration, so
/// random draws over neighbors are reproducible run to run.
type AdjSet = IndexSet<NodeId, FxBuildHasher>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphError {
    /// Operation referenced a node that is not live.
    NotLive(NodeId),
    /// Attempted to add an edge from a node to itself.
    SelfLoop(NodeId),
    /// A node id was created twice (only possible through snapshot loading).
    DuplicateNode(NodeId),
    /// Internal-consistency audit failed.
    Corrupt(String),
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::NotLive(u) => write!(f, "node {u} is not live"),
            GraphError::SelfLoop(u) => write!(f, "self-loop on node {u} rejected"),
            GraphError::DuplicateNode(u) => write!(f, "node {u} created twice"),
            GraphError::Corrupt(detail) => write!(f, "graph audit failed: {detail}"),
        }
    }
}

impl core::error::Error for GraphError {}

const NOT_LIVE: u32 = u32::MAX;

/// Mutable undirected simple graph with live-node bookkeeping.
///
/// Invariants maintained by every operation:
/// * symmetry: `v ∈ adj[u]` iff `u ∈ adj[v]`,
/// * no self-loops, no multi-edges,
/// * `edge_count` equals half the degree sum.
///
/// A `Graph` is confined to one simulation worker; read-only snapshots
/// may be shared freely.
#[derive(Clone, Debug, Default)]
pub struct Graph {
    /// Indexed by node id; `None` marks a dead (or never-created) id.
    adjacency: Vec<Option<AdjSet>>,
    /// Live node ids in arbitrary but deterministic order, for O(1)
    /// uniform sampling.
    live: Vec<NodeId>,
    /// Position of each id inside `live`, or `NOT_LIVE`.
    live_pos: Vec<u32>,
    edge_count: usize,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of live nodes.
    pub fn live_count(&self) -> usize {
        self.live.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// One past the largest id ever allocated. Suitable as the length of
    /// id-indexed scratch arrays.
    pub fn id_bound(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_live(&self, u: NodeId) -> bool {
        u.index() < self.adjacency.len() && self.adjacency[u.index()].is_some()
    }

    /// Live node ids as a slice; order is deterministic but unspecified.
    pub fn live_nodes(&self) -> &[NodeId] {
        &self.live
    }

    /// Degree of a live node. Panics if `u` is not live.
    pub fn degree(&self, u: NodeId) -> usize {
        self.adj(u).len()
    }

    /// Neighbors of a live node in insertion order. Panics if `u` is not
    /// live.
    pub fn neighbors(&self, u: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.adj(u).iter().copied()
    }

    /// The `idx`-th neighbor of `u` in insertion order (O(1)).
    pub fn neighbor_at(&self, u: NodeId, idx: usize) -> NodeId {
        *self.adj(u).get_index(idx).expect("neighbor index in range")
    }

    pub fn contains_edge(&self, u: NodeId, v: NodeId) -> bool {
        match (self.adj_opt(u), self.adj_opt(v)) {
            // Membership is symmetric; probe the smaller set.
            (Some(au), Some(av)) => {
                if au.len() <= av.len() {
                    au.contains(&v)
                } else {
                    av.contains(&u)
                }
            }
            _ => false,
        }
    }

    fn adj(&self, u: NodeId) -> &AdjSet {
        self.adj_opt(u)
            .unwrap_or_else(|| panic!("node {u} is not live"))
    }

    fn adj_opt(&self, u: NodeId) -> Option<&AdjSet> {
        self.adjacency.get(u.index()).and_then(|a| a.as_ref())
    }

    /// Creates a fresh node with no edges and returns its id. Ids are
    /// allocated monotonically; ids of deleted nodes are never reused.
    pub fn add_node(&mut self) -> NodeId {
        let id = NodeId(self.adjacency.len() as u32);
        self.adjacency.push(Some(AdjSet::default()));
        self.live_pos.push(self.live.len() as u32);
        self.live.push(id);
        id
    }

    /// Creates a live node with a caller-chosen id, for loading graph
    /// snapshots. Ids skipped over stay dead. Errors if `u` is already
    /// live.
    pub fn add_node_with_id(&mut self, u: NodeId) -> Result<(), GraphError> {
        if self.is_live(u) {
            return Err(GraphError::DuplicateNode(u));
        }
        if u.index() >= self.adjacency.len() {
            self.adjacency.resize(u.index() + 1, None);
            self.live_pos.resize(u.index() + 1, NOT_LIVE);
        }
        self.adjacency[u.index()] = Some(AdjSet::default());
        self.live_pos[u.index()] = self.live.len() as u32;
        self.live.push(u);
        Ok(())
    }

    /// Inserts the edge `{u, v}`. Returns `true` if the edge was absent,
    /// `false` (and changes nothing) if it was already present.
    pub fn add_edge(&mut self, u: NodeId, v: NodeId) -> Result<bool, GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if !self.is_live(u) {
            return Err(GraphError::NotLive(u));
        }
        if !self.is_live(v) {
            return Err(GraphError::NotLive(v));
        }
        if self.contains_edge(u, v) {
            return Ok(false);
        }
        self.adjacency[u.index()].as_mut().unwrap().insert(v);
        self.adjacency[v.index()].as_mut().unwrap().insert(u);
        self.edge_count += 1;
        Ok(true)
    }

    /// Removes `u` and all incident edges; returns the former neighbors
    /// of `u` (the rewiring step needs them).
    pub fn remove_node(&mut self, u: NodeId) -> Result<Vec<NodeId>, GraphError> {
        if !self.is_live(u) {
            return Err(GraphError::NotLive(u));
        }
        let adj = self.adjacency[u.index()].take().unwrap();
        let former: Vec<NodeId> = adj.into_iter().collect();
        for &w in &former {
            self.adjacency[w.index()]
                .as_mut()
                .unwrap()
                .swap_remove(&u);
        }
        self.edge_count -= former.len();

        // Swap-remove from the live index.
        let pos = self.live_pos[u.index()] as usize;
        self.live_pos[u.index()] = NOT_LIVE;
        let last = self.live.pop().unwrap();
        if pos < self.live.len() {
            self.live[pos] = last;
            self.live_pos[last.index()] = pos as u32;
        }
        Ok(former)
    }

    /// All live nodes within `radius` hops of `root`, in BFS discovery
    /// order, `root` first. Panics if `root` is not live.
    pub fn ball(&self, root: NodeId, radius: usize) -> Vec<NodeId> {
        assert!(self.is_live(root), "ball root {root} is not live");
        let mut visited = vec![false; self.adjacency.len()];
        visited[root.index()] = true;
        let mut out = vec![root];
        let mut frontier_start = 0;
        for _ in 0..radius {
            let frontier_end = out.len();
            if frontier_start == frontier_end {
                break;
            }
            for i in frontier_start..frontier_end {
                let v = out[i];
                for w in self.adj(v) {
                    if !visited[w.index()] {
                        visited[w.index()] = true;
                        out.push(*w);
                    }
                }
            }
            frontier_start = frontier_end;
        }
        out
    }

    /// Nodes at hop distance ≤ `radius` from `root`, minus `exclude`.
    /// The root itself is part of the result (distance 0) unless
    /// excluded. Excluded nodes still conduct the traversal; they are
    /// only dropped from the result.
    pub fn bfs_horizon(&self, root: NodeId, radius: usize, exclude: &[NodeId]) -> Vec<NodeId> {
        self.ball(root, radius)
            .into_iter()
            .filter(|v| !exclude.contains(v))
            .collect()
    }

    /// BFS hop distances from `src` over the whole graph. Entries are
    /// `u32::MAX` for unreachable or dead ids.
    pub fn bfs_distances(&self, src: NodeId) -> Vec<u32> {
        assert!(self.is_live(src), "bfs source {src} is not live");
        let mut dist = vec![u32::MAX; self.adjacency.len()];
        dist[src.index()] = 0;
        let mut queue = vec![src];
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head];
            head += 1;
            let d = dist[v.index()];
            for w in self.adj(v) {
                if dist[w.index()] == u32::MAX {
                    dist[w.index()] = d + 1;
                    queue.push(*w);
                }
            }
        }
        dist
    }

    /// Full-scan consistency audit: symmetry, no self-loops, edge count,
    /// and live-index bookkeeping.
    pub fn audit(&self) -> Result<(), GraphError> {
        let corrupt = |s: String| Err(GraphError::Corrupt(s));
        let mut degree_sum = 0usize;
        for (i, adj) in self.adjacency.iter().enumerate() {
            let u = NodeId(i as u32);
            let Some(adj) = adj else {
                if self.live_pos[i] != NOT_LIVE {
                    return corrupt(format!("dead node {u} has a live-index entry"));
                }
                continue;
            };
            let pos = self.live_pos[i];
            if pos == NOT_LIVE || self.live.get(pos as usize) != Some(&u) {
                return corrupt(format!("live node {u} missing from the live index"));
            }
            degree_sum += adj.len();
            for &v in adj {
                if v == u {
                    return corrupt(format!("self-loop on {u}"));
                }
                match self.adj_opt(v) {
                    Some(back) if back.contains(&u) => {}
                    Some(_) => return corrupt(format!("edge {u}-{v} lacks its reverse")),
                    None => return corrupt(format!("edge {u}-{v} points at a dead node")),
                }
            }
        }
        if degree_sum != 2 * self.edge_count {
            return corrupt(format!(
                "edge_count {} but degree sum {degree_sum}",
                self.edge_count
            ));
        }
        if self.live.len() != self.live_pos.iter().filter(|&&p| p != NOT_LIVE).count() {
            return corrupt("live list and live positions disagree".into());
        }
        Ok(())
    }
}
