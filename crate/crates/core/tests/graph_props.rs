//! Property tests for the graph container: structural invariants under
//! arbitrary operation sequences, and BFS horizons checked against an
//! all-pairs shortest-path oracle.

use std::collections::BTreeSet;

use alsf_core::{Graph, NodeId};
use proptest::prelude::*;

#[derive(Clone, Debug)]
enum Op {
    AddNode,
    AddEdge(usize, usize),
    RemoveNode(usize),
}

fn op_strategy() -> impl Strategy<Value = Op> {
    prop_oneof![
        2 => Just(Op::AddNode),
        5 => (0usize..64, 0usize..64).prop_map(|(a, b)| Op::AddEdge(a, b)),
        1 => (0usize..64).prop_map(Op::RemoveNode),
    ]
}

fn apply(ops: &[Op]) -> Graph {
    let mut g = Graph::new();
    g.add_node();
    g.add_node();
    for op in ops {
        match *op {
            Op::AddNode => {
                g.add_node();
            }
            Op::AddEdge(a, b) => {
                let live = g.live_nodes();
                if live.len() >= 2 {
                    let u = live[a % live.len()];
                    let v = live[b % live.len()];
                    if u != v {
                        g.add_edge(u, v).unwrap();
                    }
                }
            }
            Op::RemoveNode(a) => {
                let live = g.live_nodes();
                if !live.is_empty() {
                    let u = live[a % live.len()];
                    g.remove_node(u).unwrap();
                }
            }
        }
    }
    g
}

/// Floyd-Warshall over live nodes; independent of the BFS implementation.
fn apsp(g: &Graph) -> Vec<Vec<u32>> {
    const INF: u32 = u32::MAX / 4;
    let n = g.id_bound();
    let mut dist = vec![vec![INF; n]; n];
    for &u in g.live_nodes() {
        dist[u.index()][u.index()] = 0;
        for v in g.neighbors(u) {
            dist[u.index()][v.index()] = 1;
        }
    }
    for k in 0..n {
        for i in 0..n {
            if dist[i][k] >= INF {
                continue;
            }
            for j in 0..n {
                let via = dist[i][k] + dist[k][j];
                if via < dist[i][j] {
                    dist[i][j] = via;
                }
            }
        }
    }
    dist
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn audit_holds_under_arbitrary_operations(ops in prop::collection::vec(op_strategy(), 0..120)) {
        let g = apply(&ops);
        g.audit().unwrap();
        // Symmetry and edge count double-checked from the outside.
        let mut degree_sum = 0;
        for &u in g.live_nodes() {
            degree_sum += g.degree(u);
            for v in g.neighbors(u) {
                prop_assert!(g.contains_edge(v, u));
                prop_assert_ne!(v, u);
            }
        }
        prop_assert_eq!(degree_sum, 2 * g.edge_count());
    }

    #[test]
    fn horizons_grow_with_radius(ops in prop::collection::vec(op_strategy(), 0..80), root_pick in 0usize..64) {
        let g = apply(&ops);
        if g.live_count() == 0 {
            return Ok(());
        }
        let root = g.live_nodes()[root_pick % g.live_count()];
        let mut prev: BTreeSet<NodeId> = BTreeSet::new();
        for radius in 0..6 {
            let h: BTreeSet<NodeId> = g.bfs_horizon(root, radius, &[]).into_iter().collect();
            prop_assert!(h.is_superset(&prev), "horizon shrank at radius {}", radius);
            prev = h;
        }
    }

    #[test]
    fn horizon_matches_apsp_oracle(
        ops in prop::collection::vec(op_strategy(), 0..100),
        root_pick in 0usize..64,
        radius in 0usize..5,
        exclude_picks in prop::collection::vec(0usize..64, 0..4),
    ) {
        let g = apply(&ops);
        if g.live_count() == 0 {
            return Ok(());
        }
        let live = g.live_nodes();
        let root = live[root_pick % live.len()];
        let exclude: Vec<NodeId> = exclude_picks.iter().map(|&i| live[i % live.len()]).collect();

        let dist = apsp(&g);
        let want: BTreeSet<NodeId> = live
            .iter()
            .copied()
            .filter(|v| dist[root.index()][v.index()] as usize <= radius)
            .filter(|v| !exclude.contains(v))
            .collect();
        let got: BTreeSet<NodeId> = g.bfs_horizon(root, radius, &exclude).into_iter().collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn removed_ids_never_come_back(ops in prop::collection::vec(op_strategy(), 0..120)) {
        let mut g = apply(&ops);
        let bound = g.id_bound();
        let dead: Vec<u32> = (0..bound as u32)
            .filter(|&i| !g.is_live(NodeId::new(i)))
            .collect();
        for _ in 0..4 {
            let fresh = g.add_node();
            prop_assert!(fresh.index() >= bound);
            prop_assert!(!dead.contains(&fresh.value()));
        }
    }
}
