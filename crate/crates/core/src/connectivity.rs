//! Cut nodes, biconnected components, and the block-cut sketch.
//!
//! `find_bccs` is an iterative Hopcroft–Tarjan decomposition: every edge lands
//! in exactly one biconnected component, bridges become single-edge components,
//! and isolated nodes get a trivial single-node component so that every node is
//! housed somewhere. `build_sketch` then condenses the decomposition into the
//! bipartite block-cut graph (cut vertices on one side, components on the
//! other, each component weighted by its node count). Per connected component
//! that sketch is a tree, which is what the agent-extraction pass walks.

use crate::graph::{NodeId, WeightedGraph};

/// One biconnected component: its member edges and the distinct endpoint set.
#[derive(Debug, Clone)]
pub struct Bcc {
    /// Distinct member nodes, ascending. A trivial isolated-node component has
    /// one node and no edges.
    pub nodes: Vec<NodeId>,
    /// Member edges as canonical `(min, max)` pairs, ascending.
    pub edges: Vec<(NodeId, NodeId)>,
}

/// Output of [`find_bccs`].
#[derive(Debug, Clone)]
pub struct BccDecomposition {
    /// Cut nodes of the graph, ascending.
    pub cut_nodes: Vec<NodeId>,
    /// All biconnected components. Every graph edge appears in exactly one.
    pub bccs: Vec<Bcc>,
}

/// Block-cut sketch: bipartite graph over cut vertices and components.
#[derive(Debug, Clone)]
pub struct BcSketch {
    /// Graph node ids of the cut vertices, ascending.
    pub cut_vertices: Vec<NodeId>,
    /// One entry per component of the decomposition (same order); the value is
    /// the component's node count, the weight the extraction pass budgets on.
    pub bcc_vertices: Vec<u64>,
    /// Sketch edges as `(index into cut_vertices, index into bcc_vertices)`;
    /// present iff the cut vertex is a member of the component.
    pub edges: Vec<(u32, u32)>,
}

const UNVISITED: u32 = u32::MAX;
const NO_PARENT: NodeId = NodeId::MAX;

/// Decomposes `g` into biconnected components and finds its cut nodes.
///
/// Iterative DFS with an explicit frame stack, so recursion depth is not a
/// concern on long path-like road networks.
pub fn find_bccs(g: &WeightedGraph) -> BccDecomposition {
    let n = g.node_count();
    let mut disc = vec![UNVISITED; n];
    let mut low = vec![0u32; n];
    let mut is_cut = vec![false; n];
    let mut timer: u32 = 0;
    let mut bccs: Vec<Bcc> = Vec::new();
    // (node, parent, next adjacency index)
    let mut frames: Vec<(NodeId, NodeId, usize)> = Vec::new();
    let mut edge_stack: Vec<(NodeId, NodeId)> = Vec::new();

    for root in 0..n as NodeId {
        if disc[root as usize] != UNVISITED {
            continue;
        }
        if g.degree(root) == 0 {
            disc[root as usize] = timer;
            timer += 1;
            bccs.push(Bcc { nodes: vec![root], edges: Vec::new() });
            continue;
        }
        let mut root_children = 0usize;
        disc[root as usize] = timer;
        low[root as usize] = timer;
        timer += 1;
        frames.push((root, NO_PARENT, 0));
        while let Some(top) = frames.last_mut() {
            let (u, parent, idx) = (top.0, top.1, top.2);
            if idx < g.degree(u) as usize {
                top.2 += 1;
                let (v, _) = g.neighbors(u)[idx];
                if v == parent {
                    // Parallel edges were collapsed at construction, so the
                    // parent shows up exactly once and is safe to skip whole.
                    continue;
                }
                if disc[v as usize] == UNVISITED {
                    if u == root {
                        root_children += 1;
                    }
                    edge_stack.push((u, v));
                    disc[v as usize] = timer;
                    low[v as usize] = timer;
                    timer += 1;
                    frames.push((v, u, 0));
                } else if disc[v as usize] < disc[u as usize] {
                    // Back edge to an ancestor; the mirrored traversal from v
                    // will see disc[u] > disc[v] and skip, so each back edge
                    // is stacked exactly once.
                    edge_stack.push((u, v));
                    low[u as usize] = low[u as usize].min(disc[v as usize]);
                }
            } else {
                frames.pop();
                if let Some(pf) = frames.last_mut() {
                    let pu = pf.0;
                    low[pu as usize] = low[pu as usize].min(low[u as usize]);
                    if low[u as usize] >= disc[pu as usize] {
                        // Tree edge (pu, u) closes a component: everything
                        // stacked since it belongs to that component.
                        let mut edges = Vec::new();
                        while let Some(e) = edge_stack.pop() {
                            edges.push(e);
                            if e == (pu, u) {
                                break;
                            }
                        }
                        bccs.push(make_bcc(edges));
                        if pu != root {
                            is_cut[pu as usize] = true;
                        }
                    }
                }
            }
        }
        debug_assert!(edge_stack.is_empty());
        if root_children >= 2 {
            is_cut[root as usize] = true;
        }
    }

    let cut_nodes = (0..n as NodeId).filter(|&v| is_cut[v as usize]).collect();
    BccDecomposition { cut_nodes, bccs }
}

fn make_bcc(raw_edges: Vec<(NodeId, NodeId)>) -> Bcc {
    let mut edges: Vec<(NodeId, NodeId)> =
        raw_edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
    edges.sort_unstable();
    edges.dedup();
    let mut nodes: Vec<NodeId> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
    nodes.sort_unstable();
    nodes.dedup();
    Bcc { nodes, edges }
}

/// Builds the block-cut sketch of `g` from its decomposition `d`.
///
/// Component weights are node counts; a sketch edge joins a cut vertex to
/// every component it belongs to, so a cut vertex always has degree >= 2 and
/// per connected component the sketch is a tree.
pub fn build_sketch(g: &WeightedGraph, d: &BccDecomposition) -> BcSketch {
    let mut cut_index = vec![u32::MAX; g.node_count()];
    for (i, &v) in d.cut_nodes.iter().enumerate() {
        cut_index[v as usize] = i as u32;
    }
    let mut bcc_vertices = Vec::with_capacity(d.bccs.len());
    let mut edges = Vec::new();
    for (b, bcc) in d.bccs.iter().enumerate() {
        bcc_vertices.push(bcc.nodes.len() as u64);
        for &v in &bcc.nodes {
            let ci = cut_index[v as usize];
            if ci != u32::MAX {
                edges.push((ci, b as u32));
            }
        }
    }
    BcSketch { cut_vertices: d.cut_nodes.clone(), bcc_vertices, edges }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::connected_components;
    use crate::naive;

    fn bcc_edge_sets(d: &BccDecomposition) -> Vec<Vec<(NodeId, NodeId)>> {
        let mut sets: Vec<_> = d.bccs.iter().map(|b| b.edges.clone()).collect();
        sets.sort();
        sets
    }

    #[test]
    fn path_has_middle_cut_node_and_bridge_bccs() {
        let g = WeightedGraph::from_edges(3, &[(0, 1, 1), (1, 2, 1)]).unwrap();
        let d = find_bccs(&g);
        assert_eq!(d.cut_nodes, vec![1]);
        assert_eq!(bcc_edge_sets(&d), vec![vec![(0, 1)], vec![(1, 2)]]);
    }

    #[test]
    fn triangle_is_one_bcc_without_cut_nodes() {
        let g = WeightedGraph::from_edges(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 1)]).unwrap();
        let d = find_bccs(&g);
        assert!(d.cut_nodes.is_empty());
        assert_eq!(d.bccs.len(), 1);
        assert_eq!(d.bccs[0].edges, vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(d.bccs[0].nodes, vec![0, 1, 2]);
    }

    #[test]
    fn triangle_with_pendant_splits_at_the_attachment() {
        // triangle {0,1,2} plus pendant edge (0,3)
        let g =
            WeightedGraph::from_edges(4, &[(0, 1, 1), (1, 2, 1), (0, 2, 1), (0, 3, 1)]).unwrap();
        let d = find_bccs(&g);
        assert_eq!(d.cut_nodes, vec![0]);
        assert_eq!(bcc_edge_sets(&d), vec![vec![(0, 1), (0, 2), (1, 2)], vec![(0, 3)]]);

        let s = build_sketch(&g, &d);
        assert_eq!(s.cut_vertices, vec![0]);
        let mut weights = s.bcc_vertices.clone();
        weights.sort_unstable();
        assert_eq!(weights, vec![2, 3]);
        assert_eq!(s.edges.len(), 2);
    }

    #[test]
    fn tree_input_makes_every_edge_its_own_bcc() {
        // star with an extra tail: 0 is center of {1,2,3}, 3-4 extends
        let g =
            WeightedGraph::from_edges(5, &[(0, 1, 1), (0, 2, 1), (0, 3, 1), (3, 4, 1)]).unwrap();
        let d = find_bccs(&g);
        assert_eq!(d.cut_nodes, vec![0, 3]);
        assert_eq!(d.bccs.len(), 4);
        for b in &d.bccs {
            assert_eq!(b.edges.len(), 1);
            assert_eq!(b.nodes.len(), 2);
        }
        let s = build_sketch(&g, &d);
        assert!(s.bcc_vertices.iter().all(|&w| w == 2));
    }

    #[test]
    fn isolated_nodes_become_trivial_bccs() {
        let g = WeightedGraph::from_edges(4, &[(1, 2, 1)]).unwrap();
        let d = find_bccs(&g);
        assert!(d.cut_nodes.is_empty());
        let mut sizes: Vec<usize> = d.bccs.iter().map(|b| b.nodes.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 1, 2]);
        let s = build_sketch(&g, &d);
        let mut weights = s.bcc_vertices.clone();
        weights.sort_unstable();
        assert_eq!(weights, vec![1, 1, 2]);
        assert!(s.edges.is_empty());
    }

    #[test]
    fn block_chain_fixture_has_expected_weights_and_cuts() {
        let g = naive::block_chain_fixture();
        let d = find_bccs(&g);
        assert_eq!(d.cut_nodes, vec![3, 4, 5, 6, 10]);
        let s = build_sketch(&g, &d);
        let mut weights = s.bcc_vertices.clone();
        weights.sort_unstable();
        assert_eq!(weights, vec![2, 2, 2, 2, 4, 5]);
        // chain sketch: 6 components + 5 cut vertices, tree => 10 edges
        assert_eq!(s.edges.len(), 10);
    }

    #[test]
    fn cut_nodes_match_removal_oracle_on_exhaustive_small_graphs() {
        for n in 2..=5 {
            for g in naive::enumerate_connected_graphs(n) {
                let d = find_bccs(&g);
                assert_eq!(
                    d.cut_nodes,
                    naive::cut_nodes_by_removal(&g),
                    "cut nodes differ on n={n} graph {:?}",
                    g.edges().collect::<Vec<_>>()
                );
            }
        }
    }

    #[test]
    fn every_edge_lands_in_exactly_one_bcc_on_random_graphs() {
        for seed in 0..40 {
            let g = naive::random_connected_graph(seed, 30, 20, 9);
            let d = find_bccs(&g);
            let mut seen: Vec<(NodeId, NodeId)> =
                d.bccs.iter().flat_map(|b| b.edges.iter().copied()).collect();
            seen.sort_unstable();
            let mut all: Vec<(NodeId, NodeId)> = g.edges().map(|(u, v, _)| (u, v)).collect();
            all.sort_unstable();
            assert_eq!(seen, all, "seed {seed}");
            assert_eq!(d.cut_nodes, naive::cut_nodes_by_removal(&g), "seed {seed}");
        }
    }

    #[test]
    fn two_edges_of_a_bcc_share_a_simple_cycle() {
        // Check the common-cycle invariant indirectly: within a BCC of >= 2
        // edges, removing any single node keeps the remaining members of that
        // BCC connected (biconnectedness), brute-forced on small graphs.
        for seed in 0..20 {
            let g = naive::random_connected_graph(seed, 10, 6, 5);
            let d = find_bccs(&g);
            for bcc in d.bccs.iter().filter(|b| b.edges.len() >= 2) {
                for &drop in &bcc.nodes {
                    let keep: Vec<NodeId> =
                        bcc.nodes.iter().copied().filter(|&v| v != drop).collect();
                    assert!(
                        nodes_connected_within(&g, &keep),
                        "seed {seed}: bcc {:?} disconnected by {drop}",
                        bcc.nodes
                    );
                }
            }
        }
    }

    fn nodes_connected_within(g: &WeightedGraph, keep: &[NodeId]) -> bool {
        if keep.len() <= 1 {
            return true;
        }
        let inside = |v: NodeId| keep.binary_search(&v).is_ok();
        let mut seen = vec![keep[0]];
        let mut stack = vec![keep[0]];
        while let Some(u) = stack.pop() {
            for &(v, _) in g.neighbors(u) {
                if inside(v) && !seen.contains(&v) {
                    seen.push(v);
                    stack.push(v);
                }
            }
        }
        seen.len() == keep.len()
    }

    #[test]
    fn sketch_is_a_bipartite_forest_with_tight_weight_sum() {
        for seed in 0..40 {
            let g = naive::random_graph_with_hangings(seed, 14, 10);
            let d = find_bccs(&g);
            let s = build_sketch(&g, &d);

            // every sketch edge joins a real cut vertex to a component it
            // belongs to
            for &(ci, bi) in &s.edges {
                let v = s.cut_vertices[ci as usize];
                assert!(d.bccs[bi as usize].nodes.contains(&v), "seed {seed}");
            }

            // per graph component the sketch is a tree: count sketch vertices
            // and edges that live in each component
            let comp = connected_components(&g);
            let ncomp = comp.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
            let mut verts = vec![0usize; ncomp];
            let mut edges = vec![0usize; ncomp];
            for &v in &s.cut_vertices {
                verts[comp[v as usize] as usize] += 1;
            }
            for b in &d.bccs {
                verts[comp[b.nodes[0] as usize] as usize] += 1;
            }
            for &(_, bi) in &s.edges {
                edges[comp[d.bccs[bi as usize].nodes[0] as usize] as usize] += 1;
            }
            for c in 0..ncomp {
                assert_eq!(edges[c] + 1, verts[c], "seed {seed} component {c} not a tree");
            }

            // weight bookkeeping: sum over components of (omega - 1) equals
            // n - component_count exactly when consecutive components overlap
            // in single cut vertices, which the tree shape guarantees
            let weight_sum: u64 = s.bcc_vertices.iter().map(|&w| w - 1).sum();
            assert_eq!(weight_sum, (g.node_count() - ncomp) as u64, "seed {seed}");
        }
    }
}
