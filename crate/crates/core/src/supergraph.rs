//! The super graph: a small overlay that, together with any two fragments,
//! answers shrink-graph distances exactly.
//!
//! Nodes are all partition boundary nodes plus every fragment landmark; edges
//! are the original cross-fragment edges plus each fragment's enforced edges
//! (landmark columns and direct pairs), weighted with the fragment-local
//! shortest distance Υ. Only boundary pairs whose local distance equals their
//! global distance are covered — a pair whose best route leaves the fragment
//! is reachable through cross edges and other fragments' structures, and
//! storing its (larger) local distance would be wrong.
//!
//! The load-bearing property, tested here and leaned on by the query layer:
//! for any s, t, a Dijkstra over fragment(s) ∪ fragment(t) ∪ super graph
//! returns the global shrink distance.

use crate::agents::ShrinkGraph;
use crate::graph::{dijkstra_core, Distance, NodeId, SearchSpace, WeightedGraph, UNREACHABLE};
use crate::landmarks::{hybrid_cover, hybrid_cover_uncosted, HybridLandmarkCover};
use crate::partition::Partition;

/// Where a super-graph edge came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeOrigin {
    /// An original cross-fragment edge (weight = shrink edge weight).
    Cross,
    /// An enforced edge of this fragment's cover (weight = local distance).
    Enforced { fragment: u32 },
}

/// One super-graph edge over shrink-graph node ids.
#[derive(Debug, Clone, Copy)]
pub struct SuperEdge {
    pub u: NodeId,
    pub v: NodeId,
    pub weight: Distance,
    pub origin: EdgeOrigin,
}

/// Per-fragment cover accounting, kept for reporting.
#[derive(Debug, Clone, Copy, Default)]
pub struct FragmentCoverStats {
    pub landmarks: usize,
    pub landmark_edges: usize,
    pub direct_edges: usize,
    pub covered_pairs: usize,
}

/// The assembled super graph.
#[derive(Debug, Clone)]
pub struct SuperGraph {
    /// Member nodes (shrink ids), ascending: boundary nodes plus landmarks.
    pub nodes: Vec<NodeId>,
    /// Edges, canonical (u < v), ascending, one per node pair (minimum weight
    /// wins; cross beats enforced on equal weight).
    pub edges: Vec<SuperEdge>,
    /// Reporting data per fragment.
    pub cover_stats: Vec<FragmentCoverStats>,
    /// Adjacency over shrink ids: `(neighbor, weight, edge index)`. Empty for
    /// nodes outside the super graph.
    adj: Vec<Vec<(NodeId, Distance, u32)>>,
}

impl SuperGraph {
    /// Whether shrink node `v` is a super-graph node.
    pub fn contains(&self, v: NodeId) -> bool {
        !self.adj[v as usize].is_empty()
    }

    /// Super-graph neighbors of shrink node `v` with edge indexes.
    pub fn neighbors(&self, v: NodeId) -> &[(NodeId, Distance, u32)] {
        &self.adj[v as usize]
    }

    /// The super graph as a standalone compact graph plus the compact → shrink
    /// id map. Compact ids follow `nodes` order, so edge enumeration order
    /// matches `edges`.
    pub fn compact_graph(&self) -> (WeightedGraph, Vec<NodeId>) {
        let mut index = vec![u32::MAX; self.adj.len()];
        for (i, &v) in self.nodes.iter().enumerate() {
            index[v as usize] = i as u32;
        }
        let compact_edges: Vec<(NodeId, NodeId, Distance)> = self
            .edges
            .iter()
            .map(|e| (index[e.u as usize], index[e.v as usize], e.weight))
            .collect();
        let g = WeightedGraph::from_edges(self.nodes.len(), &compact_edges)
            .expect("super edges are valid and deduped");
        debug_assert_eq!(g.edge_count(), self.edges.len());
        (g, self.nodes.clone())
    }
}

/// Boundary pairs of fragment `i` whose fragment-local shortest distance
/// equals their global shrink distance (both finite). These are exactly the
/// pairs the fragment's cover must answer.
pub fn local_global_filter(
    shrink: &ShrinkGraph,
    p: &Partition,
    i: usize,
) -> Vec<(NodeId, NodeId)> {
    let g = &shrink.graph;
    let b = &p.boundary[i];
    if b.len() < 2 {
        return Vec::new();
    }
    let admit = |x: NodeId| p.fragment_of[x as usize] == i as u32;
    let mut local = vec![vec![0; b.len()]; b.len()];
    let mut global = vec![vec![0; b.len()]; b.len()];
    let mut space = SearchSpace::new();
    for (bi, &u) in b.iter().enumerate() {
        dijkstra_core(g, u, b, Some(&admit), UNREACHABLE, None, &mut space);
        for (bj, &v) in b.iter().enumerate() {
            local[bi][bj] = space.get(v);
        }
        dijkstra_core(g, u, b, None, UNREACHABLE, None, &mut space);
        for (bj, &v) in b.iter().enumerate() {
            global[bi][bj] = space.get(v);
        }
    }
    let mut pairs = Vec::new();
    for bi in 0..b.len() {
        for bj in bi + 1..b.len() {
            if local[bi][bj] != UNREACHABLE && local[bi][bj] == global[bi][bj] {
                pairs.push((b[bi], b[bj]));
            }
        }
    }
    pairs
}

/// Builds the super graph for a partitioned shrink graph; `order` steers each
/// fragment's cover toward high-order landmarks.
pub fn build_supergraph(shrink: &ShrinkGraph, p: &Partition, order: Option<&[u32]>) -> SuperGraph {
    build_supergraph_impl(shrink, p, order, true)
}

/// [`build_supergraph`] with the landmark storage test disabled, as the size
/// baseline for the cost model.
pub fn build_supergraph_uncosted(
    shrink: &ShrinkGraph,
    p: &Partition,
    order: Option<&[u32]>,
) -> SuperGraph {
    build_supergraph_impl(shrink, p, order, false)
}

fn build_supergraph_impl(
    shrink: &ShrinkGraph,
    p: &Partition,
    order: Option<&[u32]>,
    cost_model: bool,
) -> SuperGraph {
    let g = &shrink.graph;
    let n = g.node_count();
    assert_eq!(p.fragment_of.len(), n, "partition does not match the shrink graph");

    // (u, v, w, origin) candidates; cross edges first so they win weight ties.
    let mut cand: Vec<(NodeId, NodeId, Distance, EdgeOrigin)> = p
        .cross_edges
        .iter()
        .map(|&(u, v, w)| (u, v, w, EdgeOrigin::Cross))
        .collect();
    let mut cover_stats = vec![FragmentCoverStats::default(); p.k];

    let mut frag_index = vec![u32::MAX; n];
    for i in 0..p.k {
        let members: Vec<NodeId> = (0..n as NodeId)
            .filter(|&v| p.fragment_of[v as usize] == i as u32)
            .collect();
        let pairs = local_global_filter(shrink, p, i);
        if pairs.is_empty() {
            continue;
        }
        for (ci, &v) in members.iter().enumerate() {
            frag_index[v as usize] = ci as u32;
        }
        let mut fedges = Vec::new();
        for &u in &members {
            for &(v, w) in g.neighbors(u) {
                if u < v && p.fragment_of[v as usize] == i as u32 {
                    fedges.push((frag_index[u as usize], frag_index[v as usize], w));
                }
            }
        }
        let fg = WeightedGraph::from_edges(members.len(), &fedges)
            .expect("fragment subgraph edges are valid");
        let fpairs: Vec<(NodeId, NodeId)> = pairs
            .iter()
            .map(|&(u, v)| (frag_index[u as usize], frag_index[v as usize]))
            .collect();
        let forder: Option<Vec<u32>> =
            order.map(|o| members.iter().map(|&v| o[v as usize]).collect());
        let cover = if cost_model {
            hybrid_cover(&fg, &fpairs, forder.as_deref())
        } else {
            hybrid_cover_uncosted(&fg, &fpairs, forder.as_deref())
        }
        .expect("filtered pairs are locally reachable");

        collect_cover_edges(&cover, &members, i as u32, &mut cand);
        cover_stats[i] = FragmentCoverStats {
            landmarks: cover.landmarks.len(),
            landmark_edges: cover.landmarks.iter().map(|l| l.covered.len()).sum(),
            direct_edges: cover.direct_edges.len(),
            covered_pairs: cover.landmarks.iter().map(|l| l.pairs.len()).sum::<usize>()
                + cover.direct_edges.len(),
        };
        for &v in &members {
            frag_index[v as usize] = u32::MAX;
        }
    }

    // Dedup per node pair, minimum weight first; stable sort keeps cross
    // edges ahead of equal-weight enforced edges.
    cand.sort_by_key(|&(u, v, w, _)| (u, v, w));
    let mut edges: Vec<SuperEdge> = Vec::with_capacity(cand.len());
    for (u, v, weight, origin) in cand {
        if let Some(last) = edges.last() {
            if last.u == u && last.v == v {
                continue;
            }
        }
        edges.push(SuperEdge { u, v, weight, origin });
    }

    let mut adj: Vec<Vec<(NodeId, Distance, u32)>> = vec![Vec::new(); n];
    for (idx, e) in edges.iter().enumerate() {
        adj[e.u as usize].push((e.v, e.weight, idx as u32));
        adj[e.v as usize].push((e.u, e.weight, idx as u32));
    }
    let nodes: Vec<NodeId> =
        (0..n as NodeId).filter(|&v| !adj[v as usize].is_empty()).collect();

    SuperGraph { nodes, edges, cover_stats, adj }
}

fn collect_cover_edges(
    cover: &HybridLandmarkCover,
    members: &[NodeId],
    fragment: u32,
    out: &mut Vec<(NodeId, NodeId, Distance, EdgeOrigin)>,
) {
    let origin = EdgeOrigin::Enforced { fragment };
    for l in &cover.landmarks {
        let x = members[l.node as usize];
        for &(nb, d) in &l.covered {
            let y = members[nb as usize];
            out.push((x.min(y), x.max(y), d, origin));
        }
    }
    for &(u, v, d) in &cover.direct_edges {
        let (a, b) = (members[u as usize], members[v as usize]);
        out.push((a.min(b), a.max(b), d, origin));
    }
}

/// Reference union search: Dijkstra over fragment(s) ∪ fragment(t) ∪ super
/// graph, in shrink-graph ids. This is the module's correctness contract; the
/// query layer implements the same walk with pruning hooks.
pub fn union_distance(
    shrink: &ShrinkGraph,
    p: &Partition,
    sg: &SuperGraph,
    s: NodeId,
    t: NodeId,
) -> Distance {
    let g = &shrink.graph;
    if s == t {
        return 0;
    }
    let (fs, ft) = (p.fragment_of[s as usize], p.fragment_of[t as usize]);
    let mut space = SearchSpace::new();
    let mut heap = std::collections::BinaryHeap::new();
    let mut dist = vec![UNREACHABLE; g.node_count()];
    let _ = &mut space; // fragment edges and super edges relax from one queue
    dist[s as usize] = 0;
    heap.push(std::cmp::Reverse((0u64, s)));
    while let Some(std::cmp::Reverse((d, u))) = heap.pop() {
        if d > dist[u as usize] {
            continue;
        }
        if u == t {
            return d;
        }
        let fu = p.fragment_of[u as usize];
        if fu == fs || fu == ft {
            for &(v, w) in g.neighbors(u) {
                if p.fragment_of[v as usize] == fu && d + w < dist[v as usize] {
                    dist[v as usize] = d + w;
                    heap.push(std::cmp::Reverse((d + w, v)));
                }
            }
        }
        for &(v, w, _) in sg.neighbors(u) {
            if d + w < dist[v as usize] {
                dist[v as usize] = d + w;
                heap.push(std::cmp::Reverse((d + w, v)));
            }
        }
    }
    UNREACHABLE
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::dijkstra;
    use crate::naive;
    use crate::partition::partition_bounded;

    fn identity_shrink(g: &WeightedGraph) -> ShrinkGraph {
        ShrinkGraph {
            graph: g.clone(),
            to_original: (0..g.node_count() as NodeId).collect(),
            of_original: (0..g.node_count() as u32).collect(),
        }
    }

    fn hand_partition(g: &WeightedGraph, fragment_of: Vec<u32>, gamma: usize) -> Partition {
        let k = fragment_of.iter().map(|&f| f as usize + 1).max().unwrap_or(0);
        let mut cross_edges = Vec::new();
        let mut boundary = vec![Vec::new(); k];
        let mut is_b = vec![false; g.node_count()];
        for (u, v, w) in g.edges() {
            if fragment_of[u as usize] != fragment_of[v as usize] {
                cross_edges.push((u, v, w));
                is_b[u as usize] = true;
                is_b[v as usize] = true;
            }
        }
        for (v, &f) in fragment_of.iter().enumerate() {
            if is_b[v] {
                boundary[f as usize].push(v as NodeId);
            }
        }
        Partition { fragment_of, k, gamma, boundary, cross_edges }
    }

    #[test]
    fn two_fragment_path_becomes_a_single_cross_edge() {
        let g = WeightedGraph::from_edges(4, &[(0, 1, 3), (1, 2, 5), (2, 3, 2)]).unwrap();
        let p = hand_partition(&g, vec![0, 0, 1, 1], 2);
        let s = identity_shrink(&g);
        let sg = build_supergraph(&s, &p, None);
        assert_eq!(sg.nodes, vec![1, 2]);
        assert_eq!(sg.edges.len(), 1);
        assert_eq!(sg.edges[0].weight, 5);
        assert_eq!(sg.edges[0].origin, EdgeOrigin::Cross);
    }

    #[test]
    fn all_boundary_triangle_stores_direct_edges() {
        // triangle {0,1,2} with one pendant per corner, each in its own
        // fragment, so all three corners are boundary nodes
        let g = WeightedGraph::from_edges(
            6,
            &[(0, 1, 1), (1, 2, 1), (0, 2, 1), (0, 3, 1), (1, 4, 1), (2, 5, 1)],
        )
        .unwrap();
        let p = hand_partition(&g, vec![0, 0, 0, 1, 2, 3], 3);
        let s = identity_shrink(&g);
        let sg = build_supergraph(&s, &p, None);
        assert_eq!(sg.cover_stats[0].landmarks, 0);
        assert_eq!(sg.cover_stats[0].direct_edges, 3);
        let enforced: Vec<_> = sg
            .edges
            .iter()
            .filter(|e| e.origin == EdgeOrigin::Enforced { fragment: 0 })
            .collect();
        assert_eq!(enforced.len(), 3);
        assert!(enforced.iter().all(|e| e.weight == 1));
    }

    #[test]
    fn bypassed_heavy_edge_pair_is_filtered_out() {
        // fragment {0,1} joined by weight 10, but the global route 0-2-3-1
        // costs 3, so (0,1) must not be covered locally
        let g =
            WeightedGraph::from_edges(4, &[(0, 1, 10), (0, 2, 1), (2, 3, 1), (3, 1, 1)]).unwrap();
        let p = hand_partition(&g, vec![0, 0, 1, 1], 2);
        let s = identity_shrink(&g);
        assert!(local_global_filter(&s, &p, 0).is_empty());
        assert_eq!(local_global_filter(&s, &p, 1), vec![(2, 3)]);
        // and the union search still gets the right answer via cross edges
        let sg = build_supergraph(&s, &p, None);
        assert_eq!(union_distance(&s, &p, &sg, 0, 1), 3);
    }

    #[test]
    fn locally_unreachable_pairs_are_excluded() {
        // fragment 0 holds two nodes only connected through fragment 1
        let g = WeightedGraph::from_edges(4, &[(0, 2, 1), (1, 2, 1), (2, 3, 4)]).unwrap();
        let p = hand_partition(&g, vec![0, 0, 1, 1], 2);
        let s = identity_shrink(&g);
        assert!(local_global_filter(&s, &p, 0).is_empty());
    }

    #[test]
    fn enforced_weights_equal_local_and_never_undershoot_global() {
        for seed in 0..12 {
            let g = naive::random_connected_graph(seed, 40, 35, 9);
            let s = identity_shrink(&g);
            let p = partition_bounded(&g, 10, None).unwrap();
            let sg = build_supergraph(&s, &p, None);
            for e in &sg.edges {
                let global = dijkstra(&g, e.u)[e.v as usize];
                assert!(e.weight >= global, "seed {seed}: super edge under global");
                match e.origin {
                    EdgeOrigin::Cross => {
                        assert_eq!(g.edge_weight(e.u, e.v), Some(e.weight), "seed {seed}");
                    }
                    EdgeOrigin::Enforced { fragment } => {
                        let admit =
                            |x: NodeId| p.fragment_of[x as usize] == fragment;
                        let mut space = SearchSpace::new();
                        dijkstra_core(&g, e.u, &[e.v], Some(&admit), UNREACHABLE, None, &mut space);
                        assert_eq!(space.get(e.v), e.weight, "seed {seed}: Υ is not local");
                    }
                }
            }
        }
    }

    #[test]
    fn union_search_matches_global_dijkstra_everywhere() {
        for seed in 0..12 {
            let g = naive::random_connected_graph(seed, 36, 30, 7);
            let s = identity_shrink(&g);
            let p = partition_bounded(&g, 9, None).unwrap();
            let orders: [Option<Vec<u32>>; 2] = [
                None,
                Some((0..36).map(|v| (v * 11 + seed as u32) % 36).collect()),
            ];
            for order in orders {
                let sg = build_supergraph(&s, &p, order.as_deref());
                for u in 0..36 {
                    let want = dijkstra(&g, u);
                    for v in 0..36 {
                        assert_eq!(
                            union_distance(&s, &p, &sg, u, v),
                            want[v as usize],
                            "seed {seed} pair ({u},{v})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn cost_model_does_not_enlarge_the_super_graph_on_fixed_seeds() {
        for seed in [0u64, 2, 4, 9] {
            let g = naive::random_connected_graph(seed, 40, 40, 6);
            let s = identity_shrink(&g);
            let p = partition_bounded(&g, 12, None).unwrap();
            let costed = build_supergraph(&s, &p, None);
            let uncosted = build_supergraph_uncosted(&s, &p, None);
            assert!(
                costed.edges.len() <= uncosted.edges.len(),
                "seed {seed}: {} > {}",
                costed.edges.len(),
                uncosted.edges.len()
            );
        }
    }

    #[test]
    fn compact_graph_mirrors_edges() {
        let g = naive::random_connected_graph(5, 30, 25, 5);
        let s = identity_shrink(&g);
        let p = partition_bounded(&g, 8, None).unwrap();
        let sg = build_supergraph(&s, &p, None);
        let (cg, back) = sg.compact_graph();
        assert_eq!(cg.node_count(), sg.nodes.len());
        assert_eq!(cg.edge_count(), sg.edges.len());
        for ((cu, cv, w), e) in cg.edges().zip(&sg.edges) {
            assert_eq!(back[cu as usize], e.u);
            assert_eq!(back[cv as usize], e.v);
            assert_eq!(w, e.weight);
        }
    }
}
