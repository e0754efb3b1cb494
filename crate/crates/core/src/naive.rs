//! Slow, obviously-correct reference implementations, plus deterministic graph
//! generators. Everything here exists to validate the fast paths; none of it
//! is reachable from the query pipeline.
//!
//! The implementations deliberately avoid sharing code with the modules they
//! check: distances come from Floyd–Warshall rather than Dijkstra, cut nodes
//! from literal node-removal, vertex covers from subset enumeration.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Distance, NodeId, WeightedGraph, UNREACHABLE};

/// All-pairs shortest distances by Floyd–Warshall.
pub fn floyd_warshall(g: &WeightedGraph) -> Vec<Vec<Distance>> {
    let n = g.node_count();
    let mut d = vec![vec![UNREACHABLE; n]; n];
    for v in 0..n {
        d[v][v] = 0;
    }
    for (u, v, w) in g.edges() {
        let (u, v) = (u as usize, v as usize);
        d[u][v] = d[u][v].min(w);
        d[v][u] = d[v][u].min(w);
    }
    for k in 0..n {
        for i in 0..n {
            if d[i][k] == UNREACHABLE {
                continue;
            }
            for j in 0..n {
                let via = d[i][k].saturating_add(d[k][j]);
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

pub fn is_connected(g: &WeightedGraph) -> bool {
    let labels = crate::graph::connected_components(g);
    labels.iter().all(|&l| l == 0)
}

/// Cut nodes by brute force: remove each node and count components among the
/// remaining ones.
pub fn cut_nodes_by_removal(g: &WeightedGraph) -> Vec<NodeId> {
    let n = g.node_count();
    let mut cuts = Vec::new();
    for v in 0..n as NodeId {
        if component_count_without(g, Some(v)) > component_count_without(g, None) {
            cuts.push(v);
        }
    }
    cuts
}

fn component_count_without(g: &WeightedGraph, removed: Option<NodeId>) -> usize {
    let n = g.node_count();
    let mut seen = vec![false; n];
    if let Some(r) = removed {
        seen[r as usize] = true;
    }
    let mut count = 0;
    let mut stack = Vec::new();
    for s in 0..n as NodeId {
        if seen[s as usize] {
            continue;
        }
        count += 1;
        seen[s as usize] = true;
        stack.push(s);
        while let Some(u) = stack.pop() {
            for &(v, _) in g.neighbors(u) {
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    stack.push(v);
                }
            }
        }
    }
    count
}

/// True iff `set` touches every edge of `g`.
pub fn is_vertex_cover(g: &WeightedGraph, set: &[NodeId]) -> bool {
    g.edges()
        .all(|(u, v, _)| set.contains(&u) || set.contains(&v))
}

/// Minimum vertex cover size by subset enumeration. Intended for n <= 20.
pub fn min_vertex_cover_size(g: &WeightedGraph) -> usize {
    let n = g.node_count();
    assert!(n <= 20, "subset enumeration limited to n <= 20");
    let edges: Vec<(usize, usize)> = g
        .edges()
        .map(|(u, v, _)| (u as usize, v as usize))
        .collect();
    if edges.is_empty() {
        return 0;
    }
    let mut best = n;
    for mask in 0u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size >= best {
            continue;
        }
        if edges
            .iter()
            .all(|&(u, v)| mask & (1 << u) != 0 || mask & (1 << v) != 0)
        {
            best = size;
        }
    }
    best
}

/// True iff every reachable pair (u,v), u != v, has some landmark on a
/// shortest u-v path: dist(u,x) + dist(x,v) == dist(u,v).
pub fn is_landmark_cover(apsp: &[Vec<Distance>], landmarks: &[NodeId]) -> bool {
    let n = apsp.len();
    for u in 0..n {
        for v in (u + 1)..n {
            if apsp[u][v] == UNREACHABLE {
                continue;
            }
            let covered = landmarks.iter().any(|&x| {
                let x = x as usize;
                apsp[u][x] != UNREACHABLE
                    && apsp[x][v] != UNREACHABLE
                    && apsp[u][x] + apsp[x][v] == apsp[u][v]
            });
            if !covered {
                return false;
            }
        }
    }
    true
}

/// True iff removing edge (u,v) leaves dist(u,v) unchanged, decided against a
/// from-scratch Floyd–Warshall on the reduced graph.
pub fn is_redundant_edge_by_removal(g: &WeightedGraph, u: NodeId, v: NodeId) -> bool {
    let w = g.edge_weight(u, v).expect("edge must exist");
    let reduced: Vec<_> = g
        .edges()
        .filter(|&(a, b, _)| !(a == u.min(v) && b == u.max(v)))
        .collect();
    let rg = WeightedGraph::from_edges(g.node_count(), &reduced).unwrap();
    let d = floyd_warshall(&rg);
    d[u as usize][v as usize] <= w
}

/// Nodes lying on at least one shortest u-v path, per the distance criterion.
pub fn on_shortest_path_nodes(apsp: &[Vec<Distance>], u: NodeId, v: NodeId) -> Vec<NodeId> {
    let (u, v) = (u as usize, v as usize);
    let duv = apsp[u][v];
    if duv == UNREACHABLE {
        return Vec::new();
    }
    (0..apsp.len() as NodeId)
        .filter(|&x| {
            let x = x as usize;
            apsp[u][x] != UNREACHABLE
                && apsp[x][v] != UNREACHABLE
                && apsp[u][x] + apsp[x][v] == duv
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Deterministic generators
// ---------------------------------------------------------------------------

/// Random connected graph: a random attachment tree plus `extra_edges` random
/// chords, weights uniform in 1..=max_weight. Deterministic in the seed.
pub fn random_connected_graph(
    seed: u64,
    n: usize,
    extra_edges: usize,
    max_weight: u64,
) -> WeightedGraph {
    assert!(n >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(NodeId, NodeId, Distance)> = Vec::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        edges.push((u as NodeId, v as NodeId, rng.gen_range(1..=max_weight)));
    }
    let mut added = 0;
    let mut attempts = 0;
    while added < extra_edges && attempts < extra_edges * 20 {
        attempts += 1;
        let u = rng.gen_range(0..n) as NodeId;
        let v = rng.gen_range(0..n) as NodeId;
        if u == v {
            continue;
        }
        edges.push((u, v, rng.gen_range(1..=max_weight)));
        added += 1;
    }
    WeightedGraph::from_edges(n, &edges).unwrap()
}

/// Road-like generator: a rows x cols grid with jittered positive weights, a
/// sprinkle of diagonal links, and coordinates attached. Connected by
/// construction; the planar-ish structure gives realistic cut-node and
/// boundary behavior.
pub fn random_grid_graph(seed: u64, rows: usize, cols: usize) -> WeightedGraph {
    assert!(rows >= 1 && cols >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rows * cols;
    let id = |r: usize, c: usize| (r * cols + c) as NodeId;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1), rng.gen_range(10..=30)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c), rng.gen_range(10..=30)));
            }
            if r + 1 < rows && c + 1 < cols && rng.gen_ratio(1, 8) {
                edges.push((id(r, c), id(r + 1, c + 1), rng.gen_range(14..=40)));
            }
        }
    }
    let mut g = WeightedGraph::from_edges(n, &edges).unwrap();
    let coords: Vec<(i64, i64)> = (0..n)
        .map(|v| {
            let (r, c) = (v / cols, v % cols);
            (
                c as i64 * 1000 + rng.gen_range(-200..=200),
                r as i64 * 1000 + rng.gen_range(-200..=200),
            )
        })
        .collect();
    g.set_coords(coords).unwrap();
    g
}

/// Random connected graph with pendant trees hanging off it, so DRA extraction
/// has real material to work with. Deterministic in the seed.
pub fn random_graph_with_hangings(seed: u64, core_n: usize, hang_n: usize) -> WeightedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
    let core = random_connected_graph(seed, core_n, core_n / 2, 20);
    let n = core_n + hang_n;
    let mut edges: Vec<_> = core.edges().collect();
    for v in core_n..n {
        // attach to anything earlier: yields trees hanging off tree nodes too
        let u = rng.gen_range(0..v);
        edges.push((u as NodeId, v as NodeId, rng.gen_range(1..=20)));
    }
    WeightedGraph::from_edges(n, &edges).unwrap()
}

/// Fixed 12-node fixture whose block-cut structure is a chain of six blocks:
/// a 4-cycle, three bridge edges, a 5-cycle and a final bridge. Exercises
/// cascaded block merges; block node counts are {4,2,2,2,5,2}.
///
/// Layout: 4-cycle {0,1,2,3}, bridges 3-4, 4-5, 5-6, 5-cycle {6,7,8,9,10},
/// bridge 10-11. Cut nodes: 3, 4, 5, 6, 10.
pub fn block_chain_fixture() -> WeightedGraph {
    WeightedGraph::from_edges(
        12,
        &[
            (0, 1, 1),
            (1, 2, 1),
            (2, 3, 1),
            (3, 0, 1),
            (3, 4, 1),
            (4, 5, 1),
            (5, 6, 1),
            (6, 7, 1),
            (7, 8, 1),
            (8, 9, 1),
            (9, 10, 1),
            (10, 6, 1),
            (10, 11, 1),
        ],
    )
    .unwrap()
}

/// All connected graphs on n labeled nodes (n <= 6), unit weights, enumerated
/// by edge-subset mask in ascending order.
pub fn enumerate_connected_graphs(n: usize) -> Vec<WeightedGraph> {
    assert!(n <= 6, "exhaustive enumeration limited to n <= 6");
    let mut pairs = Vec::new();
    for u in 0..n as NodeId {
        for v in (u + 1)..n as NodeId {
            pairs.push((u, v));
        }
    }
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let edges: Vec<(NodeId, NodeId, Distance)> = pairs
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask & (1 << i) != 0)
            .map(|(_, &(u, v))| (u, v, 1))
            .collect();
        let g = WeightedGraph::from_edges(n, &edges).unwrap();
        if is_connected(&g) {
            out.push(g);
        }
    }
    out
}

/// Deterministic weight variants for an unweighted structure, used to exercise
/// weight-dependent logic during exhaustive sweeps.
pub fn reweight(g: &WeightedGraph, salt: u64) -> WeightedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(salt);
    let edges: Vec<_> = g
        .edges()
        .map(|(u, v, _)| (u, v, rng.gen_range(1..=4)))
        .collect();
    WeightedGraph::from_edges(g.node_count(), &edges).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::dijkstra;

    #[test]
    fn floyd_warshall_matches_dijkstra_rows() {
        for seed in 0..10 {
            let g = random_connected_graph(seed, 50, 60, 100);
            let d = floyd_warshall(&g);
            for s in [0u32, 7, 49] {
                assert_eq!(d[s as usize], dijkstra(&g, s), "seed {seed} source {s}");
            }
        }
    }

    #[test]
    fn floyd_warshall_symmetry() {
        let g = random_connected_graph(3, 30, 40, 50);
        let d = floyd_warshall(&g);
        for u in 0..30 {
            for v in 0..30 {
                assert_eq!(d[u][v], d[v][u]);
            }
        }
    }

    #[test]
    fn cut_nodes_on_known_shapes() {
        // path 0-1-2: node 1 is the cut node
        let path = WeightedGraph::from_edges(3, &[(0, 1, 1), (1, 2, 1)]).unwrap();
        assert_eq!(cut_nodes_by_removal(&path), vec![1]);
        // triangle: none
        let tri = WeightedGraph::from_edges(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 1)]).unwrap();
        assert!(cut_nodes_by_removal(&tri).is_empty());
    }

    #[test]
    fn min_vertex_cover_on_known_shapes() {
        let path4 =
            WeightedGraph::from_edges(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1)]).unwrap();
        assert_eq!(min_vertex_cover_size(&path4), 2);
        let star = WeightedGraph::from_edges(
            5,
            &[(0, 1, 1), (0, 2, 1), (0, 3, 1), (0, 4, 1)],
        )
        .unwrap();
        assert_eq!(min_vertex_cover_size(&star), 1);
    }

    #[test]
    fn landmark_cover_on_path() {
        let g = WeightedGraph::from_edges(3, &[(0, 1, 1), (1, 2, 1)]).unwrap();
        let d = floyd_warshall(&g);
        assert!(is_landmark_cover(&d, &[1]));
        // 2 does not cover (0,1): 0-2-1 detours
        assert!(!is_landmark_cover(&d, &[2]));
    }

    #[test]
    fn generators_are_deterministic_and_connected() {
        for seed in 0..20 {
            let a = random_connected_graph(seed, 40, 30, 50);
            let b = random_connected_graph(seed, 40, 30, 50);
            let ea: Vec<_> = a.edges().collect();
            let eb: Vec<_> = b.edges().collect();
            assert_eq!(ea, eb);
            assert!(is_connected(&a));
            assert!(is_connected(&random_graph_with_hangings(seed, 30, 25)));
        }
        let g = random_grid_graph(7, 6, 9);
        assert!(is_connected(&g));
        assert!(g.coords().is_some());
    }

    #[test]
    fn enumeration_counts_small_connected_graphs() {
        // known counts of connected labeled graphs on n nodes
        assert_eq!(enumerate_connected_graphs(1).len(), 1);
        assert_eq!(enumerate_connected_graphs(2).len(), 1);
        assert_eq!(enumerate_connected_graphs(3).len(), 4);
        assert_eq!(enumerate_connected_graphs(4).len(), 38);
        assert_eq!(enumerate_connected_graphs(5).len(), 728);
    }
}
