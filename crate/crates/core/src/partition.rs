//! Bounded graph partitioning.
//!
//! Splits a graph into fragments of at most `gamma` nodes while keeping the
//! number of cross-fragment edges small, since few cross edges mean few
//! boundary nodes (|B| <= 2|E_B| structurally). The scheme is the usual
//! multilevel one: coarsen by heavy-edge matching, place the coarse supernodes
//! greedily by connectivity under the hard size cap, then uncoarsen with
//! local single-node moves that strictly reduce the cut and never violate the
//! cap. Everything tie-breaks on ascending ids, so a given input always yields
//! the same partition.

use crate::error::{Error, Result};
use crate::graph::{Distance, NodeId, WeightedGraph};

/// A bounded partition of a graph's nodes.
#[derive(Debug, Clone)]
pub struct Partition {
    /// Fragment index per node, in `[0, k)`.
    pub fragment_of: Vec<u32>,
    /// Number of fragments; every index in `[0, k)` is non-empty.
    pub k: usize,
    /// The size bound each fragment respects.
    pub gamma: usize,
    /// Per fragment: its boundary nodes (nodes with a cross-fragment edge),
    /// ascending.
    pub boundary: Vec<Vec<NodeId>>,
    /// All cross-fragment edges, canonical `(min,max,w)` ascending.
    pub cross_edges: Vec<(NodeId, NodeId, Distance)>,
}

impl Partition {
    /// Total boundary-node count |B| (the per-fragment sets are disjoint).
    pub fn boundary_count(&self) -> usize {
        self.boundary.iter().map(|b| b.len()).sum()
    }

    /// Node lists per fragment, ascending within each fragment.
    pub fn fragments(&self) -> Vec<Vec<NodeId>> {
        let mut out = vec![Vec::new(); self.k];
        for (v, &f) in self.fragment_of.iter().enumerate() {
            out[f as usize].push(v as NodeId);
        }
        out
    }
}

/// |B| / |V| for reporting against a configured ε (0 for an empty graph).
pub fn boundary_fraction(p: &Partition) -> f64 {
    if p.fragment_of.is_empty() {
        return 0.0;
    }
    p.boundary_count() as f64 / p.fragment_of.len() as f64
}

/// Fragment count for `n` nodes at bound `gamma`: `⌈n/γ⌉`, rounded up to the
/// next multiple of 10 once that is at least 10 (road-scale counts come out
/// round; tiny inputs keep the exact count).
pub fn default_fragment_count(n: usize, gamma: usize) -> usize {
    let k = n.div_ceil(gamma).max(1);
    if k >= 10 {
        k.div_ceil(10) * 10
    } else {
        k
    }
}

/// Partitions `g` into fragments of at most `gamma` nodes.
///
/// `k_hint` overrides the default fragment-count target; the hard cap always
/// wins, so more fragments appear whenever the target cannot fit.
pub fn partition_bounded(
    g: &WeightedGraph,
    gamma: usize,
    k_hint: Option<usize>,
) -> Result<Partition> {
    if gamma < 1 {
        return Err(Error::validation("partition_bounded: gamma must be >= 1"));
    }
    let n = g.node_count();
    if n == 0 {
        return Ok(Partition {
            fragment_of: Vec::new(),
            k: 0,
            gamma,
            boundary: Vec::new(),
            cross_edges: Vec::new(),
        });
    }
    let k_target = k_hint.unwrap_or_else(|| default_fragment_count(n, gamma)).clamp(1, n);

    // Level 0 mirrors the input graph with unit sizes and multiplicity-1
    // edges.
    let mut levels: Vec<Level> = vec![Level {
        size: vec![1; n],
        adj: {
            let mut adj = vec![Vec::new(); n];
            for (u, v, _) in g.edges() {
                adj[u as usize].push((v, 1));
                adj[v as usize].push((u, 1));
            }
            adj
        },
        map_down: Vec::new(),
    }];

    let coarse_target = (2 * k_target).max(64);
    let cap = (gamma / 2).max(1);
    while levels.last().unwrap().size.len() > coarse_target {
        match coarsen(levels.last().unwrap(), cap) {
            Some(next) => levels.push(next),
            None => break,
        }
    }

    // Place coarse supernodes, then refine while projecting back down.
    let top = levels.last().unwrap();
    let mut assign = initial_assignment(top, k_target, gamma);
    refine(top, &mut assign, gamma);
    for li in (0..levels.len() - 1).rev() {
        let fine = &levels[li];
        let map = &levels[li + 1].map_down;
        let mut fine_assign = vec![0u32; fine.size.len()];
        for v in 0..fine.size.len() {
            fine_assign[v] = assign[map[v] as usize];
        }
        assign = fine_assign;
        refine(fine, &mut assign, gamma);
    }

    // Drop empty fragments and renumber in first-use order of ascending ids.
    let used = {
        let mut seen = vec![false; assign.iter().map(|&f| f as usize + 1).max().unwrap_or(0)];
        for &f in &assign {
            seen[f as usize] = true;
        }
        seen
    };
    let mut renumber = vec![u32::MAX; used.len()];
    let mut k = 0u32;
    for (f, &u) in used.iter().enumerate() {
        if u {
            renumber[f] = k;
            k += 1;
        }
    }
    let fragment_of: Vec<u32> = assign.iter().map(|&f| renumber[f as usize]).collect();
    let k = k as usize;

    let mut sizes = vec![0usize; k];
    for &f in &fragment_of {
        sizes[f as usize] += 1;
    }
    debug_assert!(sizes.iter().all(|&s| s <= gamma), "fragment over the cap");

    let mut cross_edges = Vec::new();
    let mut is_boundary = vec![false; n];
    for (u, v, w) in g.edges() {
        if fragment_of[u as usize] != fragment_of[v as usize] {
            cross_edges.push((u, v, w));
            is_boundary[u as usize] = true;
            is_boundary[v as usize] = true;
        }
    }
    let mut boundary = vec![Vec::new(); k];
    for v in 0..n {
        if is_boundary[v] {
            boundary[fragment_of[v] as usize].push(v as NodeId);
        }
    }
    debug_assert!(boundary.iter().map(|b| b.len()).sum::<usize>() <= 2 * cross_edges.len());

    Ok(Partition { fragment_of, k, gamma, boundary, cross_edges })
}

struct Level {
    size: Vec<usize>,
    /// Neighbor supernode and edge multiplicity; one entry per neighbor.
    adj: Vec<Vec<(u32, u64)>>,
    /// For levels above 0: fine node -> this level's supernode.
    map_down: Vec<u32>,
}

/// One heavy-edge matching pass. Returns `None` when nothing united.
fn coarsen(level: &Level, cap: usize) -> Option<Level> {
    let n = level.size.len();
    let mut mate = vec![u32::MAX; n];
    let mut merged_any = false;
    for u in 0..n {
        if mate[u] != u32::MAX {
            continue;
        }
        let mut best: Option<(u64, u32)> = None;
        for &(v, mult) in &level.adj[u] {
            if mate[v as usize] != u32::MAX || level.size[u] + level.size[v as usize] > cap {
                continue;
            }
            // heaviest multiplicity, tie to the smaller id
            let better = match best {
                None => true,
                Some((bm, bv)) => mult > bm || (mult == bm && v < bv),
            };
            if better {
                best = Some((mult, v));
            }
        }
        if let Some((_, v)) = best {
            mate[u] = v;
            mate[v as usize] = u as u32;
            merged_any = true;
        }
    }
    if !merged_any {
        return None;
    }

    let mut map_down = vec![u32::MAX; n];
    let mut size = Vec::new();
    let mut members: Vec<(u32, u32)> = Vec::new(); // (fine node, mate or MAX)
    for u in 0..n {
        if map_down[u] != u32::MAX {
            continue;
        }
        let id = size.len() as u32;
        map_down[u] = id;
        let mut s = level.size[u];
        let m = mate[u];
        if m != u32::MAX && map_down[m as usize] == u32::MAX {
            map_down[m as usize] = id;
            s += level.size[m as usize];
            members.push((u as u32, m));
        } else {
            members.push((u as u32, u32::MAX));
        }
        size.push(s);
    }

    let mut adj: Vec<Vec<(u32, u64)>> = vec![Vec::new(); size.len()];
    let mut acc: Vec<u64> = vec![0; size.len()];
    let mut touched: Vec<u32> = Vec::new();
    for (cu, &(a, b)) in members.iter().enumerate() {
        let fine = [Some(a), (b != u32::MAX).then_some(b)];
        for u in fine.into_iter().flatten() {
            for &(v, mult) in &level.adj[u as usize] {
                let cv = map_down[v as usize];
                if cv == cu as u32 {
                    continue;
                }
                if acc[cv as usize] == 0 {
                    touched.push(cv);
                }
                acc[cv as usize] += mult;
            }
        }
        touched.sort_unstable();
        for &cv in &touched {
            adj[cu].push((cv, acc[cv as usize]));
            acc[cv as usize] = 0;
        }
        touched.clear();
    }
    Some(Level { size, adj, map_down })
}

/// Greedy placement: size-descending (id-ascending) supernodes go to the
/// fitting bucket they are most connected to; ties prefer the lighter, then
/// lower-indexed bucket; a supernode nothing fits gets a fresh bucket.
fn initial_assignment(level: &Level, k: usize, gamma: usize) -> Vec<u32> {
    let n = level.size.len();
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_by(|&a, &b| {
        level.size[b as usize].cmp(&level.size[a as usize]).then(a.cmp(&b))
    });
    let mut load = vec![0usize; k];
    let mut assign = vec![u32::MAX; n];
    for &u in &order {
        let su = level.size[u as usize];
        // connectivity to already-placed neighbors, per bucket
        let mut conn: Vec<(u32, u64)> = Vec::new();
        for &(v, mult) in &level.adj[u as usize] {
            let f = assign[v as usize];
            if f == u32::MAX {
                continue;
            }
            match conn.iter_mut().find(|(b, _)| *b == f) {
                Some((_, m)) => *m += mult,
                None => conn.push((f, mult)),
            }
        }
        let mut best: Option<(u64, usize, u32)> = None; // (conn desc, load asc, id asc)
        for &(f, m) in &conn {
            if load[f as usize] + su > gamma {
                continue;
            }
            let key = (m, load[f as usize], f);
            let better = match best {
                None => true,
                Some((bm, bl, bf)) => {
                    key.0 > bm || (key.0 == bm && (key.1 < bl || (key.1 == bl && key.2 < bf)))
                }
            };
            if better {
                best = Some(key);
            }
        }
        let f = match best {
            Some((_, _, f)) => f,
            None => {
                // least-loaded fitting bucket, else a fresh one
                let mut pick: Option<(usize, u32)> = None;
                for (f, &l) in load.iter().enumerate() {
                    if l + su <= gamma && pick.map_or(true, |(bl, _)| l < bl) {
                        pick = Some((l, f as u32));
                    }
                }
                match pick {
                    Some((_, f)) => f,
                    None => {
                        load.push(0);
                        (load.len() - 1) as u32
                    }
                }
            }
        };
        assign[u as usize] = f;
        load[f as usize] += su;
    }
    assign
}

/// Single-node moves with strictly positive cut gain under the size cap,
/// repeated until a full pass makes no move. The cut shrinks every move, so
/// this terminates; it never worsens the assignment it is given.
fn refine(level: &Level, assign: &mut [u32], gamma: usize) {
    let nf = assign.iter().map(|&f| f as usize + 1).max().unwrap_or(0);
    let mut load = vec![0usize; nf];
    for (v, &f) in assign.iter().enumerate() {
        load[f as usize] += level.size[v];
    }
    loop {
        let mut moved = false;
        for u in 0..level.size.len() {
            let fu = assign[u];
            let mut here: u64 = 0;
            let mut conn: Vec<(u32, u64)> = Vec::new();
            for &(v, mult) in &level.adj[u] {
                let f = assign[v as usize];
                if f == fu {
                    here += mult;
                } else {
                    match conn.iter_mut().find(|(b, _)| *b == f) {
                        Some((_, m)) => *m += mult,
                        None => conn.push((f, mult)),
                    }
                }
            }
            conn.sort_unstable_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
            for &(f, m) in &conn {
                if m > here && load[f as usize] + level.size[u] <= gamma {
                    load[fu as usize] -= level.size[u];
                    load[f as usize] += level.size[u];
                    assign[u] = f;
                    moved = true;
                    break;
                }
            }
        }
        if !moved {
            break;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::naive;

    fn cut_count(g: &WeightedGraph, p: &Partition) -> usize {
        g.edges()
            .filter(|&(u, v, _)| p.fragment_of[u as usize] != p.fragment_of[v as usize])
            .count()
    }

    #[test]
    fn path_of_four_splits_in_the_middle() {
        let g = WeightedGraph::from_edges(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1)]).unwrap();
        let p = partition_bounded(&g, 2, None).unwrap();
        assert_eq!(p.k, 2);
        assert_eq!(p.fragment_of[0], p.fragment_of[1]);
        assert_eq!(p.fragment_of[2], p.fragment_of[3]);
        assert_ne!(p.fragment_of[1], p.fragment_of[2]);
        assert_eq!(p.cross_edges, vec![(1, 2, 1)]);
        assert_eq!(p.boundary_count(), 2);
        assert!((boundary_fraction(&p) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn huge_gamma_gives_one_fragment_without_boundary() {
        let g = naive::random_connected_graph(4, 20, 12, 5);
        let p = partition_bounded(&g, 100, None).unwrap();
        assert_eq!(p.k, 1);
        assert!(p.cross_edges.is_empty());
        assert_eq!(p.boundary_count(), 0);
        assert_eq!(boundary_fraction(&p), 0.0);
    }

    #[test]
    fn zero_gamma_is_rejected() {
        let g = WeightedGraph::from_edges(2, &[(0, 1, 1)]).unwrap();
        assert!(partition_bounded(&g, 0, None).is_err());
    }

    #[test]
    fn two_cliques_with_a_bridge_split_at_the_bridge() {
        let mut edges = Vec::new();
        for a in 0..6u32 {
            for b in a + 1..6 {
                edges.push((a, b, 1));
                edges.push((a + 6, b + 6, 1));
            }
        }
        edges.push((5, 6, 1));
        let g = WeightedGraph::from_edges(12, &edges).unwrap();
        let p = partition_bounded(&g, 6, None).unwrap();
        assert_eq!(p.k, 2);
        assert_eq!(cut_count(&g, &p), 1);
        assert_eq!(p.cross_edges, vec![(5, 6, 1)]);
    }

    #[test]
    fn invariants_hold_on_random_graphs() {
        for seed in 0..25 {
            let g = naive::random_connected_graph(seed, 60, 50, 9);
            for gamma in [1usize, 3, 7, 16, 60] {
                let p = partition_bounded(&g, gamma, None).unwrap();
                let mut sizes = vec![0usize; p.k];
                for &f in &p.fragment_of {
                    assert!((f as usize) < p.k, "seed {seed} γ={gamma}: index range");
                    sizes[f as usize] += 1;
                }
                assert!(sizes.iter().all(|&s| s >= 1), "seed {seed} γ={gamma}: empty fragment");
                assert!(
                    sizes.iter().all(|&s| s <= gamma),
                    "seed {seed} γ={gamma}: cap violated"
                );
                // boundary = exactly the endpoints of cross edges
                let mut expect = vec![false; g.node_count()];
                for &(u, v, _) in &p.cross_edges {
                    assert_ne!(p.fragment_of[u as usize], p.fragment_of[v as usize]);
                    expect[u as usize] = true;
                    expect[v as usize] = true;
                }
                let mut got = vec![false; g.node_count()];
                for (f, b) in p.boundary.iter().enumerate() {
                    for &v in b {
                        assert_eq!(p.fragment_of[v as usize] as usize, f);
                        got[v as usize] = true;
                    }
                }
                assert_eq!(expect, got, "seed {seed} γ={gamma}: boundary mismatch");
                assert!(p.boundary_count() <= 2 * p.cross_edges.len());
                // every graph edge is either internal or listed as cross
                let cross: std::collections::BTreeSet<(NodeId, NodeId)> =
                    p.cross_edges.iter().map(|&(u, v, _)| (u, v)).collect();
                for (u, v, _) in g.edges() {
                    let listed = cross.contains(&(u, v));
                    let is_cross = p.fragment_of[u as usize] != p.fragment_of[v as usize];
                    assert_eq!(listed, is_cross, "seed {seed} γ={gamma}: edge ({u},{v})");
                }
            }
        }
    }

    #[test]
    fn coarsened_runs_keep_invariants_and_determinism() {
        for seed in 0..8 {
            let g = naive::random_grid_graph(seed, 16, 16); // 256 nodes
            let p1 = partition_bounded(&g, 24, None).unwrap();
            let p2 = partition_bounded(&g, 24, None).unwrap();
            assert_eq!(p1.fragment_of, p2.fragment_of, "seed {seed}: nondeterministic");
            let mut sizes = vec![0usize; p1.k];
            for &f in &p1.fragment_of {
                sizes[f as usize] += 1;
            }
            assert!(sizes.iter().all(|&s| (1..=24).contains(&s)), "seed {seed}");
            assert!(p1.k >= 256usize.div_ceil(24), "seed {seed}: too few fragments");
        }
    }

    #[test]
    fn k_hint_steers_the_fragment_count() {
        let g = naive::random_grid_graph(3, 10, 10);
        let hinted = partition_bounded(&g, 50, Some(8)).unwrap();
        assert!(hinted.k >= 2, "hint ignored entirely");
        // the cap still wins over a lowball hint
        let forced = partition_bounded(&g, 10, Some(1)).unwrap();
        let mut sizes = vec![0usize; forced.k];
        for &f in &forced.fragment_of {
            sizes[f as usize] += 1;
        }
        assert!(sizes.iter().all(|&s| s <= 10));
        assert!(forced.k >= 10);
    }

    #[test]
    fn gamma_one_makes_singletons() {
        let g = WeightedGraph::from_edges(5, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1)])
            .unwrap();
        let p = partition_bounded(&g, 1, None).unwrap();
        assert_eq!(p.k, 5);
        assert_eq!(p.cross_edges.len(), 4);
        assert_eq!(p.boundary_count(), 5);
    }

    #[test]
    fn default_count_rounds_only_at_scale() {
        assert_eq!(default_fragment_count(4, 2), 2);
        assert_eq!(default_fragment_count(4, 100), 1);
        assert_eq!(default_fragment_count(100, 10), 10);
        assert_eq!(default_fragment_count(105, 10), 20);
        assert_eq!(default_fragment_count(279_000, 1320), 220);
    }
}
