//! Landmark covers over target node pairs.
//!
//! A node x covers a pair (u,v) when dist(u,x)+dist(x,v) == dist(u,v), i.e. x
//! lies on some shortest u–v path; a cover stores dist(x,·) columns so covered
//! pairs are answered by one addition. This module provides the matching-based
//! 2-approximate cover over redundancy-free graphs, a greedy set-cover
//! selection for explicit pair sets, and the hybrid cover that weighs each
//! landmark's storage (one entry per distinct covered endpoint) against simply
//! materializing pair distances as direct edges — the form the super graph
//! consumes.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{dijkstra, dijkstra_core, Distance, NodeId, SearchSpace, WeightedGraph};

/// A plain landmark cover: node list plus full distance columns.
#[derive(Debug, Clone)]
pub struct LandmarkCover {
    /// Selected landmarks, in selection order.
    pub landmarks: Vec<NodeId>,
    /// Parallel to `landmarks`: distances from the landmark to every node.
    pub dist_vectors: Vec<Vec<Distance>>,
}

/// One landmark of a hybrid cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HybridLandmark {
    /// The landmark node x.
    pub node: NodeId,
    /// N_x: distinct endpoints of the claimed pairs with dist(x,'), ascending.
    /// The landmark itself never appears (a pair never elects its own
    /// endpoint).
    pub covered: Vec<(NodeId, Distance)>,
    /// P_x: the claimed pairs, canonical (min,max), ascending. Claims of
    /// distinct landmarks are disjoint.
    pub pairs: Vec<(NodeId, NodeId)>,
}

/// Hybrid landmark cover: landmarks where they pay off, direct edges where
/// they do not. |covered| <= |pairs| holds per landmark.
#[derive(Debug, Clone, Default)]
pub struct HybridLandmarkCover {
    /// Accepted landmarks, ascending by node id.
    pub landmarks: Vec<HybridLandmark>,
    /// E_D⁻: pairs stored as explicit distances, canonical and ascending.
    pub direct_edges: Vec<(NodeId, NodeId, Distance)>,
}

impl HybridLandmarkCover {
    /// Total enforced-edge count: one edge per covered endpoint per landmark
    /// plus one per direct pair.
    pub fn enforced_edge_count(&self) -> usize {
        self.landmarks.iter().map(|l| l.covered.len()).sum::<usize>() + self.direct_edges.len()
    }
}

/// Whether removing edge (u,v) leaves dist(u,v) unchanged.
///
/// Runs a Dijkstra from `u` with the edge banned, aborting as soon as the
/// frontier passes w(u,v); redundant iff `v` was reached within that radius.
pub fn is_redundant_edge(g: &WeightedGraph, u: NodeId, v: NodeId) -> Result<bool> {
    let w = g
        .edge_weight(u, v)
        .ok_or_else(|| Error::validation(format!("is_redundant_edge: ({u},{v}) is not an edge")))?;
    let mut space = SearchSpace::new();
    dijkstra_core(g, u, &[v], None, w, Some((u, v)), &mut space);
    Ok(space.get(v) <= w)
}

/// Removes redundant edges until none remain; distances are preserved.
///
/// Edges are retested in ascending (u,v) order against the current, already
/// reduced graph: removing an edge never creates new redundancy (alternatives
/// only disappear), so one pass suffices and the result is deterministic.
pub fn refree_reduce(g: &WeightedGraph) -> WeightedGraph {
    let mut edges: Vec<(NodeId, NodeId, Distance)> = g.edges().collect();
    let mut current = g.clone();
    let mut i = 0;
    while i < edges.len() {
        let (u, v, _) = edges[i];
        if is_redundant_edge(&current, u, v).expect("edge comes from the current graph") {
            edges.remove(i);
            current = WeightedGraph::from_edges(g.node_count(), &edges)
                .expect("subset of valid edges");
        } else {
            i += 1;
        }
    }
    current
}

/// Matching-based landmark cover: reduce to the RE-free graph, then take both
/// endpoints of a maximal matching (greedy over ascending edges). The result
/// is a vertex cover of the reduced graph, hence a landmark cover, and at most
/// twice the optimum size.
pub fn vc_landmark_cover(g: &WeightedGraph) -> LandmarkCover {
    let reduced = refree_reduce(g);
    let mut matched = vec![false; g.node_count()];
    let mut landmarks = Vec::new();
    for (u, v, _) in reduced.edges() {
        if !matched[u as usize] && !matched[v as usize] {
            matched[u as usize] = true;
            matched[v as usize] = true;
            landmarks.push(u);
            landmarks.push(v);
        }
    }
    let dist_vectors = landmarks.iter().map(|&x| dijkstra(g, x)).collect();
    LandmarkCover { landmarks, dist_vectors }
}

/// Greedy set-cover landmark selection for an explicit pair set: repeatedly
/// take the node covering the most uncovered pairs (ties to the smaller id).
pub fn greedy_setcover_landmarks(
    g: &WeightedGraph,
    pairs: &[(NodeId, NodeId)],
) -> Result<LandmarkCover> {
    let pairs = canonical_pairs(pairs);
    let (endpoints, rows) = endpoint_rows(g, &pairs)?;
    let row = |u: NodeId| &rows[endpoints.binary_search(&u).unwrap()];

    let mut covered = vec![false; pairs.len()];
    let mut landmarks = Vec::new();
    let mut remaining = pairs.len();
    while remaining > 0 {
        let mut best: Option<(usize, NodeId)> = None;
        for x in 0..g.node_count() as NodeId {
            let mut count = 0;
            for (i, &(u, v)) in pairs.iter().enumerate() {
                if !covered[i] && row(u)[x as usize] + row(v)[x as usize] == row(u)[v as usize] {
                    count += 1;
                }
            }
            if count > 0 && best.map_or(true, |(bc, _)| count > bc) {
                best = Some((count, x));
            }
        }
        let (_, x) = best.expect("every pair is covered at least by its endpoints");
        landmarks.push(x);
        for (i, &(u, v)) in pairs.iter().enumerate() {
            if !covered[i] && row(u)[x as usize] + row(v)[x as usize] == row(u)[v as usize] {
                covered[i] = true;
                remaining -= 1;
            }
        }
    }
    let dist_vectors = landmarks.iter().map(|&x| dijkstra(g, x)).collect();
    Ok(LandmarkCover { landmarks, dist_vectors })
}

/// Hybrid landmark cover over a pair set, optionally steered by a node order.
///
/// With an order, each pair whose highest-order covering node is interior is
/// grouped under that node (the peak of its up-down shortest path); groups
/// passing the storage test |N_x| <= |P_x| become landmarks outright. All
/// other pairs enter the greedy phase, which keeps electing the candidate
/// covering the most unclaimed pairs as long as the test passes; what is left
/// becomes direct edges. Every input pair ends up claimed by exactly one
/// landmark or stored directly — never dropped.
pub fn hybrid_cover(
    g: &WeightedGraph,
    pairs: &[(NodeId, NodeId)],
    order: Option<&[u32]>,
) -> Result<HybridLandmarkCover> {
    hybrid_cover_impl(g, pairs, order, true)
}

/// [`hybrid_cover`] with the storage test disabled: every claimable pair goes
/// to a landmark, only pairs without interior covering nodes become direct
/// edges. This is the baseline the cost model is measured against.
pub fn hybrid_cover_uncosted(
    g: &WeightedGraph,
    pairs: &[(NodeId, NodeId)],
    order: Option<&[u32]>,
) -> Result<HybridLandmarkCover> {
    hybrid_cover_impl(g, pairs, order, false)
}

fn hybrid_cover_impl(
    g: &WeightedGraph,
    pairs: &[(NodeId, NodeId)],
    order: Option<&[u32]>,
    cost_model: bool,
) -> Result<HybridLandmarkCover> {
    let pairs = canonical_pairs(pairs);
    let (endpoints, rows) = endpoint_rows(g, &pairs)?;
    let row = |u: NodeId| &rows[endpoints.binary_search(&u).unwrap()];

    // Interior covering nodes per pair; endpoints are excluded because a
    // landmark entry for an endpoint is byte-for-byte the direct edge.
    let covering: Vec<Vec<NodeId>> = pairs
        .iter()
        .map(|&(u, v)| {
            let (ru, rv) = (row(u), row(v));
            let d = ru[v as usize];
            (0..g.node_count() as NodeId)
                .filter(|&x| x != u && x != v && ru[x as usize] + rv[x as usize] == d)
                .collect()
        })
        .collect();

    let mut claims: BTreeMap<NodeId, Vec<usize>> = BTreeMap::new();
    let mut claimed = vec![false; pairs.len()];
    let mut pool: Vec<usize> = Vec::new();

    if let Some(order) = order {
        // Peak classification: group turning pairs under their peak.
        let mut groups: BTreeMap<NodeId, Vec<usize>> = BTreeMap::new();
        for (i, &(u, v)) in pairs.iter().enumerate() {
            let peak_interior = covering[i]
                .iter()
                .copied()
                .max_by_key(|&x| order[x as usize])
                .filter(|&x| order[x as usize] > order[u as usize].max(order[v as usize]));
            match peak_interior {
                Some(x) => groups.entry(x).or_default().push(i),
                None => pool.push(i),
            }
        }
        for (x, group) in groups {
            if !cost_model || space_test(&pairs, &group, x) {
                for &i in &group {
                    claimed[i] = true;
                }
                claims.entry(x).or_default().extend(group);
            } else {
                pool.extend(group);
            }
        }
        pool.sort_unstable();
    } else {
        pool = (0..pairs.len()).collect();
    }

    // Greedy phase over the pool. Candidate lists are filtered as claims land.
    let mut cand: BTreeMap<NodeId, Vec<usize>> = BTreeMap::new();
    for &i in &pool {
        for &x in &covering[i] {
            cand.entry(x).or_default().push(i);
        }
    }
    loop {
        let mut best: Option<(usize, NodeId)> = None;
        for (&x, list) in &mut cand {
            list.retain(|&i| !claimed[i]);
            if !list.is_empty()
                && (!cost_model || space_test(&pairs, list, x))
                && best.map_or(true, |(bc, _)| list.len() > bc)
            {
                best = Some((list.len(), x));
            }
        }
        let Some((_, x)) = best else { break };
        let list = cand.remove(&x).unwrap();
        for &i in &list {
            claimed[i] = true;
        }
        claims.entry(x).or_default().extend(list);
    }

    // Assemble: landmarks from claims, direct edges from what is left.
    let mut landmarks = Vec::new();
    for (x, mut list) in claims {
        list.sort_unstable();
        let mut covered: Vec<NodeId> = list.iter().flat_map(|&i| [pairs[i].0, pairs[i].1]).collect();
        covered.sort_unstable();
        covered.dedup();
        debug_assert!(
            !cost_model || covered.len() <= list.len(),
            "cost test violated for landmark {x}"
        );
        let covered = covered
            .into_iter()
            .map(|u| (u, row(u)[x as usize]))
            .collect();
        landmarks.push(HybridLandmark {
            node: x,
            covered,
            pairs: list.iter().map(|&i| pairs[i]).collect(),
        });
    }
    let direct_edges = pairs
        .iter()
        .zip(&claimed)
        .filter(|(_, &c)| !c)
        .map(|(&(u, v), _)| (u, v, row(u)[v as usize]))
        .collect();
    Ok(HybridLandmarkCover { landmarks, direct_edges })
}

/// |N_x| <= |P_x| over a prospective claim set (x never appears among the
/// endpoints by candidate construction).
fn space_test(pairs: &[(NodeId, NodeId)], claim: &[usize], x: NodeId) -> bool {
    let mut endpoints: Vec<NodeId> =
        claim.iter().flat_map(|&i| [pairs[i].0, pairs[i].1]).collect();
    endpoints.sort_unstable();
    endpoints.dedup();
    debug_assert!(!endpoints.contains(&x));
    endpoints.len() <= claim.len()
}

fn canonical_pairs(pairs: &[(NodeId, NodeId)]) -> Vec<(NodeId, NodeId)> {
    let mut out: Vec<(NodeId, NodeId)> = pairs
        .iter()
        .filter(|&&(u, v)| u != v)
        .map(|&(u, v)| (u.min(v), u.max(v)))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// One full Dijkstra per distinct pair endpoint; errors on unreachable pairs.
fn endpoint_rows(
    g: &WeightedGraph,
    pairs: &[(NodeId, NodeId)],
) -> Result<(Vec<NodeId>, Vec<Vec<Distance>>)> {
    let mut endpoints: Vec<NodeId> = pairs.iter().flat_map(|&(u, v)| [u, v]).collect();
    endpoints.sort_unstable();
    endpoints.dedup();
    if let Some(&bad) = endpoints.iter().find(|&&u| u as usize >= g.node_count()) {
        return Err(Error::validation(format!("pair endpoint {bad} out of range")));
    }
    let rows: Vec<Vec<Distance>> = endpoints.iter().map(|&u| dijkstra(g, u)).collect();
    for &(u, v) in pairs {
        if rows[endpoints.binary_search(&u).unwrap()][v as usize] == crate::graph::UNREACHABLE {
            return Err(Error::validation(format!("pair ({u},{v}) is unreachable")));
        }
    }
    Ok((endpoints, rows))
}
