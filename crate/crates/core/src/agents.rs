//! Agents and their deterministic routing areas (DRAs).
//!
//! A maximal agent `u` represents a set of nodes `A_u` that is sealed off from
//! the rest of the graph: every member's neighbors stay inside `A⁺_u = A_u ∪
//! {u}`, so any route between a member and the outside world must pass through
//! `u`. This lets the pipeline delete all members except `u` from the search
//! graph and answer member distances from a small precomputed table.
//!
//! Extraction works on the block-cut sketch. Cut vertices whose neighbor
//! blocks are (almost all) leaves are repeatedly folded together with those
//! blocks while the folded node count `α = Σω − |X| + 1` stays within the size
//! threshold `c·⌊√|V|⌋`; a cut vertex that fails the test once is never
//! retried. At the fixpoint, every surviving cut vertex adopts its small leaf
//! blocks as branches of its DRA. Components whose sketch collapsed into a
//! single block within the threshold become one DRA owned by their smallest
//! node id.

use crate::connectivity::{build_sketch, find_bccs};
use crate::error::{Error, Result};
use crate::graph::{dijkstra_core, Distance, NodeId, SearchSpace, WeightedGraph, UNREACHABLE};

/// Tuning for DRA extraction.
#[derive(Debug, Clone, Copy)]
pub struct AgentConfig {
    /// Threshold multiplier: branch sizes are bounded by `c·⌊√|V|⌋` over the
    /// whole input graph's node count. Must be >= 1.
    pub c: u64,
}

impl Default for AgentConfig {
    fn default() -> Self {
        AgentConfig { c: 2 }
    }
}

impl AgentConfig {
    /// The merge/branch size threshold for a graph with `n` nodes.
    pub fn threshold(&self, n: usize) -> u64 {
        self.c * (n as u64).isqrt()
    }
}

/// Sentinel branch id carried by the agent itself inside its own DRA.
pub const AGENT_BRANCH: u32 = u32::MAX;

const NONE: u32 = u32::MAX;

/// One maximal agent with its DRA.
#[derive(Debug, Clone)]
pub struct AgentDra {
    /// The agent node (graph id).
    pub agent: NodeId,
    /// All of `A⁺`: member nodes ascending, agent included.
    pub members: Vec<NodeId>,
    /// Branch index per member, parallel to `members`; the agent carries
    /// [`AGENT_BRANCH`]. Branches partition `A⁺ ∖ {agent}`.
    pub branch_of: Vec<u32>,
    /// `dist(agent, member)` inside the DRA, parallel to `members`.
    pub dist: Vec<Distance>,
    /// Number of branches.
    pub branch_count: u32,
}

/// Output of [`compute_dras`]: who owns whom, and the per-agent tables.
#[derive(Debug, Clone)]
pub struct DraAssignment {
    /// The size threshold the extraction ran with.
    pub threshold: u64,
    /// Owning agent per node. Agents and nodes outside every DRA own
    /// themselves.
    pub owner: Vec<NodeId>,
    /// All non-trivial DRAs, ascending by agent id.
    pub dras: Vec<AgentDra>,
    dra_of_agent: Vec<u32>,
    member_slot: Vec<u32>,
}

impl DraAssignment {
    /// The owning agent of `v` (`v` itself when it is not inside any DRA).
    pub fn owner(&self, v: NodeId) -> NodeId {
        self.owner[v as usize]
    }

    /// The DRA whose agent is `u`, if `u` is a non-trivial maximal agent.
    pub fn dra_of_agent(&self, u: NodeId) -> Option<&AgentDra> {
        match self.dra_of_agent[u as usize] {
            NONE => None,
            i => Some(&self.dras[i as usize]),
        }
    }

    /// The DRA containing `v`, if any.
    pub fn dra_of(&self, v: NodeId) -> Option<&AgentDra> {
        self.dra_of_agent(self.owner(v))
    }

    /// Member set `A⁺_u` of agent `u`, if `u` is a non-trivial maximal agent.
    pub fn members(&self, u: NodeId) -> Option<&[NodeId]> {
        self.dra_of_agent(u).map(|d| d.members.as_slice())
    }

    /// Branch index of `v` within its DRA. `None` when `v` is an agent or
    /// outside every DRA.
    pub fn branch_id(&self, v: NodeId) -> Option<u32> {
        let slot = self.member_slot[v as usize];
        if slot == NONE {
            return None;
        }
        let d = self.dra_of(v).expect("member slot implies a DRA");
        match d.branch_of[slot as usize] {
            AGENT_BRANCH => None,
            b => Some(b),
        }
    }

    /// `dist(u, v)` for a member `v` of agent `u`'s DRA; `Some(0)` when
    /// `u == v`. `None` when `u` does not own `v`.
    pub fn agent_dist(&self, u: NodeId, v: NodeId) -> Option<Distance> {
        if self.owner(v) != u {
            return None;
        }
        if u == v {
            return Some(0);
        }
        let d = self.dra_of_agent(u)?;
        Some(d.dist[self.member_slot[v as usize] as usize])
    }

    /// Count of nodes strictly inside some DRA (members that are not agents).
    pub fn represented_count(&self) -> usize {
        self.dras.iter().map(|d| d.members.len() - 1).sum()
    }
}

struct Block {
    omega: u64,
    /// Adjacent alive cut vertices. Alive blocks only ever border alive cuts.
    cuts: Vec<NodeId>,
    alive: bool,
    src: BlockSrc,
}

enum BlockSrc {
    Original(u32),
    Merged { center: NodeId, children: Vec<u32> },
}

/// Extracts all maximal agents and their DRAs.
pub fn compute_dras(g: &WeightedGraph, cfg: &AgentConfig) -> DraAssignment {
    assert!(cfg.c >= 1, "AgentConfig.c must be >= 1");
    let n = g.node_count();
    let threshold = cfg.threshold(n);

    let deco = find_bccs(g);
    let sketch = build_sketch(g, &deco);

    // Mutable sketch arena. Blocks are consumed by merges and replaced with
    // fresh entries; cut vertices track their alive neighbor blocks.
    let mut blocks: Vec<Block> = deco
        .bccs
        .iter()
        .enumerate()
        .map(|(i, b)| Block {
            omega: b.nodes.len() as u64,
            cuts: Vec::new(),
            alive: true,
            src: BlockSrc::Original(i as u32),
        })
        .collect();
    let mut cut_blocks: Vec<Vec<u32>> = vec![Vec::new(); sketch.cut_vertices.len()];
    for &(ci, bi) in &sketch.edges {
        blocks[bi as usize].cuts.push(sketch.cut_vertices[ci as usize]);
        cut_blocks[ci as usize].push(bi);
    }
    let mut cut_index = vec![NONE; n];
    for (i, &v) in sketch.cut_vertices.iter().enumerate() {
        cut_index[v as usize] = i as u32;
    }
    let mut cut_alive = vec![true; sketch.cut_vertices.len()];
    let mut considered = vec![false; sketch.cut_vertices.len()];

    let is_leaf = |blocks: &[Block], b: u32| blocks[b as usize].cuts.len() == 1;
    let eligible = |blocks: &[Block], neigh: &[u32]| {
        let mut leaves = 0usize;
        let mut others = 0usize;
        for &b in neigh {
            if is_leaf(blocks, b) {
                leaves += 1;
            } else {
                others += 1;
            }
        }
        leaves >= 1 && others <= 1
    };

    let mut frontier: std::collections::BTreeSet<NodeId> = sketch
        .cut_vertices
        .iter()
        .enumerate()
        .filter(|(ci, _)| eligible(&blocks, &cut_blocks[*ci]))
        .map(|(_, &v)| v)
        .collect();

    while let Some(&v) = frontier.iter().next() {
        frontier.remove(&v);
        let ci = cut_index[v as usize] as usize;
        debug_assert!(cut_alive[ci] && !considered[ci]);
        debug_assert!(eligible(&blocks, &cut_blocks[ci]));
        let x: Vec<u32> = cut_blocks[ci].clone();
        let alpha: u64 =
            x.iter().map(|&b| blocks[b as usize].omega).sum::<u64>() - x.len() as u64 + 1;
        if alpha > threshold {
            considered[ci] = true;
            continue;
        }
        // Fold v and all its neighbor blocks into one block, spliced in place
        // of the (at most one) non-leaf neighbor.
        let non_leaf = x.iter().copied().find(|&b| !is_leaf(&blocks, b));
        let new_cuts: Vec<NodeId> = match non_leaf {
            Some(b) => blocks[b as usize].cuts.iter().copied().filter(|&w| w != v).collect(),
            None => Vec::new(),
        };
        for &b in &x {
            blocks[b as usize].alive = false;
        }
        cut_alive[ci] = false;
        let nb = blocks.len() as u32;
        blocks.push(Block {
            omega: alpha,
            cuts: new_cuts.clone(),
            alive: true,
            src: BlockSrc::Merged { center: v, children: x },
        });
        for &w in &new_cuts {
            let wi = cut_index[w as usize] as usize;
            let pos = cut_blocks[wi]
                .iter()
                .position(|&b| Some(b) == non_leaf)
                .expect("spliced neighbor must be adjacent");
            cut_blocks[wi][pos] = nb;
            if !considered[wi] && !frontier.contains(&w) && eligible(&blocks, &cut_blocks[wi]) {
                frontier.insert(w);
            }
        }
    }

    // Fixpoint reached: adopt branches. Surviving cut vertices take their
    // small leaf blocks; fully collapsed components take their smallest node.
    let mut owner: Vec<NodeId> = (0..n as NodeId).collect();
    let mut member_slot = vec![NONE; n];
    let mut raw: Vec<AgentDra> = Vec::new();

    for (ci, &v) in sketch.cut_vertices.iter().enumerate() {
        if !cut_alive[ci] {
            continue;
        }
        let branches: Vec<u32> = cut_blocks[ci]
            .iter()
            .copied()
            .filter(|&b| is_leaf(&blocks, b) && blocks[b as usize].omega <= threshold)
            .collect();
        if branches.is_empty() {
            continue;
        }
        let mut members = vec![v];
        let mut branch_of = vec![AGENT_BRANCH];
        for (bi, &b) in branches.iter().enumerate() {
            let mut part = block_members(&blocks, &deco, b);
            part.retain(|&x| x != v);
            debug_assert_eq!(part.len() as u64 + 1, blocks[b as usize].omega);
            branch_of.extend(std::iter::repeat(bi as u32).take(part.len()));
            members.extend(part);
        }
        raw.push(sorted_dra(v, members, branch_of, branches.len() as u32));
    }

    for b in 0..blocks.len() as u32 {
        let blk = &blocks[b as usize];
        if !blk.alive || !blk.cuts.is_empty() || blk.omega > threshold || blk.omega < 2 {
            continue;
        }
        let members = block_members(&blocks, &deco, b);
        debug_assert_eq!(members.len() as u64, blk.omega);
        let agent = members[0];
        let mut branch_of = vec![0u32; members.len()];
        branch_of[0] = AGENT_BRANCH;
        raw.push(sorted_dra(agent, members, branch_of, 1));
    }

    raw.sort_by_key(|d| d.agent);
    let mut dra_of_agent = vec![NONE; n];
    for (i, d) in raw.iter().enumerate() {
        dra_of_agent[d.agent as usize] = i as u32;
        for (slot, &m) in d.members.iter().enumerate() {
            debug_assert!(m == d.agent || owner[m as usize] == m, "overlapping DRAs");
            owner[m as usize] = d.agent;
            member_slot[m as usize] = slot as u32;
        }
    }

    // Distance tables: one Dijkstra per agent, restricted to its own DRA.
    let mut space = SearchSpace::new();
    for d in &mut raw {
        let agent = d.agent;
        let admit = |x: NodeId| owner[x as usize] == agent;
        dijkstra_core(g, agent, &[], Some(&admit), UNREACHABLE, None, &mut space);
        for (slot, &m) in d.members.iter().enumerate() {
            let dist = space.get(m);
            debug_assert_ne!(dist, UNREACHABLE, "DRA must be internally connected");
            d.dist[slot] = dist;
        }
    }

    DraAssignment { threshold, owner, dras: raw, dra_of_agent, member_slot }
}

fn sorted_dra(agent: NodeId, members: Vec<NodeId>, branch_of: Vec<u32>, nb: u32) -> AgentDra {
    let mut idx: Vec<usize> = (0..members.len()).collect();
    idx.sort_unstable_by_key(|&i| members[i]);
    let members_sorted: Vec<NodeId> = idx.iter().map(|&i| members[i]).collect();
    let branch_sorted: Vec<u32> = idx.iter().map(|&i| branch_of[i]).collect();
    debug_assert!(members_sorted.windows(2).all(|w| w[0] < w[1]), "duplicate DRA member");
    let len = members_sorted.len();
    AgentDra {
        agent,
        members: members_sorted,
        branch_of: branch_sorted,
        dist: vec![0; len],
        branch_count: nb,
    }
}

/// Distinct graph nodes inside block `b`, ascending.
fn block_members(
    blocks: &[Block],
    deco: &crate::connectivity::BccDecomposition,
    b: u32,
) -> Vec<NodeId> {
    let mut out = Vec::new();
    let mut stack = vec![b];
    while let Some(b) = stack.pop() {
        match &blocks[b as usize].src {
            BlockSrc::Original(i) => out.extend_from_slice(&deco.bccs[*i as usize].nodes),
            BlockSrc::Merged { center, children } => {
                out.push(*center);
                stack.extend_from_slice(children);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Subgraph of `g` induced by the nodes that survive DRA shrinking, with a
/// compact re-numbering.
#[derive(Debug, Clone)]
pub struct ShrinkGraph {
    /// The shrunk graph over compact ids `0..kept`.
    pub graph: WeightedGraph,
    /// Compact id -> original node id, ascending.
    pub to_original: Vec<NodeId>,
    /// Original node id -> compact id, `u32::MAX` for nodes shrunk away.
    pub of_original: Vec<u32>,
}

impl ShrinkGraph {
    /// Compact id of an original node, if it survived shrinking.
    pub fn compact(&self, original: NodeId) -> Option<NodeId> {
        match self.of_original[original as usize] {
            NONE => None,
            c => Some(c),
        }
    }
}

/// Deletes every DRA interior from `g`, keeping agents and unaffected nodes.
pub fn build_shrink_graph(g: &WeightedGraph, a: &DraAssignment) -> ShrinkGraph {
    let n = g.node_count();
    let mut of_original = vec![NONE; n];
    let mut to_original = Vec::new();
    for v in 0..n as NodeId {
        if a.owner(v) == v {
            of_original[v as usize] = to_original.len() as u32;
            to_original.push(v);
        }
    }
    let mut edges = Vec::new();
    for (u, v, w) in g.edges() {
        let (cu, cv) = (of_original[u as usize], of_original[v as usize]);
        if cu != NONE && cv != NONE {
            edges.push((cu, cv, w));
        }
    }
    let graph = WeightedGraph::from_edges(to_original.len(), &edges)
        .expect("induced subgraph edges are valid");
    ShrinkGraph { graph, to_original, of_original }
}

/// Distance between two nodes owned by the same agent.
///
/// Same-branch pairs run a Dijkstra restricted to that branch plus the agent;
/// cross-branch pairs are answered from the distance table, since every route
/// between branches passes through the agent.
pub fn dra_distance(
    a: &DraAssignment,
    g: &WeightedGraph,
    s: NodeId,
    t: NodeId,
) -> Result<Distance> {
    let u = a.owner(s);
    if a.owner(t) != u {
        return Err(Error::validation(format!(
            "dra_distance: {s} and {t} have different owners ({u} vs {})",
            a.owner(t)
        )));
    }
    if s == t {
        return Ok(0);
    }
    let (ds, dt) = (a.agent_dist(u, s), a.agent_dist(u, t));
    match (ds, dt) {
        (Some(ds), Some(dt)) => {
            if s == u || t == u {
                return Ok(ds + dt); // one side is the agent; its term is 0
            }
            let (bs, bt) = (a.branch_id(s), a.branch_id(t));
            if bs == bt {
                let b = bs.expect("non-agent member has a branch");
                let admit =
                    |x: NodeId| x == u || (a.owner(x) == u && a.branch_id(x) == Some(b));
                let mut space = SearchSpace::new();
                dijkstra_core(g, s, &[t], Some(&admit), UNREACHABLE, None, &mut space);
                Ok(space.get(t))
            } else {
                Ok(ds + dt)
            }
        }
        // owner(s) == owner(t) == u but u owns no DRA: both are the same
        // trivial node, already handled by s == t above
        _ => Err(Error::validation(format!("dra_distance: {s},{t} not members of a DRA"))),
    }
}
