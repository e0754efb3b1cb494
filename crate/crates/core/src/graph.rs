//! Core graph representation, Dijkstra engine and DIMACS ingestion.
//!
//! Design notes:
//!
//! - The graph is undirected and immutable after construction. Every edge is
//!   stored in both adjacency lists; parallel edges collapse to the minimum
//!   weight and self loops are dropped at build time.
//! - Distances are `u64` with `UNREACHABLE = u64::MAX` as the sentinel, which
//!   compares greater than every finite distance. Weights share the type so
//!   sums never overflow on road-scale inputs.
//! - `SearchSpace` keeps versioned distance arrays so hot loops (thousands of
//!   Dijkstra runs over one graph) avoid re-zeroing O(n) memory per run. The
//!   public `dijkstra*` helpers allocate a fresh space; inner modules reuse one.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::io::{BufRead, BufReader, Read};

use crate::error::{Error, Result};

pub type NodeId = u32;
pub type Distance = u64;

/// Sentinel for "no path". Compares greater than any finite distance.
pub const UNREACHABLE: Distance = u64::MAX;

#[derive(Clone, Debug, Default)]
pub struct WeightedGraph {
    adj: Vec<Vec<(NodeId, Distance)>>,
    coords: Option<Vec<(i64, i64)>>,
    edge_count: usize,
}

impl WeightedGraph {
    /// Builds a graph from an undirected edge list. Self loops are dropped;
    /// duplicate pairs (in either orientation) collapse to the minimum weight.
    /// Weights must be strictly positive.
    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId, Distance)]) -> Result<Self> {
        let mut canon: Vec<(NodeId, NodeId, Distance)> = Vec::with_capacity(edges.len());
        for &(u, v, w) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(Error::validation(format!(
                    "edge ({u},{v}) references a node >= {n}"
                )));
            }
            if w == 0 {
                return Err(Error::validation(format!(
                    "edge ({u},{v}) has non-positive weight"
                )));
            }
            if u == v {
                continue;
            }
            canon.push((u.min(v), u.max(v), w));
        }
        canon.sort_unstable();
        canon.dedup_by(|next, kept| {
            // sorted by weight within a pair, so the first entry is the minimum
            next.0 == kept.0 && next.1 == kept.1
        });

        let mut adj = vec![Vec::new(); n];
        for &(u, v, w) in &canon {
            adj[u as usize].push((v, w));
            adj[v as usize].push((u, w));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(WeightedGraph {
            adj,
            coords: None,
            edge_count: canon.len(),
        })
    }

    pub fn set_coords(&mut self, coords: Vec<(i64, i64)>) -> Result<()> {
        if coords.len() != self.node_count() {
            return Err(Error::validation(format!(
                "coordinate count {} does not match node count {}",
                coords.len(),
                self.node_count()
            )));
        }
        self.coords = Some(coords);
        Ok(())
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    /// Undirected edge count.
    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn neighbors(&self, u: NodeId) -> &[(NodeId, Distance)] {
        &self.adj[u as usize]
    }

    #[inline]
    pub fn degree(&self, u: NodeId) -> usize {
        self.adj[u as usize].len()
    }

    pub fn coords(&self) -> Option<&[(i64, i64)]> {
        self.coords.as_deref()
    }

    /// Weight of edge (u,v) if present.
    pub fn edge_weight(&self, u: NodeId, v: NodeId) -> Option<Distance> {
        let list = &self.adj[u as usize];
        list.binary_search_by_key(&v, |&(x, _)| x)
            .ok()
            .map(|i| list[i].1)
    }

    /// Undirected edges as (u, v, w) with u < v, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, Distance)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .filter(move |&&(v, _)| (u as NodeId) < v)
                .map(move |&(v, w)| (u as NodeId, v, w))
        })
    }

    /// Checksum of the graph structure (node count plus canonical edge list),
    /// used as index provenance.
    pub fn checksum(&self) -> u32 {
        let mut h = crc32fast::Hasher::new();
        h.update(&(self.node_count() as u64).to_le_bytes());
        for (u, v, w) in self.edges() {
            h.update(&u.to_le_bytes());
            h.update(&v.to_le_bytes());
            h.update(&w.to_le_bytes());
        }
        h.finalize()
    }
}

/// Reusable Dijkstra scratch. Distance entries are valid only for the current
/// epoch, so clearing between runs is O(1).
pub struct SearchSpace {
    dist: Vec<Distance>,
    epoch_of: Vec<u32>,
    epoch: u32,
    heap: BinaryHeap<Reverse<(Distance, NodeId)>>,
}

impl SearchSpace {
    pub fn new() -> Self {
        SearchSpace {
            dist: Vec::new(),
            epoch_of: Vec::new(),
            epoch: 0,
            heap: BinaryHeap::new(),
        }
    }

    fn begin(&mut self, n: usize) {
        if self.dist.len() < n {
            self.dist.resize(n, UNREACHABLE);
            self.epoch_of.resize(n, 0);
        }
        self.epoch = match self.epoch.checked_add(1) {
            Some(e) => e,
            None => {
                self.epoch_of.fill(0);
                1
            }
        };
        self.heap.clear();
    }

    #[inline]
    pub fn get(&self, v: NodeId) -> Distance {
        if self.epoch_of[v as usize] == self.epoch {
            self.dist[v as usize]
        } else {
            UNREACHABLE
        }
    }

    #[inline]
    fn set(&mut self, v: NodeId, d: Distance) {
        self.dist[v as usize] = d;
        self.epoch_of[v as usize] = self.epoch;
    }
}

impl Default for SearchSpace {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SearchStats {
    pub settled: usize,
}

/// All-options Dijkstra over `g` from `source`, writing distances into `space`.
///
/// - `targets`: stop once all listed nodes are settled (empty slice = run to
///   exhaustion).
/// - `admit`: restrict the search to nodes the predicate accepts; the source
///   is always admitted.
/// - `radius`: stop once the next tentative distance exceeds it. Distances
///   up to and including `radius` are exact afterwards.
/// - `banned`: one undirected edge to ignore, for redundancy tests.
pub(crate) fn dijkstra_core(
    g: &WeightedGraph,
    source: NodeId,
    targets: &[NodeId],
    admit: Option<&dyn Fn(NodeId) -> bool>,
    radius: Distance,
    banned: Option<(NodeId, NodeId)>,
    space: &mut SearchSpace,
) -> SearchStats {
    space.begin(g.node_count());
    space.set(source, 0);
    space.heap.push(Reverse((0, source)));

    let mut sorted_targets = targets.to_vec();
    sorted_targets.sort_unstable();
    sorted_targets.dedup();
    let mut pending = sorted_targets.len();
    let mut stats = SearchStats::default();

    while let Some(Reverse((d, u))) = space.heap.pop() {
        if d > space.get(u) {
            continue; // stale entry
        }
        if d > radius {
            break;
        }
        stats.settled += 1;
        if pending > 0 && sorted_targets.binary_search(&u).is_ok() {
            pending -= 1;
            if pending == 0 {
                break;
            }
        }
        for &(v, w) in g.neighbors(u) {
            if let Some((a, b)) = banned {
                if (u == a && v == b) || (u == b && v == a) {
                    continue;
                }
            }
            if let Some(f) = admit {
                if !f(v) {
                    continue;
                }
            }
            let nd = d.saturating_add(w);
            if nd < space.get(v) {
                space.set(v, nd);
                space.heap.push(Reverse((nd, v)));
            }
        }
    }
    stats
}

/// Shortest distances from `source` to every node; unreachable nodes map to
/// `UNREACHABLE`.
pub fn dijkstra(g: &WeightedGraph, source: NodeId) -> Vec<Distance> {
    dijkstra_opts(g, source, None, None)
}

/// Dijkstra with optional early exit (stop when all `targets` are settled) and
/// an optional node filter. Filtered-out nodes report `UNREACHABLE`.
pub fn dijkstra_opts(
    g: &WeightedGraph,
    source: NodeId,
    targets: Option<&[NodeId]>,
    admit: Option<&dyn Fn(NodeId) -> bool>,
) -> Vec<Distance> {
    let mut space = SearchSpace::new();
    dijkstra_core(
        g,
        source,
        targets.unwrap_or(&[]),
        admit,
        UNREACHABLE,
        None,
        &mut space,
    );
    (0..g.node_count() as NodeId).map(|v| space.get(v)).collect()
}

/// Connected-component labels; two nodes share a label iff a path joins them.
/// Labels are dense and assigned in ascending order of first node.
pub fn connected_components(g: &WeightedGraph) -> Vec<u32> {
    let n = g.node_count();
    let mut label = vec![u32::MAX; n];
    let mut next = 0u32;
    let mut stack = Vec::new();
    for s in 0..n {
        if label[s] != u32::MAX {
            continue;
        }
        label[s] = next;
        stack.push(s as NodeId);
        while let Some(u) = stack.pop() {
            for &(v, _) in g.neighbors(u) {
                if label[v as usize] == u32::MAX {
                    label[v as usize] = next;
                    stack.push(v);
                }
            }
        }
        next += 1;
    }
    label
}

// ---------------------------------------------------------------------------
// DIMACS ingestion
// ---------------------------------------------------------------------------

/// Loads a DIMACS `.gr` stream (and optionally a `.co` coordinate stream) into
/// a graph. Node ids are shifted to 0-based; the two directions of each arc
/// merge into one undirected edge, keeping the minimum weight on disagreement.
/// Gzip-compressed streams are detected by their magic bytes.
pub fn load_dimacs<R: Read, S: Read>(gr: R, co: Option<S>) -> Result<WeightedGraph> {
    let reader = maybe_gunzip(gr)?;
    let (n, edges) = parse_gr(reader)?;
    let mut g = WeightedGraph::from_edges(n, &edges)?;
    if let Some(co) = co {
        let reader = maybe_gunzip(co)?;
        let coords = parse_co(reader, n)?;
        g.set_coords(coords)?;
    }
    Ok(g)
}

fn maybe_gunzip<'a, R: Read + 'a>(mut r: R) -> Result<Box<dyn BufRead + 'a>> {
    let mut head = [0u8; 2];
    let mut got = 0;
    while got < 2 {
        match r.read(&mut head[got..])? {
            0 => break,
            k => got += k,
        }
    }
    let rest = std::io::Cursor::new(head[..got].to_vec()).chain(r);
    if got == 2 && head == [0x1f, 0x8b] {
        Ok(Box::new(BufReader::new(flate2::read::GzDecoder::new(rest))))
    } else {
        Ok(Box::new(BufReader::new(rest)))
    }
}

fn parse_gr(reader: Box<dyn BufRead + '_>) -> Result<(usize, Vec<(NodeId, NodeId, Distance)>)> {
    let mut n: Option<usize> = None;
    let mut edges: Vec<(NodeId, NodeId, Distance)> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let mut it = line.split_whitespace();
        match it.next() {
            None | Some("c") => continue,
            Some("p") => {
                if n.is_some() {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: "duplicate problem line".into(),
                    });
                }
                let kind = it.next();
                if kind != Some("sp") {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("expected `p sp`, got `p {}`", kind.unwrap_or("")),
                    });
                }
                let nodes = parse_field::<usize>(it.next(), lineno, "node count")?;
                let _arcs = parse_field::<usize>(it.next(), lineno, "arc count")?;
                n = Some(nodes);
            }
            Some("a") => {
                let n = n.ok_or(Error::Parse {
                    line: lineno,
                    msg: "arc before problem line".into(),
                })?;
                let u = parse_field::<u64>(it.next(), lineno, "arc tail")?;
                let v = parse_field::<u64>(it.next(), lineno, "arc head")?;
                let w = parse_field::<i64>(it.next(), lineno, "arc weight")?;
                if u == 0 || u > n as u64 || v == 0 || v > n as u64 {
                    return Err(Error::validation(format!(
                        "line {lineno}: arc ({u},{v}) outside 1..={n}"
                    )));
                }
                if w <= 0 {
                    return Err(Error::validation(format!(
                        "line {lineno}: arc weight {w} must be positive"
                    )));
                }
                if u != v {
                    edges.push(((u - 1) as NodeId, (v - 1) as NodeId, w as Distance));
                }
            }
            Some(other) => {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("unknown record `{other}`"),
                });
            }
        }
    }
    let n = n.ok_or(Error::Parse {
        line: 0,
        msg: "missing problem line".into(),
    })?;
    Ok((n, edges))
}

fn parse_co(reader: Box<dyn BufRead + '_>, n: usize) -> Result<Vec<(i64, i64)>> {
    let mut coords = vec![(0i64, 0i64); n];
    let mut seen = vec![false; n];
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let mut it = line.split_whitespace();
        match it.next() {
            None | Some("c") | Some("p") => continue,
            Some("v") => {
                let id = parse_field::<u64>(it.next(), lineno, "node id")?;
                let x = parse_field::<i64>(it.next(), lineno, "x coordinate")?;
                let y = parse_field::<i64>(it.next(), lineno, "y coordinate")?;
                if id == 0 || id > n as u64 {
                    return Err(Error::validation(format!(
                        "line {lineno}: coordinate for node {id} outside 1..={n}"
                    )));
                }
                coords[(id - 1) as usize] = (x, y);
                seen[(id - 1) as usize] = true;
            }
            Some(other) => {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("unknown record `{other}`"),
                });
            }
        }
    }
    if let Some(missing) = seen.iter().position(|&s| !s) {
        return Err(Error::validation(format!(
            "no coordinate for node {}",
            missing + 1
        )));
    }
    Ok(coords)
}

fn parse_field<T: std::str::FromStr>(
    field: Option<&str>,
    line: usize,
    what: &str,
) -> Result<T> {
    field
        .ok_or(Error::Parse {
            line,
            msg: format!("missing {what}"),
        })?
        .parse::<T>()
        .map_err(|_| Error::Parse {
            line,
            msg: format!("bad {what}"),
        })
}
