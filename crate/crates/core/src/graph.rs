//! Bipartite Tanner graphs, girth, and directed neighborhoods.
//!
//! Variable nodes are indexed `0..n` and check nodes `0..m`. Every edge
//! `{v, c}` gets a dense id assigned in sorted `(v, c)` order, so the edges of
//! variable `v` occupy the contiguous id range `var_edge_range(v)`. The
//! decoder stores its messages in flat arrays indexed by these ids.

use std::cmp::Ordering;
use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("variable index {index} out of range (n = {n})")]
    VariableOutOfRange { index: usize, n: usize },
    #[error("check index {index} out of range (m = {m})")]
    CheckOutOfRange { index: usize, m: usize },
    #[error("duplicate edge between variable {var} and check {check}")]
    DuplicateEdge { var: usize, check: usize },
}

/// A node of the Tanner graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Node {
    Var(usize),
    Check(usize),
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Var(v) => write!(f, "v{v}"),
            Node::Check(c) => write!(f, "c{c}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeKind {
    VarToCheck,
    CheckToVar,
}

/// An ordered pair `(v, c)` or `(c, v)` over an edge of the graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DirectedEdge {
    pub kind: EdgeKind,
    pub tail: usize,
    pub head: usize,
}

impl DirectedEdge {
    pub fn var_to_check(var: usize, check: usize) -> Self {
        DirectedEdge { kind: EdgeKind::VarToCheck, tail: var, head: check }
    }

    pub fn check_to_var(check: usize, var: usize) -> Self {
        DirectedEdge { kind: EdgeKind::CheckToVar, tail: check, head: var }
    }

    pub fn tail_node(&self) -> Node {
        match self.kind {
            EdgeKind::VarToCheck => Node::Var(self.tail),
            EdgeKind::CheckToVar => Node::Check(self.tail),
        }
    }

    pub fn head_node(&self) -> Node {
        match self.kind {
            EdgeKind::VarToCheck => Node::Check(self.head),
            EdgeKind::CheckToVar => Node::Var(self.head),
        }
    }

    pub fn reversed(&self) -> Self {
        match self.kind {
            EdgeKind::VarToCheck => DirectedEdge::check_to_var(self.head, self.tail),
            EdgeKind::CheckToVar => DirectedEdge::var_to_check(self.head, self.tail),
        }
    }

    /// The `(variable, check)` pair of the underlying undirected edge.
    pub fn endpoints(&self) -> (usize, usize) {
        match self.kind {
            EdgeKind::VarToCheck => (self.tail, self.head),
            EdgeKind::CheckToVar => (self.head, self.tail),
        }
    }
}

/// Length of the shortest cycle, or `Infinite` for a forest.
///
/// `Finite(_)` always orders before `Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Girth {
    Finite(usize),
    Infinite,
}

impl Girth {
    pub fn finite(self) -> Option<usize> {
        match self {
            Girth::Finite(g) => Some(g),
            Girth::Infinite => None,
        }
    }

    pub fn is_at_least(self, len: usize) -> bool {
        self >= Girth::Finite(len)
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Girth {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Girth::Finite(g) => s.serialize_u64(*g as u64),
            Girth::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Girth {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(usize),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(g) => Ok(Girth::Finite(g)),
            Repr::Text(t) if t == "inf" => Ok(Girth::Infinite),
            Repr::Text(t) => Err(serde::de::Error::custom(format!("invalid girth {t:?}"))),
        }
    }
}

/// Immutable bipartite graph of variable and check nodes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TannerGraph {
    n: usize,
    m: usize,
    var_adj: Vec<Vec<usize>>,
    chk_adj: Vec<Vec<usize>>,
    // var_offsets[v]..var_offsets[v + 1] are the edge ids of variable v
    var_offsets: Vec<usize>,
    // edge ids of check c, aligned with chk_adj[c]
    chk_edges: Vec<Vec<usize>>,
    edge_ends: Vec<(usize, usize)>,
}

impl TannerGraph {
    /// Builds a graph from an arbitrary edge list.
    pub fn from_edges<I>(n: usize, m: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut var_adj = vec![Vec::new(); n];
        for (v, c) in edges {
            if v >= n {
                return Err(GraphError::VariableOutOfRange { index: v, n });
            }
            if c >= m {
                return Err(GraphError::CheckOutOfRange { index: c, m });
            }
            var_adj[v].push(c);
        }
        Self::from_var_adjacency(m, var_adj)
    }

    /// Builds a graph from per-variable check lists (in any order).
    pub fn from_var_adjacency(m: usize, mut var_adj: Vec<Vec<usize>>) -> Result<Self, GraphError> {
        let n = var_adj.len();
        for (v, checks) in var_adj.iter_mut().enumerate() {
            checks.sort_unstable();
            if let Some(&c) = checks.iter().find(|&&c| c >= m) {
                return Err(GraphError::CheckOutOfRange { index: c, m });
            }
            if let Some(w) = checks.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::DuplicateEdge { var: v, check: w[0] });
            }
        }

        let mut var_offsets = Vec::with_capacity(n + 1);
        let mut edge_ends = Vec::new();
        let mut chk_adj = vec![Vec::new(); m];
        let mut chk_edges = vec![Vec::new(); m];
        var_offsets.push(0);
        for (v, checks) in var_adj.iter().enumerate() {
            for &c in checks {
                let id = edge_ends.len();
                edge_ends.push((v, c));
                // variables are visited in ascending order, so chk_adj stays sorted
                chk_adj[c].push(v);
                chk_edges[c].push(id);
            }
            var_offsets.push(edge_ends.len());
        }

        Ok(TannerGraph { n, m, var_adj, chk_adj, var_offsets, chk_edges, edge_ends })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn num_edges(&self) -> usize {
        self.edge_ends.len()
    }

    /// Sorted check neighbors of variable `v`.
    pub fn var_neighbors(&self, v: usize) -> &[usize] {
        &self.var_adj[v]
    }

    /// Sorted variable neighbors of check `c`.
    pub fn check_neighbors(&self, c: usize) -> &[usize] {
        &self.chk_adj[c]
    }

    pub fn var_degree(&self, v: usize) -> usize {
        self.var_adj[v].len()
    }

    pub fn check_degree(&self, c: usize) -> usize {
        self.chk_adj[c].len()
    }

    pub fn var_edge_range(&self, v: usize) -> std::ops::Range<usize> {
        self.var_offsets[v]..self.var_offsets[v + 1]
    }

    /// Edge ids of check `c`, aligned with `check_neighbors(c)`.
    pub fn check_edge_ids(&self, c: usize) -> &[usize] {
        &self.chk_edges[c]
    }

    /// `(variable, check)` endpoints of edge `id`.
    pub fn edge(&self, id: usize) -> (usize, usize) {
        self.edge_ends[id]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edge_ends.iter().copied()
    }

    pub fn edge_id(&self, var: usize, check: usize) -> Option<usize> {
        if var >= self.n {
            return None;
        }
        self.var_adj[var]
            .binary_search(&check)
            .ok()
            .map(|pos| self.var_offsets[var] + pos)
    }

    pub fn has_edge(&self, var: usize, check: usize) -> bool {
        self.edge_id(var, check).is_some()
    }

    pub fn contains_directed(&self, e: &DirectedEdge) -> bool {
        let (v, c) = e.endpoints();
        self.has_edge(v, c)
    }

    pub fn max_var_degree(&self) -> usize {
        self.var_adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn max_check_degree(&self) -> usize {
        self.chk_adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn neighbors(&self, node: Node) -> impl Iterator<Item = Node> + '_ {
        let (list, is_var): (&[usize], bool) = match node {
            Node::Var(v) => (&self.var_adj[v], true),
            Node::Check(c) => (&self.chk_adj[c], false),
        };
        list.iter()
            .map(move |&x| if is_var { Node::Check(x) } else { Node::Var(x) })
    }

    /// Returns a copy with the edge `(var, check)` added.
    pub fn with_edge(&self, var: usize, check: usize) -> Result<Self, GraphError> {
        let mut adj = self.var_adj.clone();
        if var >= self.n {
            return Err(GraphError::VariableOutOfRange { index: var, n: self.n });
        }
        adj[var].push(check);
        Self::from_var_adjacency(self.m, adj)
    }

    pub(crate) fn into_var_adjacency(self) -> Vec<Vec<usize>> {
        self.var_adj
    }

    fn node_index(&self, node: Node) -> usize {
        match node {
            Node::Var(v) => v,
            Node::Check(c) => self.n + c,
        }
    }
}

/// True iff every variable has exactly `weight` incident checks.
pub fn validate_column_weight(g: &TannerGraph, weight: usize) -> bool {
    (0..g.n()).all(|v| g.var_degree(v) == weight)
}

/// Shortest cycle length.
///
/// For each edge `{v, c}` a BFS from `v` that is forbidden to use that edge
/// finds the shortest alternative route to `c`; the search is cut off as soon
/// as it cannot beat the best cycle found so far.
pub fn girth(g: &TannerGraph) -> Girth {
    let total = g.n() + g.m();
    let mut dist = vec![usize::MAX; total];
    let mut touched = Vec::new();
    let mut queue = VecDeque::new();
    let mut best = usize::MAX;

    for (v, c) in g.edges() {
        // a cycle through {v, c} has length dist(v, c without the edge) + 1;
        // only paths of length <= best - 3 can improve on best
        let limit = best.saturating_sub(3);
        if best != usize::MAX && limit < 3 {
            break;
        }
        for &i in &touched {
            dist[i] = usize::MAX;
        }
        touched.clear();
        queue.clear();

        let src = g.node_index(Node::Var(v));
        let dst = g.node_index(Node::Check(c));
        dist[src] = 0;
        touched.push(src);
        queue.push_back(Node::Var(v));

        'bfs: while let Some(node) = queue.pop_front() {
            let d = dist[g.node_index(node)];
            if d >= limit {
                break;
            }
            for next in g.neighbors(node) {
                if node == Node::Var(v) && next == Node::Check(c) {
                    continue;
                }
                let idx = g.node_index(next);
                if dist[idx] != usize::MAX {
                    continue;
                }
                dist[idx] = d + 1;
                touched.push(idx);
                if idx == dst {
                    best = best.min(d + 2);
                    break 'bfs;
                }
                queue.push_back(next);
            }
        }
    }

    if best == usize::MAX {
        Girth::Infinite
    } else {
        Girth::Finite(best)
    }
}

/// Where a neighborhood is rooted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NeighborhoodRoot {
    Node(Node),
    Edge(DirectedEdge),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeEntry {
    pub node: Node,
    /// Index into the previous level; `None` only at depth 0.
    pub parent: Option<usize>,
}

/// Expansion of all non-backtracking paths of length at most `depth` from a
/// root. Nodes reachable along several paths appear once per path, so for a
/// non-tree neighborhood `levels` is the computation tree rather than the
/// induced subgraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborhoodTree {
    pub root: NeighborhoodRoot,
    pub depth: usize,
    pub levels: Vec<Vec<TreeEntry>>,
    pub is_tree: bool,
}

impl NeighborhoodTree {
    /// Distinct nodes of the neighborhood.
    pub fn node_set(&self) -> std::collections::BTreeSet<Node> {
        self.levels.iter().flatten().map(|e| e.node).collect()
    }

    pub fn contains(&self, node: Node) -> bool {
        self.levels.iter().flatten().any(|e| e.node == node)
    }

    /// Distinct variable indices of the neighborhood.
    pub fn variables(&self) -> Vec<usize> {
        let mut vars: Vec<usize> = self
            .levels
            .iter()
            .flatten()
            .filter_map(|e| match e.node {
                Node::Var(v) => Some(v),
                Node::Check(_) => None,
            })
            .collect();
        vars.sort_unstable();
        vars.dedup();
        vars
    }
}

/// Directed neighborhood of depth `depth` of the edge `e`: every path
/// `e_1, ..., e_d` from the tail of `e` whose first step is not `e` itself.
///
/// # Panics
///
/// Panics if `e` is not an edge of `g`.
pub fn directed_neighborhood(g: &TannerGraph, e: DirectedEdge, depth: usize) -> NeighborhoodTree {
    assert!(g.contains_directed(&e), "{e:?} is not an edge of the graph");
    expand(g, NeighborhoodRoot::Edge(e), e.tail_node(), Some(e.head_node()), depth)
}

/// Neighborhood of depth `depth` of a single node.
pub fn node_neighborhood(g: &TannerGraph, root: Node, depth: usize) -> NeighborhoodTree {
    expand(g, NeighborhoodRoot::Node(root), root, None, depth)
}

fn expand(
    g: &TannerGraph,
    root: NeighborhoodRoot,
    start: Node,
    excluded_first: Option<Node>,
    depth: usize,
) -> NeighborhoodTree {
    let mut seen = vec![false; g.n() + g.m()];
    seen[g.node_index(start)] = true;
    let mut is_tree = true;
    let mut levels = vec![vec![TreeEntry { node: start, parent: None }]];

    for d in 0..depth {
        let prev = &levels[d];
        let mut next = Vec::new();
        for (i, entry) in prev.iter().enumerate() {
            let back = match entry.parent {
                Some(p) => Some(levels[d - 1][p].node),
                None => excluded_first,
            };
            for nb in g.neighbors(entry.node) {
                if Some(nb) == back {
                    continue;
                }
                let idx = g.node_index(nb);
                if seen[idx] {
                    is_tree = false;
                }
                seen[idx] = true;
                next.push(TreeEntry { node: nb, parent: Some(i) });
            }
        }
        levels.push(next);
    }

    NeighborhoodTree { root, depth, levels, is_tree }
}

/// Bad-variable counts of a neighborhood.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct NeighborhoodStats {
    pub bad_total: usize,
    /// Depth -> number of bad variables at exactly that depth. Only depths that
    /// hold variables are present.
    pub bad_by_depth: BTreeMap<usize, usize>,
}

impl NeighborhoodStats {
    /// Bad variables at depth at most `depth`.
    pub fn bad_up_to(&self, depth: usize) -> usize {
        self.bad_by_depth.range(..=depth).map(|(_, &b)| b).sum()
    }
}

/// Counts bad variables (pattern bit 1) per depth. Variables repeated in a
/// non-tree neighborhood count once per occurrence.
///
/// # Panics
///
/// Panics if a variable in the tree is out of range for `pattern`.
pub fn count_bad(tree: &NeighborhoodTree, pattern: &Word) -> NeighborhoodStats {
    let mut stats = NeighborhoodStats::default();
    for (d, level) in tree.levels.iter().enumerate() {
        let mut vars = level
            .iter()
            .filter_map(|e| match e.node {
                Node::Var(v) => Some(v),
                Node::Check(_) => None,
            })
            .peekable();
        if vars.peek().is_none() {
            continue;
        }
        let bad = vars.filter(|&v| pattern.get(v)).count();
        stats.bad_by_depth.insert(d, bad);
        stats.bad_total += bad;
    }
    stats
}

/// All cycles of exactly `len` edges, each reported once as its node
/// sequence starting from the smallest variable. Stops after `limit` cycles.
pub fn cycles_of_length(g: &TannerGraph, len: usize, limit: usize) -> Vec<Vec<Node>> {
    let mut out = Vec::new();
    if len < 4 || len % 2 == 1 {
        return out;
    }
    let total = g.n() + g.m();
    let mut dist = vec![usize::MAX; total];
    let mut on_path = vec![false; total];

    for start in 0..g.n() {
        if out.len() >= limit {
            break;
        }
        // BFS distances from start restricted to nodes allowed on cycles
        // whose smallest variable is `start`
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        let mut queue = VecDeque::new();
        dist[start] = 0;
        queue.push_back(Node::Var(start));
        while let Some(node) = queue.pop_front() {
            let d = dist[g.node_index(node)];
            if d >= len / 2 {
                continue;
            }
            for nb in g.neighbors(node) {
                if matches!(nb, Node::Var(w) if w < start) {
                    continue;
                }
                let idx = g.node_index(nb);
                if dist[idx] == usize::MAX {
                    dist[idx] = d + 1;
                    queue.push_back(nb);
                }
            }
        }

        let mut path = vec![Node::Var(start)];
        on_path[start] = true;
        cycle_dfs(g, len, start, &dist, &mut on_path, &mut path, &mut out, limit);
        on_path[start] = false;
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn cycle_dfs(
    g: &TannerGraph,
    len: usize,
    start: usize,
    dist: &[usize],
    on_path: &mut [bool],
    path: &mut Vec<Node>,
    out: &mut Vec<Vec<Node>>,
    limit: usize,
) {
    if out.len() >= limit {
        return;
    }
    let node = *path.last().unwrap();
    let steps = path.len() - 1;
    for nb in g.neighbors(node) {
        if nb == Node::Var(start) {
            // close the cycle; keep one of the two orientations
            if steps + 1 == len && path[1] < path[steps] {
                out.push(path.clone());
                if out.len() >= limit {
                    return;
                }
            }
            continue;
        }
        if matches!(nb, Node::Var(w) if w < start) {
            continue;
        }
        let idx = g.node_index(nb);
        if on_path[idx] || dist[idx] == usize::MAX {
            continue;
        }
        // remaining edges after stepping to nb must be able to return
        if dist[idx] > len - (steps + 1) {
            continue;
        }
        on_path[idx] = true;
        path.push(nb);
        cycle_dfs(g, len, start, dist, on_path, path, out, limit);
        path.pop();
        on_path[idx] = false;
    }
}

/// Largest girth a graph with `n` variables of degree `dv`, `m` checks, and
/// minimum check degree `dc_min` can have: both node-rooted trees of depth
/// `g/2 - 1` must fit. Returns `None` when `dc_min < 2` or `dv < 2`, where no
/// finite bound follows from tree counting.
pub fn moore_girth_bound(n: usize, m: usize, dv: usize, dc_min: usize) -> Option<usize> {
    if dv < 2 || dc_min < 2 {
        return None;
    }
    // tree_fits(depth): both trees of that depth have distinct nodes that fit
    let fits = |depth: usize| -> bool {
        for root_is_var in [true, false] {
            let (mut vars, mut checks) = if root_is_var { (1u128, 0u128) } else { (0, 1) };
            let mut frontier: u128 = 1;
            let mut frontier_is_var = root_is_var;
            for d in 0..depth {
                let branch = match (frontier_is_var, d == 0) {
                    (true, true) => dv,
                    (true, false) => dv - 1,
                    (false, true) => dc_min,
                    (false, false) => dc_min - 1,
                } as u128;
                frontier = frontier.saturating_mul(branch);
                frontier_is_var = !frontier_is_var;
                if frontier_is_var {
                    vars = vars.saturating_add(frontier);
                } else {
                    checks = checks.saturating_add(frontier);
                }
                if vars > n as u128 || checks > m as u128 {
                    return false;
                }
            }
        }
        true
    };
    let mut g = 4;
    // girth g requires trees of depth g/2 - 1
    while fits(g / 2) {
        g += 2;
    }
    Some(g)
}

impl PartialOrd for DirectedEdge {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DirectedEdge {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.endpoints(), self.kind == EdgeKind::CheckToVar)
            .cmp(&(other.endpoints(), other.kind == EdgeKind::CheckToVar))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn ring() -> TannerGraph {
        // v0:{c0,c1} v1:{c1,c2} v2:{c2,c0}
        TannerGraph::from_edges(3, 3, [(0, 0), (0, 1), (1, 1), (1, 2), (2, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn ring_has_six_edges_and_girth_six() {
        let g = ring();
        assert_eq!(g.num_edges(), 6);
        assert_eq!(girth(&g), Girth::Finite(6));
        assert!(validate_column_weight(&g, 2));
        assert!(!validate_column_weight(&g, 3));
    }

    #[test]
    fn edge_ids_follow_sorted_pairs() {
        let g = ring();
        let ends: Vec<_> = g.edges().collect();
        let mut sorted = ends.clone();
        sorted.sort();
        assert_eq!(ends, sorted);
        for (id, (v, c)) in g.edges().enumerate() {
            assert_eq!(g.edge_id(v, c), Some(id));
        }
        for c in 0..g.m() {
            for (&v, &id) in g.check_neighbors(c).iter().zip(g.check_edge_ids(c)) {
                assert_eq!(g.edge(id), (v, c));
            }
        }
    }

    #[test]
    fn rejects_duplicates_and_bad_indices() {
        assert_eq!(
            TannerGraph::from_edges(2, 2, [(0, 1), (0, 1)]),
            Err(GraphError::DuplicateEdge { var: 0, check: 1 })
        );
        assert_eq!(
            TannerGraph::from_edges(2, 2, [(0, 2)]),
            Err(GraphError::CheckOutOfRange { index: 2, m: 2 })
        );
        assert_eq!(
            TannerGraph::from_edges(2, 2, [(5, 0)]),
            Err(GraphError::VariableOutOfRange { index: 5, n: 2 })
        );
    }

    #[test]
    fn forest_has_infinite_girth() {
        let g = TannerGraph::from_edges(3, 2, [(0, 0), (1, 0), (1, 1), (2, 1)]).unwrap();
        assert_eq!(girth(&g), Girth::Infinite);
        let empty = TannerGraph::from_edges(1, 1, []).unwrap();
        assert_eq!(girth(&empty), Girth::Infinite);
    }

    #[test]
    fn four_cycle() {
        let g = TannerGraph::from_edges(2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
        assert_eq!(girth(&g), Girth::Finite(4));
    }

    #[test]
    fn girth_display_and_order() {
        assert_eq!(Girth::Infinite.to_string(), "inf");
        assert_eq!(Girth::Finite(10).to_string(), "10");
        assert!(Girth::Finite(100) < Girth::Infinite);
        assert!(Girth::Infinite.is_at_least(10));
        assert_eq!(serde_json::to_string(&Girth::Infinite).unwrap(), "\"inf\"");
        assert_eq!(serde_json::from_str::<Girth>("12").unwrap(), Girth::Finite(12));
    }

    #[test]
    fn depth_zero_neighborhood_is_the_tail() {
        let g = ring();
        let t = directed_neighborhood(&g, DirectedEdge::var_to_check(0, 0), 0);
        assert_eq!(t.levels.len(), 1);
        assert_eq!(t.levels[0][0].node, Node::Var(0));
        assert!(t.is_tree);
    }

    #[test]
    fn ring_neighborhood_wraps_at_depth_six() {
        // from v0 avoiding c0 the only path is v0 c1 v1 c2 v2 c0 v0
        let g = ring();
        let e = DirectedEdge::var_to_check(0, 0);
        let t5 = directed_neighborhood(&g, e, 5);
        assert!(t5.is_tree);
        assert_eq!(t5.levels[5][0].node, Node::Check(0));
        let t6 = directed_neighborhood(&g, e, 6);
        assert!(!t6.is_tree);
        assert_eq!(t6.levels[6], vec![TreeEntry { node: Node::Var(0), parent: Some(0) }]);
    }

    #[test]
    fn count_bad_multiset_semantics() {
        let g = ring();
        let e = DirectedEdge::var_to_check(0, 0);
        let t = directed_neighborhood(&g, e, 6);
        let pattern = Word::from_support(3, &[0]);
        let stats = count_bad(&t, &pattern);
        // v0 at depth 0 and again at depth 6
        assert_eq!(stats.bad_total, 2);
        assert_eq!(stats.bad_by_depth[&0], 1);
        assert_eq!(stats.bad_by_depth[&6], 1);
        assert_eq!(stats.bad_by_depth[&2], 0);

        let zero = count_bad(&t, &Word::zeros(3));
        assert_eq!(zero.bad_total, 0);
    }

    #[test]
    fn cycles_in_ring() {
        let g = ring();
        let cycles = cycles_of_length(&g, 6, usize::MAX);
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].len(), 6);
        assert!(cycles_of_length(&g, 4, usize::MAX).is_empty());
    }

    #[test]
    fn moore_bound_examples() {
        // the (3,3) generalized hexagon meets the girth 12 bound at 63 + 63
        assert_eq!(moore_girth_bound(63, 63, 3, 3), Some(12));
        assert_eq!(moore_girth_bound(62, 62, 3, 3), Some(10));
        // (3,6)-regular codes need n >= 166 for girth 10
        assert_eq!(moore_girth_bound(96, 48, 3, 6), Some(8));
        assert_eq!(moore_girth_bound(10, 10, 3, 1), None);
    }
}
