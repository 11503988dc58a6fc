//! Undirected simple graphs with ±1 edge weights.
//!
//! Nodes are dense labels `0..n`. Edges are stored once, in canonical
//! orientation `u < v` and sorted lexicographically; the orientation a gate
//! uses on an edge is decided by the arrangement code, not here.

mod generate;
mod io;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use generate::{
    assign_random_signs, complete, erdos_renyi, erdos_renyi_connected, heavy_hex_patch, path,
    random_bipartite, random_regular, random_tree, ring, star, REGULAR_RETRY_CAP,
};
pub use io::{load_edge_list, parse_edge_list, save_edge_list, write_edge_list};

/// One stored edge, `u < v`, weight `w` in {-1, +1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: i8,
}

impl Edge {
    pub fn endpoints(&self) -> (usize, usize) {
        (self.u, self.v)
    }

    pub fn touches(&self, node: usize) -> bool {
        self.u == node || self.v == node
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
}

/// JSON mirror of a graph: `{"n": int, "edges": [[u, v, w], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<(usize, usize, i8)>,
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;

    fn try_from(value: GraphJson) -> Result<Self> {
        Graph::new(value.n, value.edges)
    }
}

impl From<Graph> for GraphJson {
    fn from(g: Graph) -> Self {
        GraphJson {
            n: g.n,
            edges: g.edges.iter().map(|e| (e.u, e.v, e.w)).collect(),
        }
    }
}

impl Graph {
    /// Builds a graph from `(u, v, w)` triples in any orientation.
    ///
    /// Rejects out-of-range nodes, self-loops, duplicate pairs and weights
    /// other than ±1.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, i8)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("graph needs at least one node".into()));
        }
        let mut stored = Vec::new();
        for (a, b, w) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a}, {b}) references a node outside 0..{n}"
                )));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop on node {a}")));
            }
            if w != 1 && w != -1 {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a}, {b}) has weight {w}, expected +1 or -1"
                )));
            }
            stored.push(Edge { u: a.min(b), v: a.max(b), w });
        }
        stored.sort();
        if let Some(pair) = stored.windows(2).find(|p| (p[0].u, p[0].v) == (p[1].u, p[1].v)) {
            return Err(Error::InvalidGraph(format!(
                "duplicate edge ({}, {})",
                pair[0].u, pair[0].v
            )));
        }
        let mut adj = vec![Vec::new(); n];
        for e in &stored {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { n, edges: stored, adj })
    }

    /// Unit-weight graph from node pairs.
    pub fn unweighted(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Graph::new(n, pairs.iter().map(|&(u, v)| (u, v, 1)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// Neighbors of `node` in ascending order.
    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adj[node]
    }

    pub(crate) fn adjacency(&self) -> &[Vec<usize>] {
        &self.adj
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adj[node].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `Some(d)` if every node has degree `d`.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.degree(0);
        self.adj.iter().all(|a| a.len() == d).then_some(d)
    }

    /// Index of edge `{a, b}` in [`Graph::edges`].
    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        let key = (a.min(b), a.max(b));
        self.edges.binary_search_by(|e| (e.u, e.v).cmp(&key)).ok()
    }

    pub fn weight(&self, a: usize, b: usize) -> Option<i8> {
        self.edge_index(a, b).map(|i| self.edges[i].w)
    }

    pub fn has_negative_weights(&self) -> bool {
        self.edges.iter().any(|e| e.w < 0)
    }

    /// Same topology with the given weights, one per stored edge.
    pub fn with_weights(&self, weights: &[i8]) -> Result<Self> {
        if weights.len() != self.edges.len() {
            return Err(Error::Parameter(format!(
                "{} weights for {} edges",
                weights.len(),
                self.edges.len()
            )));
        }
        Graph::new(
            self.n,
            self.edges.iter().zip(weights).map(|(e, &w)| (e.u, e.v, w)),
        )
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = queue.pop_front() {
            for &y in &self.adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    queue.push_back(y);
                }
            }
        }
        count == self.n
    }

    /// Stable 64-bit fingerprint of `(n, edges)` (FNV-1a).
    pub fn fingerprint(&self) -> u64 {
        const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
        const PRIME: u64 = 0x0000_0100_0000_01b3;
        let mut h = OFFSET;
        let mut feed = |x: u64| {
            for b in x.to_le_bytes() {
                h ^= u64::from(b);
                h = h.wrapping_mul(PRIME);
            }
        };
        feed(self.n as u64);
        for e in &self.edges {
            feed(e.u as u64);
            feed(e.v as u64);
            feed(e.w as u64);
        }
        h
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Maximal connected node sets, each sorted, ordered by smallest member.
pub fn connected_components(graph: &Graph) -> Vec<Vec<usize>> {
    let nodes: Vec<usize> = (0..graph.n()).collect();
    components_within(graph.adjacency(), &nodes)
}

/// Components of the subgraph induced on `nodes` by `adj`. Every neighbor
/// listed in `adj` for a node of `nodes` must itself be in `nodes`.
pub(crate) fn components_within(adj: &[Vec<usize>], nodes: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; adj.len()];
    let mut sorted = nodes.to_vec();
    sorted.sort_unstable();
    let mut out = Vec::new();
    for &start in &sorted {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    comp.push(y);
                    queue.push_back(y);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::UnionFind;

    #[test]
    fn rejects_bad_edges() {
        assert!(Graph::new(0, []).is_err());
        assert!(Graph::new(3, [(0, 3, 1)]).is_err());
        assert!(Graph::new(3, [(1, 1, 1)]).is_err());
        assert!(Graph::new(3, [(0, 1, 2)]).is_err());
        assert!(Graph::new(3, [(0, 1, 1), (1, 0, -1)]).is_err());
    }

    #[test]
    fn canonicalizes_orientation_and_order() {
        let g = Graph::new(4, [(3, 2, 1), (1, 0, -1), (2, 0, 1)]).unwrap();
        let pairs: Vec<_> = g.edges().iter().map(|e| (e.u, e.v, e.w)).collect();
        assert_eq!(pairs, vec![(0, 1, -1), (0, 2, 1), (2, 3, 1)]);
        assert_eq!(g.neighbors(0), &[1, 2]);
        assert_eq!(g.weight(1, 0), Some(-1));
        assert_eq!(g.edge_index(3, 2), Some(2));
        assert_eq!(g.edge_index(1, 3), None);
    }

    #[test]
    fn path_is_one_component() {
        let g = Graph::unweighted(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(connected_components(&g), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn isolated_node_is_its_own_component() {
        let g = Graph::unweighted(3, &[(0, 1)]).unwrap();
        assert_eq!(connected_components(&g), vec![vec![0, 1], vec![2]]);
        assert!(!g.is_connected());
    }

    #[test]
    fn component_count_matches_union_find() {
        for seed in 0..50 {
            let g = erdos_renyi(20, 0.08, seed).unwrap();
            let mut uf = UnionFind::new(g.n());
            let mut merges = 0;
            for e in g.edges() {
                if uf.union(e.u, e.v) {
                    merges += 1;
                }
            }
            let comps = connected_components(&g);
            assert_eq!(comps.len(), g.n() - merges, "seed {seed}");
            let mut all: Vec<usize> = comps.concat();
            all.sort_unstable();
            assert_eq!(all, (0..g.n()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn json_mirror_round_trips() {
        let g = Graph::new(3, [(0, 1, 1), (1, 2, -1)]).unwrap();
        let text = g.to_json();
        assert_eq!(text, r#"{"n":3,"edges":[[0,1,1],[1,2,-1]]}"#);
        assert_eq!(Graph::from_json(&text).unwrap(), g);
        assert!(Graph::from_json(r#"{"n":2,"edges":[[0,0,1]]}"#).is_err());
    }

    #[test]
    fn fingerprint_depends_on_weights() {
        let a = Graph::new(2, [(0, 1, 1)]).unwrap();
        let b = Graph::new(2, [(0, 1, -1)]).unwrap();
        assert_ne!(a.fingerprint(), b.fingerprint());
        assert_eq!(a.fingerprint(), a.clone().fingerprint());
    }
}
