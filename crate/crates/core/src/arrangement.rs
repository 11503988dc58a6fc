//! Gate orderings for one round of two-qubit generators.
//!
//! A round is a list of oriented pairs `(z, y)`, meaning a `Z` on `z` and a
//! `Y` on `y`. The tree layout repeatedly peels a breadth-first spanning tree
//! off the remaining edges, re-roots it at a minimum-height root and emits
//! its edges parent-first. The stagger layout emits the classes of a greedy
//! edge coloring one after another.

use std::collections::{BTreeMap, VecDeque};

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{components_within, Graph};
use crate::seed::{rng, Rng};

/// Rooted spanning tree with edges oriented away from the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientedTree {
    pub root: usize,
    /// child -> parent; the root has no entry.
    pub parent: BTreeMap<usize, usize>,
    /// `(parent, child)` pairs in breadth-first emission order.
    pub edge_order: Vec<(usize, usize)>,
    pub height: usize,
}

impl OrientedTree {
    /// Root followed by the children in emission order.
    pub fn nodes(&self) -> Vec<usize> {
        std::iter::once(self.root)
            .chain(self.edge_order.iter().map(|&(_, c)| c))
            .collect()
    }

    pub fn n_nodes(&self) -> usize {
        self.edge_order.len() + 1
    }
}

/// Gate list of one round and the tree (or color class) each gate came from.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ArrangedRound {
    pub gates: Vec<(usize, usize)>,
    pub tree_ids: Vec<usize>,
}

impl ArrangedRound {
    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn n_trees(&self) -> usize {
        self.tree_ids.last().map_or(0, |&t| t + 1)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("arrangement serialization is infallible")
    }
}

/// How the initial BFS root of each component is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RootPick {
    /// Smallest node label.
    #[default]
    Lowest,
    /// Uniform over the component's nodes, from a seeded generator.
    Seeded(u64),
}

/// BFS over `adj` from `root`; neighbors are visited in the order they are
/// listed, so sorted adjacency gives ascending children.
fn bfs(adj: &[Vec<usize>], root: usize) -> (OrientedTree, Vec<bool>) {
    let mut seen = vec![false; adj.len()];
    let mut depth = vec![0usize; adj.len()];
    let mut parent = BTreeMap::new();
    let mut edge_order = Vec::new();
    let mut height = 0;
    let mut queue = VecDeque::from([root]);
    seen[root] = true;
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                depth[y] = depth[x] + 1;
                height = height.max(depth[y]);
                parent.insert(y, x);
                edge_order.push((x, y));
                queue.push_back(y);
            }
        }
    }
    (OrientedTree { root, parent, edge_order, height }, seen)
}

/// Breadth-first spanning tree of a connected graph.
pub fn bfs_spanning_tree(graph: &Graph, root: usize) -> Result<OrientedTree> {
    if root >= graph.n() {
        return Err(Error::Parameter(format!("root {root} outside 0..{}", graph.n())));
    }
    let (tree, seen) = bfs(graph.adjacency(), root);
    match seen.iter().position(|&s| !s) {
        Some(node) => Err(Error::Disconnected { root, node }),
        None => Ok(tree),
    }
}

/// Adjacency of the undirected tree spanned by `edges` over `n` slots.
fn tree_adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    adj
}

/// Smallest-label center of the tree on `nodes`, by repeated leaf removal.
fn tree_center(adj: &[Vec<usize>], nodes: &[usize]) -> usize {
    if nodes.len() <= 2 {
        return *nodes.iter().min().expect("tree has a node");
    }
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut layer: Vec<usize> = nodes.iter().copied().filter(|&v| degree[v] == 1).collect();
    let mut left = nodes.len();
    while left > 2 {
        left -= layer.len();
        let mut next = Vec::new();
        for &leaf in &layer {
            degree[leaf] = 0;
            for &y in &adj[leaf] {
                if degree[y] > 0 {
                    degree[y] -= 1;
                    if degree[y] == 1 {
                        next.push(y);
                    }
                }
            }
        }
        layer = next;
    }
    *layer.iter().min().expect("one or two centers remain")
}

fn check_tree(graph: &Graph) -> Result<()> {
    if graph.n_edges() + 1 != graph.n() {
        return Err(Error::NotATree(format!(
            "{} edges on {} nodes",
            graph.n_edges(),
            graph.n()
        )));
    }
    if !graph.is_connected() {
        return Err(Error::NotATree("graph is disconnected".into()));
    }
    Ok(())
}

/// Root of minimum height and that height, smallest label on ties.
pub fn min_height_root(tree: &Graph) -> Result<(usize, usize)> {
    check_tree(tree)?;
    let nodes: Vec<usize> = (0..tree.n()).collect();
    let root = tree_center(tree.adjacency(), &nodes);
    let (oriented, _) = bfs(tree.adjacency(), root);
    Ok((root, oriented.height))
}

/// Same contract as [`min_height_root`] by trying every root, O(N²).
pub fn min_height_root_exhaustive(tree: &Graph) -> Result<(usize, usize)> {
    check_tree(tree)?;
    let best = (0..tree.n())
        .map(|r| (bfs(tree.adjacency(), r).0.height, r))
        .min()
        .expect("tree has a node");
    Ok((best.1, best.0))
}

/// The tree's edges as gates: Z on the parent, Y on the child.
pub fn tree_arrangement(tree: &OrientedTree) -> ArrangedRound {
    ArrangedRound {
        gates: tree.edge_order.clone(),
        tree_ids: vec![0; tree.edge_order.len()],
    }
}

/// Tree layout of one round with the lowest-label initial root.
pub fn arrange_round(graph: &Graph) -> Result<ArrangedRound> {
    arrange_round_with(graph, RootPick::Lowest)
}

pub fn arrange_round_with(graph: &Graph, pick: RootPick) -> Result<ArrangedRound> {
    bfs_spanning_tree(graph, 0)?;
    let mut state = Peeler {
        adj: graph.adjacency().to_vec(),
        rng: match pick {
            RootPick::Lowest => None,
            RootPick::Seeded(seed) => Some(rng(seed)),
        },
        out: ArrangedRound::default(),
        trees: 0,
    };
    if graph.n_edges() > 0 {
        let nodes: Vec<usize> = (0..graph.n()).collect();
        state.peel(&nodes);
    }
    Ok(state.out)
}

struct Peeler {
    adj: Vec<Vec<usize>>,
    rng: Option<Rng>,
    out: ArrangedRound,
    trees: usize,
}

impl Peeler {
    /// Emits a spanning tree of the connected component `nodes`, removes its
    /// edges and recurses on what is left.
    fn peel(&mut self, nodes: &[usize]) {
        let start = match &mut self.rng {
            None => nodes[0],
            Some(r) => nodes[r.random_range(0..nodes.len())],
        };
        let (spanning, _) = bfs(&self.adj, start);
        let tree_adj = tree_adjacency(self.adj.len(), &spanning.edge_order);
        let root = tree_center(&tree_adj, nodes);
        let (tree, _) = bfs(&tree_adj, root);

        let id = self.trees;
        self.trees += 1;
        for &(p, c) in &tree.edge_order {
            self.out.gates.push((p, c));
            self.out.tree_ids.push(id);
            self.adj[p].retain(|&x| x != c);
            self.adj[c].retain(|&x| x != p);
        }

        let remaining: Vec<usize> = nodes.iter().copied().filter(|&v| !self.adj[v].is_empty()).collect();
        for component in components_within(&self.adj, &remaining) {
            self.peel(&component);
        }
    }
}

/// Greedy proper edge coloring: canonical edge order, smallest free color.
/// Returns the color classes, each a matching in canonical order.
pub fn greedy_edge_coloring(graph: &Graph) -> Vec<Vec<(usize, usize)>> {
    let mut used: Vec<Vec<usize>> = vec![Vec::new(); graph.n()];
    let mut classes: Vec<Vec<(usize, usize)>> = Vec::new();
    for e in graph.edges() {
        let color = (0..)
            .find(|c| !used[e.u].contains(c) && !used[e.v].contains(c))
            .expect("some color is free");
        used[e.u].push(color);
        used[e.v].push(color);
        if color == classes.len() {
            classes.push(Vec::new());
        }
        classes[color].push((e.u, e.v));
    }
    classes
}

/// Stagger layout: color classes in order, Z on the lower label. `tree_ids`
/// holds the color class of each gate.
pub fn stagger_arrangement(graph: &Graph) -> ArrangedRound {
    let mut out = ArrangedRound::default();
    for (color, class) in greedy_edge_coloring(graph).into_iter().enumerate() {
        for pair in class {
            out.gates.push(pair);
            out.tree_ids.push(color);
        }
    }
    out
}
