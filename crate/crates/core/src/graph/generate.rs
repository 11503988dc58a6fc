use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;

use super::Graph;
use crate::error::{Error, Result};
use crate::seed::rng;

/// Maximum number of pairings tried by [`random_regular`].
pub const REGULAR_RETRY_CAP: usize = 10_000;

/// Random simple connected `d`-regular graph from the pairing model.
///
/// Each attempt shuffles the `n*d` half-edges and pairs them; pairs that
/// would form a self-loop or a repeated edge go back into the pool and are
/// re-paired until the pool empties or no valid pair is left. Attempts that
/// get stuck or produce a disconnected graph are discarded.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    if n == 0 || d >= n || (n * d) % 2 == 1 {
        return Err(Error::Parameter(format!(
            "no simple {d}-regular graph on {n} nodes (need d < n and n*d even)"
        )));
    }
    if (d == 0 && n > 1) || (d == 1 && n > 2) {
        return Err(Error::Parameter(format!(
            "a {d}-regular graph on {n} nodes cannot be connected"
        )));
    }
    let mut rng = rng(seed);
    for _ in 0..REGULAR_RETRY_CAP {
        let Some(edges) = try_pairing(n, d, &mut rng) else {
            continue;
        };
        let g = Graph::new(n, edges.into_iter().map(|(a, b)| (a, b, 1)))?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::Generation(format!(
        "no simple connected {d}-regular graph on {n} nodes after {REGULAR_RETRY_CAP} attempts"
    )))
}

fn try_pairing(n: usize, d: usize, rng: &mut crate::seed::Rng) -> Option<BTreeSet<(usize, usize)>> {
    let mut edges = BTreeSet::new();
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    while !stubs.is_empty() {
        stubs.shuffle(rng);
        let mut leftover = Vec::new();
        for pair in stubs.chunks_exact(2) {
            let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if a == b || !edges.insert((a, b)) {
                leftover.extend_from_slice(&[a, b]);
            }
        }
        let pending: BTreeSet<usize> = leftover.iter().copied().collect();
        let progress_possible = leftover.is_empty()
            || pending
                .iter()
                .any(|&a| pending.range(a + 1..).any(|&b| !edges.contains(&(a, b))));
        if !progress_possible {
            return None;
        }
        leftover.sort_unstable();
        stubs = leftover;
    }
    Some(edges)
}

/// Uniformly random labeled tree decoded from a random Prüfer sequence.
pub fn random_tree(n: usize, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::Parameter("tree needs at least one node".into()));
    }
    if n <= 2 {
        let edges = if n == 2 { vec![(0, 1, 1)] } else { Vec::new() };
        return Graph::new(n, edges);
    }
    let mut rng = rng(seed);
    let code: Vec<usize> = (0..n - 2).map(|_| rng.random_range(0..n)).collect();
    let mut remaining = vec![1usize; n];
    for &c in &code {
        remaining[c] += 1;
    }
    let mut leaves: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&v| remaining[v] == 1).map(Reverse).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &c in &code {
        let Reverse(leaf) = leaves.pop().expect("Prüfer decoding always has a leaf");
        edges.push((leaf, c, 1));
        remaining[c] -= 1;
        if remaining[c] == 1 {
            leaves.push(Reverse(c));
        }
    }
    let Reverse(a) = leaves.pop().expect("two leaves remain");
    let Reverse(b) = leaves.pop().expect("two leaves remain");
    edges.push((a, b, 1));
    Graph::new(n, edges)
}

/// G(n, q): every unordered pair independently with probability `q`.
pub fn erdos_renyi(n: usize, q: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::Parameter(format!("edge probability {q} outside [0, 1]")));
    }
    let mut rng = rng(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < q {
                edges.push((u, v, 1));
            }
        }
    }
    Graph::new(n, edges)
}

/// Resamples [`erdos_renyi`] with consecutive sub-seeds until connected.
pub fn erdos_renyi_connected(n: usize, q: f64, seed: u64, max_tries: usize) -> Result<Graph> {
    for attempt in 0..max_tries as u64 {
        let g = erdos_renyi(n, q, crate::seed::derive_seed(seed, attempt))?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::Generation(format!(
        "no connected G({n}, {q}) sample in {max_tries} tries"
    )))
}

/// Independent fair ±1 sign on every edge, topology unchanged.
pub fn assign_random_signs(graph: &Graph, seed: u64) -> Graph {
    let mut rng = rng(seed);
    let weights: Vec<i8> = graph
        .edges()
        .iter()
        .map(|_| if rng.random::<bool>() { 1 } else { -1 })
        .collect();
    graph
        .with_weights(&weights)
        .expect("weight count matches edge count")
}

/// Connected random bipartite graph: nodes split into two random nonempty
/// sides, each cross pair kept with probability `q`, resampled until
/// connected.
pub fn random_bipartite(n: usize, q: f64, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Err(Error::Parameter("bipartite graph needs two nodes".into()));
    }
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::Parameter(format!("edge probability {q} outside (0, 1]")));
    }
    let mut rng = rng(seed);
    for _ in 0..REGULAR_RETRY_CAP {
        let mut side: Vec<bool> = (0..n).map(|_| rng.random()).collect();
        side[0] = false;
        if side.iter().all(|&s| !s) {
            side[n - 1] = true;
        }
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if side[u] != side[v] && rng.random::<f64>() < q {
                    edges.push((u, v, 1));
                }
            }
        }
        let g = Graph::new(n, edges)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::Generation(format!(
        "no connected bipartite sample on {n} nodes"
    )))
}

/// Connected `n`-node patch of a heavy-hex lattice.
///
/// The lattice has rows of qubits joined in lines; consecutive rows are
/// bridged through one extra degree-2 node every four columns, with the
/// bridge columns alternating between offsets 0 and 2. The patch is the
/// first `n` nodes reached by breadth-first search from a seeded start node,
/// relabeled in discovery order. All degrees are at most 3.
pub fn heavy_hex_patch(n: usize, seed: u64) -> Result<Graph> {
    const ROWS: usize = 7;
    const WIDTH: usize = 15;
    let row_id = |r: usize, c: usize| r * WIDTH + c;
    let mut next = ROWS * WIDTH;
    let mut lattice: Vec<(usize, usize)> = Vec::new();
    for r in 0..ROWS {
        for c in 0..WIDTH - 1 {
            lattice.push((row_id(r, c), row_id(r, c + 1)));
        }
    }
    for r in 0..ROWS - 1 {
        let offset = if r % 2 == 0 { 0 } else { 2 };
        for c in (offset..WIDTH).step_by(4) {
            lattice.push((row_id(r, c), next));
            lattice.push((next, row_id(r + 1, c)));
            next += 1;
        }
    }
    let total = next;
    if n == 0 || n > total {
        return Err(Error::Parameter(format!(
            "heavy-hex patch size {n} outside 1..={total}"
        )));
    }
    let mut adj = vec![BTreeSet::new(); total];
    for &(a, b) in &lattice {
        adj[a].insert(b);
        adj[b].insert(a);
    }
    let mut rng = rng(seed);
    let start = rng.random_range(0..total);
    let mut label = vec![usize::MAX; total];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::from([start]);
    label[start] = 0;
    order.push(start);
    while let Some(x) = queue.pop_front() {
        if order.len() == n {
            break;
        }
        for &y in &adj[x] {
            if label[y] == usize::MAX && order.len() < n {
                label[y] = order.len();
                order.push(y);
                queue.push_back(y);
            }
        }
    }
    let edges = lattice.iter().filter_map(|&(a, b)| {
        (label[a] != usize::MAX && label[b] != usize::MAX).then(|| (label[a], label[b], 1))
    });
    Graph::new(n, edges)
}

pub fn path(n: usize) -> Result<Graph> {
    Graph::new(n, (1..n).map(|v| (v - 1, v, 1)))
}

pub fn ring(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::Parameter(format!("ring needs at least 3 nodes, got {n}")));
    }
    Graph::new(n, (0..n).map(|v| (v, (v + 1) % n, 1)))
}

/// Star with center 0 and leaves `1..n`.
pub fn star(n: usize) -> Result<Graph> {
    Graph::new(n, (1..n).map(|v| (0, v, 1)))
}

pub fn complete(n: usize) -> Result<Graph> {
    Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v, 1))))
}
