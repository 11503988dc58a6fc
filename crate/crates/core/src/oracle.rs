//! Classical MaxCut solvers.
//!
//! An edge with weight `w` is satisfied when `½(1 - w s_i s_j) = 1`, i.e. a
//! `+1` edge whose endpoints differ or a `-1` edge whose endpoints agree. The
//! cut of an assignment is its number of satisfied edges; for unit weights
//! this is the usual cut size.

use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::seed::rng;

/// Largest graph [`brute_force_maxcut`] accepts.
pub const BRUTE_FORCE_MAX_NODES: usize = 30;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutSolution {
    /// Bit per node.
    pub assignment: Vec<u8>,
    pub cut: i64,
    /// True when the value is the proven optimum.
    pub exact: bool,
}

impl CutSolution {
    fn from_bits(graph: &Graph, assignment: Vec<u8>, exact: bool) -> Self {
        let cut = cut_of_assignment(graph, &assignment);
        CutSolution { assignment, cut, exact }
    }

    /// Assignment as an integer, bit `i` for node `i` (graphs up to 64 nodes).
    pub fn bits(&self) -> u64 {
        self.assignment
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &b)| acc | (u64::from(b) << i))
    }
}

fn satisfied(w: i8, differ: bool) -> bool {
    differ == (w > 0)
}

/// Cut of the assignment encoded in `x` (bit `i` is node `i`).
pub fn cut_value(graph: &Graph, x: u64) -> i64 {
    graph
        .edges()
        .iter()
        .filter(|e| satisfied(e.w, ((x >> e.u) ^ (x >> e.v)) & 1 == 1))
        .count() as i64
}

pub fn cut_of_assignment(graph: &Graph, bits: &[u8]) -> i64 {
    graph
        .edges()
        .iter()
        .filter(|e| satisfied(e.w, bits[e.u] != bits[e.v]))
        .count() as i64
}

fn bits_of(x: u64, n: usize) -> Vec<u8> {
    (0..n).map(|i| ((x >> i) & 1) as u8).collect()
}

/// Change in cut from flipping `v` under assignment `bits`.
fn flip_gain(graph: &Graph, bits: &[u8], v: usize) -> i64 {
    graph
        .neighbors(v)
        .iter()
        .map(|&u| {
            let w = graph.weight(u, v).expect("neighbor shares an edge");
            if satisfied(w, bits[u] != bits[v]) {
                -1
            } else {
                1
            }
        })
        .sum()
}

/// Exact maximum cut by Gray-code enumeration with the last node pinned to 0.
/// Among optimal assignments the numerically smallest is returned.
pub fn brute_force_maxcut(graph: &Graph) -> Result<CutSolution> {
    let n = graph.n();
    if n > BRUTE_FORCE_MAX_NODES {
        return Err(Error::Resource(format!(
            "brute force is limited to {BRUTE_FORCE_MAX_NODES} nodes, graph has {n}"
        )));
    }
    let mut bits = vec![0u8; n];
    let mut x = 0u64;
    let mut cut = cut_value(graph, 0);
    let (mut best, mut best_x) = (cut, 0u64);
    for step in 1u64..1 << (n - 1) {
        let v = step.trailing_zeros() as usize;
        cut += flip_gain(graph, &bits, v);
        bits[v] ^= 1;
        x ^= 1 << v;
        if cut > best || (cut == best && x < best_x) {
            best = cut;
            best_x = x;
        }
    }
    Ok(CutSolution { assignment: bits_of(best_x, n), cut: best, exact: true })
}

/// Minimum of `Σ w_ij s_i s_j`, equal to `|E| - 2 C_max`.
pub fn ground_state_energy(graph: &Graph) -> Result<f64> {
    let c_max = brute_force_maxcut(graph)?.cut;
    Ok((graph.n_edges() as i64 - 2 * c_max) as f64)
}

/// Low-rank relaxation `max Σ ½(1 - w_ij v_i·v_j)` over unit vectors.
#[derive(Debug, Clone)]
pub struct Relaxation {
    pub vectors: Vec<Vec<f64>>,
    /// Relaxed objective after initialization and after every sweep.
    pub history: Vec<f64>,
}

impl Relaxation {
    pub fn objective(&self) -> f64 {
        *self.history.last().expect("history starts with the initial value")
    }
}

fn relaxed_objective(graph: &Graph, v: &[Vec<f64>]) -> f64 {
    graph
        .edges()
        .iter()
        .map(|e| {
            let dot: f64 = v[e.u].iter().zip(&v[e.v]).map(|(a, b)| a * b).sum();
            0.5 * (1.0 - f64::from(e.w) * dot)
        })
        .sum()
}

fn normalize(v: &mut [f64]) -> bool {
    let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    if norm < 1e-12 {
        return false;
    }
    v.iter_mut().for_each(|a| *a /= norm);
    true
}

/// Rank `ceil(√(2n)) + 1` Burer–Monteiro factorization solved by block
/// coordinate ascent: each sweep sets `v_i ∝ -Σ_j w_ij v_j` node by node,
/// the exact maximizer over `v_i` with the others fixed.
pub fn gw_relaxation(graph: &Graph, seed: u64) -> Relaxation {
    const MAX_SWEEPS: usize = 10_000;
    const REL_TOL: f64 = 1e-7;
    let n = graph.n();
    let k = (2.0 * n as f64).sqrt().ceil() as usize + 1;
    let mut r = rng(seed);
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|_| loop {
            let mut x: Vec<f64> = (0..k).map(|_| r.sample(StandardNormal)).collect();
            if normalize(&mut x) {
                break x;
            }
        })
        .collect();
    let mut history = vec![relaxed_objective(graph, &v)];
    let mut field = vec![0.0; k];
    for _ in 0..MAX_SWEEPS {
        for i in 0..n {
            field.iter_mut().for_each(|f| *f = 0.0);
            for &j in graph.neighbors(i) {
                let w = f64::from(graph.weight(i, j).expect("neighbor shares an edge"));
                for (f, a) in field.iter_mut().zip(&v[j]) {
                    *f -= w * a;
                }
            }
            if normalize(&mut field) {
                v[i].copy_from_slice(&field);
            }
        }
        let value = relaxed_objective(graph, &v);
        let prev = *history.last().expect("nonempty");
        history.push(value);
        if (value - prev).abs() <= REL_TOL * prev.abs().max(1.0) {
            break;
        }
    }
    Relaxation { vectors: v, history }
}

/// Goemans–Williamson: relaxation plus `rounding_trials` random-hyperplane
/// roundings; the best rounded cut is returned.
pub fn gw_maxcut(graph: &Graph, seed: u64, rounding_trials: usize) -> Result<CutSolution> {
    if rounding_trials == 0 {
        return Err(Error::Parameter("at least one rounding trial is required".into()));
    }
    let relax = gw_relaxation(graph, seed);
    let k = relax.vectors.first().map_or(0, Vec::len);
    let mut r = rng(crate::seed::derive_seed(seed, 1));
    let mut best: Option<CutSolution> = None;
    for _ in 0..rounding_trials {
        let normal: Vec<f64> = (0..k).map(|_| r.sample(StandardNormal)).collect();
        let bits: Vec<u8> = relax
            .vectors
            .iter()
            .map(|v| u8::from(v.iter().zip(&normal).map(|(a, b)| a * b).sum::<f64>() < 0.0))
            .collect();
        let candidate = CutSolution::from_bits(graph, bits, false);
        if best.as_ref().is_none_or(|b| candidate.cut > b.cut) {
            best = Some(candidate);
        }
    }
    Ok(best.expect("at least one trial ran"))
}

/// 1-opt local search from a random assignment: flip the node with the
/// largest positive gain (smallest label on ties) until none improves.
pub fn greedy_maxcut(graph: &Graph, seed: u64) -> CutSolution {
    let mut r = rng(seed);
    let mut bits: Vec<u8> = (0..graph.n()).map(|_| r.random_range(0..2)).collect();
    loop {
        let best = (0..graph.n())
            .map(|v| (flip_gain(graph, &bits, v), v))
            .filter(|&(g, _)| g > 0)
            .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
        match best {
            Some((_, v)) => bits[v] ^= 1,
            None => return CutSolution::from_bits(graph, bits, false),
        }
    }
}
