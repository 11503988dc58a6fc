//! Imaginary Hamiltonian variational ansatz (iHVA) for MaxCut.
//!
//! The crate covers the full workflow: random graph families, the tree
//! gate arrangement for the `ZY`/`YZ` generators, circuit construction and
//! analysis, a statevector simulator with analytic gradients, a VQE driver,
//! and classical baselines (brute force, Goemans-Williamson, greedy local
//! search).
//!
//! A one-round tree ansatz solves any tree exactly:
//!
//! ```
//! use ihva::{arrangement, circuit, graph, oracle, simulator, vqe};
//!
//! let g = graph::random_tree(6, 1).unwrap();
//! let c = circuit::build_ihva_tree(&g, 1).unwrap();
//! let run = vqe::minimize(&c, &g, &vqe::OptimizerConfig::default()).unwrap();
//! let exact = oracle::brute_force_maxcut(&g).unwrap();
//! assert!((run.best_cut - exact.cut as f64).abs() < 1e-6);
//! # let _ = (arrangement::arrange_round, simulator::plus_state);
//! ```

pub mod analysis;
pub mod arrangement;
pub mod circuit;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod oracle;
pub mod seed;
pub mod simulator;
pub mod vqe;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use graph::Graph;
