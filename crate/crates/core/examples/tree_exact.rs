//! One round of the tree ansatz cuts every tree exactly: with all angles at
//! π/2 the state is an equal superposition of the two optimal cuts, and VQE
//! from small-constant initialization finds the same optimum.
//!
//! `cargo run --release --example tree_exact -- [n] [seed]`

use std::f64::consts::FRAC_PI_2;

use ihva::circuit::build_ihva_tree;
use ihva::graph::random_tree;
use ihva::simulator::{energy, format_bitstring, run};
use ihva::vqe::{minimize, OptimizerConfig};

fn main() -> ihva::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u64>().expect("integer argument"));
    let n = args.next().unwrap_or(10) as usize;
    let seed = args.next().unwrap_or(7);

    let tree = random_tree(n, seed)?;
    println!("tree on {n} nodes: {:?}", tree.edges().iter().map(|e| e.endpoints()).collect::<Vec<_>>());

    let circuit = build_ihva_tree(&tree, 1)?;
    let state = run(&circuit, &vec![FRAC_PI_2; circuit.n_params()])?;
    let report = energy(&state, &tree)?;
    println!("all angles pi/2: cut = {:.12} (n - 1 = {})", report.cut, n - 1);
    let probs = state.probabilities();
    for (x, p) in probs.iter().enumerate().filter(|(_, &p)| p > 1e-9) {
        println!("  |{}>  p = {p:.6}", format_bitstring(x, n));
    }

    let result = minimize(&circuit, &tree, &OptimizerConfig::default())?.with_reference((n - 1) as i64)?;
    println!(
        "VQE, 5 restarts: best cut {:.9}, ratio {:.9}, iterations {:?}",
        result.best_cut,
        result.approx_ratio.unwrap_or(f64::NAN),
        result.restarts.iter().map(|r| r.iterations).collect::<Vec<_>>()
    );
    Ok(())
}
