//! VQE on random 3-regular graphs: iHVA-tree, iHVA-stagger and multi-angle
//! QAOA at one and two rounds, five small-constant restarts each, scored
//! against the brute-force maximum cut.
//!
//! `cargo run --release --example regular_vqe -- [n] [graphs]`

use ihva::circuit::AnsatzKind;
use ihva::experiment::build_circuit;
use ihva::graph::random_regular;
use ihva::oracle::brute_force_maxcut;
use ihva::vqe::{minimize, OptimizerConfig};

fn main() -> ihva::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().expect("integer argument"));
    let n = args.next().unwrap_or(10);
    let graphs = args.next().unwrap_or(5);
    let kinds = [AnsatzKind::IhvaTree, AnsatzKind::IhvaStagger, AnsatzKind::MaQaoa];

    println!("{:>5} {:>5} {:>14} {:>3} {:>8}", "graph", "C_max", "ansatz", "p", "ratio");
    for seed in 0..graphs as u64 {
        let g = random_regular(n, 3, seed)?;
        let c_max = brute_force_maxcut(&g)?.cut;
        for kind in kinds {
            for p in [1, 2] {
                let circuit = build_circuit(&g, kind, p)?;
                let config = OptimizerConfig { seed, ..OptimizerConfig::default() };
                let r = minimize(&circuit, &g, &config)?.with_reference(c_max)?;
                println!("{seed:>5} {c_max:>5} {:>14} {p:>3} {:>8.5}", kind.name(), r.approx_ratio.unwrap());
            }
        }
    }
    Ok(())
}
