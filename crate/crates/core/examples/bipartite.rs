//! Any connected bipartite graph is cut exactly by one tree-ansatz round:
//! angle π/2 on the first spanning tree, 0 on the remaining gates.

use std::f64::consts::FRAC_PI_2;

use ihva::arrangement::arrange_round;
use ihva::circuit::build_ihva_tree;
use ihva::graph::random_bipartite;
use ihva::oracle::brute_force_maxcut;
use ihva::simulator::{energy, run};

fn main() -> ihva::Result<()> {
    for seed in 0..5u64 {
        let g = random_bipartite(12, 0.4, seed)?;
        let round = arrange_round(&g)?;
        let params: Vec<f64> = round.tree_ids.iter().map(|&t| if t == 0 { FRAC_PI_2 } else { 0.0 }).collect();
        let report = energy(&run(&build_ihva_tree(&g, 1)?, &params)?, &g)?;
        println!(
            "seed {seed}: {} edges, {} trees, cut {:.12}, C_max {}",
            g.n_edges(),
            round.n_trees(),
            report.cut,
            brute_force_maxcut(&g)?.cut
        );
    }
    Ok(())
}
