//! Two-round iHVA-tree with a CVaR(0.1) objective against Goemans-Williamson
//! and greedy local search on random regular graphs of degree 3 to 5.
//!
//! `cargo run --release --example compare_gw -- [n] [graphs]`

use ihva::experiment::{cmd_compare, CompareSpec, GraphSource};

fn main() -> ihva::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().expect("integer argument"));
    let n = args.next().unwrap_or(12);
    let count = args.next().unwrap_or(5);
    for d in [3, 4, 5] {
        let spec = CompareSpec { source: GraphSource::Regular { n, d }, count, seed: d as u64, ..CompareSpec::default() };
        let rows = cmd_compare(&spec)?;
        println!("D = {d}, N = {n}");
        for method in ["ihva-tree-p2", "gw", "greedy"] {
            let ratios: Vec<String> =
                rows.iter().filter(|r| r.method == method).map(|r| format!("{:.3}", r.alpha)).collect();
            println!("  {method:>13}: {}", ratios.join(" "));
        }
    }
    Ok(())
}
