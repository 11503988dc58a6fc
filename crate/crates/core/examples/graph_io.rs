//! Graph families, edge-list round trips and the classical oracles.

use ihva::graph::{erdos_renyi_connected, heavy_hex_patch, parse_edge_list, random_regular, write_edge_list};
use ihva::oracle::{brute_force_maxcut, greedy_maxcut, gw_maxcut};

fn main() -> ihva::Result<()> {
    let graphs = [
        ("3-regular", random_regular(14, 3, 1)?),
        ("Erdős–Rényi", erdos_renyi_connected(14, 0.5, 1, 100)?),
        ("heavy-hex patch", heavy_hex_patch(14, 1)?),
    ];
    for (name, g) in &graphs {
        let mut text = Vec::new();
        write_edge_list(g, &mut text)?;
        let back = parse_edge_list(std::str::from_utf8(&text).expect("edge lists are UTF-8"))?;
        assert_eq!(&back, g);
        println!(
            "{name:>16}: {} edges, exact {}, G-W {}, greedy {}",
            g.n_edges(),
            brute_force_maxcut(g)?.cut,
            gw_maxcut(g, 1, 50)?.cut,
            greedy_maxcut(g, 1).cut
        );
    }
    Ok(())
}
