//! Gate orderings for one round: the recursive tree arrangement against the
//! edge-coloring (stagger) arrangement, with the depth and light cones each
//! produces.

use ihva::arrangement::{arrange_round, bfs_spanning_tree, min_height_root, stagger_arrangement};
use ihva::circuit::{build_ihva_stagger, build_ihva_tree, circuit_depth};
use ihva::graph::{complete, random_regular, ring, Graph};

fn show(name: &str, g: &Graph) -> ihva::Result<()> {
    let tree = arrange_round(g)?;
    let stagger = stagger_arrangement(g);
    println!("{name}");
    println!("  tree    {}  ({} trees, depth {})", tree.to_json(), tree.n_trees(), circuit_depth(&build_ihva_tree(g, 1)?));
    println!("  stagger {}  (depth {})", stagger.to_json(), circuit_depth(&build_ihva_stagger(g, 1)?));
    Ok(())
}

fn main() -> ihva::Result<()> {
    show("K4", &complete(4)?)?;
    show("ring of 6", &ring(6)?)?;
    show("random 3-regular, 12 nodes", &random_regular(12, 3, 3)?)?;

    // the BFS tree is re-rooted at its center before emission
    let g = random_regular(12, 3, 3)?;
    let bfs = bfs_spanning_tree(&g, 0)?;
    let pairs: Vec<(usize, usize)> = bfs.edge_order.clone();
    let (root, height) = min_height_root(&Graph::unweighted(12, &pairs)?)?;
    println!("BFS tree from node 0 has height {}; its center {root} gives height {height}", bfs.height);
    Ok(())
}
