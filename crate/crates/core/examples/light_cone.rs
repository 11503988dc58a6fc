//! Backward light cones of `Z_u Z_v` on rings. The stagger layout keeps them
//! at a fixed size; the tree layout lets the last gates see the whole ring.

use ihva::analysis::lightcone_scan;
use ihva::circuit::{build_ihva_stagger, build_ihva_tree};
use ihva::graph::ring;

fn main() -> ihva::Result<()> {
    println!("{:>3} {:>22} {:>22}", "n", "stagger min/mean/max", "tree min/mean/max");
    for n in [8, 12, 16, 20] {
        let g = ring(n)?;
        let s = lightcone_scan(&g, &build_ihva_stagger(&g, 1)?)?;
        let t = lightcone_scan(&g, &build_ihva_tree(&g, 1)?)?;
        println!(
            "{n:>3} {:>22} {:>22}",
            format!("{}/{:.2}/{}", s.min, s.mean, s.max),
            format!("{}/{:.2}/{}", t.min, t.mean, t.max)
        );
    }
    Ok(())
}
