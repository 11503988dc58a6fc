//! Depth of the one-round iHVA-tree on random regular graphs against the
//! logarithmic lower bound and the `N D / 2` upper bound.

use ihva::analysis::depth_scan;

fn main() -> ihva::Result<()> {
    let sizes: Vec<usize> = (8..=24).collect();
    let scan = depth_scan(&[3, 4, 5], &sizes, 50, 0)?;
    println!("{:>2} {:>3} {:>7} {:>4} {:>4} {:>7} {:>6}", "D", "N", "mean", "min", "max", "lower", "upper");
    for r in &scan.rows {
        println!(
            "{:>2} {:>3} {:>7.2} {:>4} {:>4} {:>7.2} {:>6}",
            r.d,
            r.n,
            r.mean,
            r.min,
            r.max,
            r.lower_bound.unwrap_or(f64::NAN),
            r.upper_bound
        );
    }
    println!("{} infeasible cells skipped", scan.skipped.len());
    Ok(())
}
