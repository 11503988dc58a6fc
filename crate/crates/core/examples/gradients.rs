//! Three gradients of the same energy: parameter shift, the adjoint reverse
//! sweep and central differences.

use ihva::circuit::build_ihva_tree;
use ihva::graph::random_regular;
use ihva::simulator::{adjoint_gradient, parameter_shift_gradient, run, CostDiagonal};

fn main() -> ihva::Result<()> {
    let g = random_regular(8, 3, 2)?;
    let c = build_ihva_tree(&g, 2)?;
    let diag = CostDiagonal::new(&g)?;
    let params: Vec<f64> = (0..c.n_params()).map(|k| 0.1 + 0.37 * k as f64).collect();

    let shift = parameter_shift_gradient(&c, &params, &g)?;
    let (value, adjoint) = adjoint_gradient(&c, &params, diag.energies())?;
    let h = 1e-5;
    let at = |p: &[f64]| run(&c, p).map(|s| diag.expectation(&s.probabilities()));
    println!("energy {value:.10}, state is real: {}", run(&c, &params)?.is_real());
    println!("{:>3} {:>14} {:>14} {:>14}", "k", "shift", "adjoint", "difference");
    for k in 0..c.n_params() {
        let (mut up, mut down) = (params.clone(), params.clone());
        up[k] += h;
        down[k] -= h;
        let fd = (at(&up)? - at(&down)?) / (2.0 * h);
        println!("{k:>3} {:>14.10} {:>14.10} {:>14.10}", shift[k], adjoint[k], fd);
    }
    Ok(())
}
