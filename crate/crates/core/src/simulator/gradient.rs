use std::f64::consts::FRAC_PI_2;

use super::{
    check_params, gate_angles, run, run_gate_angles, Amplitude, Amplitudes, CostDiagonal, Kernel,
    Statevector,
};
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::graph::Graph;

fn check_graph(circuit: &Circuit, graph: &Graph) -> Result<()> {
    if circuit.n_qubits() != graph.n() {
        return Err(Error::WidthMismatch { state: circuit.n_qubits(), graph: graph.n() });
    }
    Ok(())
}

/// Gradient of `Σ w ⟨Z_i Z_j⟩` by the parameter-shift rule.
pub fn gradient(circuit: &Circuit, params: &[f64], graph: &Graph) -> Result<Vec<f64>> {
    parameter_shift_gradient(circuit, params, graph)
}

/// Shifts each gate angle by ±π/2 in turn; shared parameters collect the
/// contributions of all their gates.
pub fn parameter_shift_gradient(circuit: &Circuit, params: &[f64], graph: &Graph) -> Result<Vec<f64>> {
    check_graph(circuit, graph)?;
    let diag = CostDiagonal::new(graph)?;
    let mut angles = gate_angles(circuit, params)?;
    let mut grad = vec![0.0; circuit.n_params()];
    for (k, gate) in circuit.gates().iter().enumerate() {
        let a = angles[k];
        angles[k] = a + FRAC_PI_2;
        let plus = diag.expectation(&run_gate_angles(circuit, &angles)?.probabilities());
        angles[k] = a - FRAC_PI_2;
        let minus = diag.expectation(&run_gate_angles(circuit, &angles)?.probabilities());
        angles[k] = a;
        grad[gate.param] += f64::from(gate.sign) * (plus - minus) / 2.0;
    }
    Ok(grad)
}

/// Value and gradient of `Σ_x O_x |ψ_x(θ)|²` for a diagonal observable `O`,
/// by one reverse sweep through the circuit.
pub fn adjoint_gradient(circuit: &Circuit, params: &[f64], observable: &[f64]) -> Result<(f64, Vec<f64>)> {
    check_params(circuit, params)?;
    if observable.len() != 1 << circuit.n_qubits() {
        return Err(Error::Parameter(format!(
            "observable has {} entries for {} qubits",
            observable.len(),
            circuit.n_qubits()
        )));
    }
    let state = run(circuit, params)?;
    let value = state.probabilities().iter().zip(observable).map(|(p, o)| p * o).sum();
    Ok((value, gradient_from_state(circuit, params, state, observable)))
}

/// Reverse sweep starting from `state = run(circuit, params)`.
pub(crate) fn gradient_from_state(
    circuit: &Circuit,
    params: &[f64],
    state: Statevector,
    observable: &[f64],
) -> Vec<f64> {
    match state.amps {
        Amplitudes::Real(psi) => sweep(circuit, params, psi, observable),
        Amplitudes::Complex(psi) => sweep(circuit, params, psi, observable),
    }
}

fn sweep<A: Amplitude>(circuit: &Circuit, params: &[f64], mut psi: Vec<A>, observable: &[f64]) -> Vec<f64> {
    let mut lambda: Vec<A> = psi.iter().zip(observable).map(|(&a, &o)| a * o).collect();
    let mut grad = vec![0.0; circuit.n_params()];
    for gate in circuit.gates().iter().rev() {
        let kernel = Kernel::of(gate);
        let sign = f64::from(gate.sign);
        grad[gate.param] += sign * kernel.re_generator_overlap(&lambda, &psi);
        let back = -sign * params[gate.param] / 2.0;
        kernel.rotate(&mut psi, back);
        kernel.rotate(&mut lambda, back);
    }
    grad
}
