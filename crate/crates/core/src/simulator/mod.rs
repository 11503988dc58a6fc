//! Dense statevector simulation of Pauli-rotation circuits.
//!
//! Basis index bit `i` is qubit `i`. A Pauli string with flip mask `x`
//! (X and Y positions), sign mask `z` (Z and Y positions) and `ny` Y letters
//! acts as `P|b⟩ = i^ny (-1)^{|b & z|} |b ⊕ x⟩`, so a rotation only couples
//! amplitude pairs `(c, c ⊕ x)`.
//!
//! Circuits whose generators all carry an odd number of Y letters have purely
//! imaginary generators; starting from `|+⟩^N` the state then stays real and
//! is stored as `f64` amplitudes.

mod gradient;
mod observables;

use std::ops::{Add, Mul};

use num_complex::Complex64;

use crate::circuit::{Circuit, Pauli, PauliRotation};
use crate::error::{Error, Result};

pub use gradient::{adjoint_gradient, gradient, parameter_shift_gradient};
pub(crate) use gradient::gradient_from_state;
pub use observables::{
    cvar, cvar_weights, energy, expectation_zz, format_bitstring, sample, CostDiagonal,
    EnergyReport,
};

/// Largest width accepted without [`plus_state_unchecked`]: 2^26 complex
/// amplitudes take 1 GiB.
pub const MAX_QUBITS: usize = 26;

/// Storage for statevector amplitudes.
pub trait Amplitude:
    Copy + Send + Sync + Add<Output = Self> + Mul<f64, Output = Self> + 'static
{
    fn from_real(x: f64) -> Self;
    fn norm_sqr(self) -> f64;
    /// `self · i^k`. Real amplitudes accept only even `k`.
    fn times_i_pow(self, k: u32) -> Self;
    /// `Re(conj(self) · other)`.
    fn re_dot(self, other: Self) -> f64;
    fn imag(self) -> f64;
    fn to_complex(self) -> Complex64;
}

impl Amplitude for f64 {
    fn from_real(x: f64) -> Self {
        x
    }

    fn norm_sqr(self) -> f64 {
        self * self
    }

    fn times_i_pow(self, k: u32) -> Self {
        debug_assert!(k % 2 == 0, "real amplitude times an odd power of i");
        if k % 4 == 0 {
            self
        } else {
            -self
        }
    }

    fn re_dot(self, other: Self) -> f64 {
        self * other
    }

    fn imag(self) -> f64 {
        0.0
    }

    fn to_complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
}

impl Amplitude for Complex64 {
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }

    fn norm_sqr(self) -> f64 {
        Complex64::norm_sqr(&self)
    }

    fn times_i_pow(self, k: u32) -> Self {
        match k % 4 {
            0 => self,
            1 => Complex64::new(-self.im, self.re),
            2 => -self,
            _ => Complex64::new(self.im, -self.re),
        }
    }

    fn re_dot(self, other: Self) -> f64 {
        self.re * other.re + self.im * other.im
    }

    fn imag(self) -> f64 {
        self.im
    }

    fn to_complex(self) -> Complex64 {
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Amplitudes {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    n_qubits: usize,
    amps: Amplitudes,
}

#[inline]
fn parity(x: u64) -> bool {
    x.count_ones() % 2 == 1
}

/// Masks and phase power of `exp(-i φ P)` in the form used by the kernels:
/// `ψ'[c] = cos φ ψ[c] + sin φ · i^k · (-1)^{|(c⊕x)&z|} ψ[c⊕x]`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Kernel {
    x: u64,
    z: u64,
    k: u32,
}

impl Kernel {
    pub(crate) fn of(gate: &PauliRotation) -> Self {
        let ny = gate.count(Pauli::Y) as u32;
        Kernel { x: gate.x_mask(), z: gate.z_mask(), k: (ny + 3) % 4 }
    }

    /// Applies `exp(-i φ P)`.
    pub(crate) fn rotate<A: Amplitude>(self, amps: &mut [A], phi: f64) {
        let (c, s) = (phi.cos(), phi.sin());
        let Kernel { x, z, k } = self;
        if x == 0 {
            for (b, a) in amps.iter_mut().enumerate() {
                let sign = if parity(b as u64 & z) { -s } else { s };
                *a = *a * c + a.times_i_pow(k) * sign;
            }
            return;
        }
        let pivot = 1usize << x.trailing_zeros();
        let len = amps.len();
        for base in (0..len).step_by(2 * pivot) {
            for lo in base..base + pivot {
                let hi = lo ^ x as usize;
                let (a_lo, a_hi) = (amps[lo], amps[hi]);
                let s_lo = if parity(hi as u64 & z) { -s } else { s };
                let s_hi = if parity(lo as u64 & z) { -s } else { s };
                amps[lo] = a_lo * c + a_hi.times_i_pow(k) * s_lo;
                amps[hi] = a_hi * c + a_lo.times_i_pow(k) * s_hi;
            }
        }
    }

    /// `Re⟨λ|(-iP)|ψ⟩`.
    pub(crate) fn re_generator_overlap<A: Amplitude>(self, lambda: &[A], psi: &[A]) -> f64 {
        let Kernel { x, z, k } = self;
        let mut acc = 0.0;
        for (b, l) in lambda.iter().enumerate() {
            let partner = b ^ x as usize;
            let term = l.re_dot(psi[partner].times_i_pow(k));
            if parity(partner as u64 & z) {
                acc -= term;
            } else {
                acc += term;
            }
        }
        acc
    }
}

fn check_width(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Parameter("statevector needs at least one qubit".into()));
    }
    if n > MAX_QUBITS {
        return Err(Error::Resource(format!(
            "{n} qubits exceed the {MAX_QUBITS}-qubit statevector guard"
        )));
    }
    Ok(())
}

/// `|+⟩^n` in real storage.
pub fn plus_state(n: usize) -> Result<Statevector> {
    check_width(n)?;
    Ok(plus_state_unchecked(n))
}

/// `|+⟩^n` without the width guard.
pub fn plus_state_unchecked(n: usize) -> Statevector {
    let dim = 1usize << n;
    let a = (dim as f64).sqrt().recip();
    Statevector { n_qubits: n, amps: Amplitudes::Real(vec![a; dim]) }
}

impl Statevector {
    /// Computational basis state `|index⟩`.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        check_width(n)?;
        if index >= 1 << n {
            return Err(Error::Parameter(format!("basis index {index} outside {n}-qubit space")));
        }
        let mut v = vec![0.0; 1 << n];
        v[index] = 1.0;
        Ok(Statevector { n_qubits: n, amps: Amplitudes::Real(v) })
    }

    /// Wraps complex amplitudes; the length must be a power of two.
    pub fn from_complex(amps: Vec<Complex64>) -> Result<Self> {
        let n = amps.len().trailing_zeros() as usize;
        if !amps.len().is_power_of_two() || n == 0 {
            return Err(Error::Parameter(format!("{} amplitudes is not 2^n, n ≥ 1", amps.len())));
        }
        Ok(Statevector { n_qubits: n, amps: Amplitudes::Complex(amps) })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn amplitudes(&self) -> &Amplitudes {
        &self.amps
    }

    pub fn is_real(&self) -> bool {
        matches!(self.amps, Amplitudes::Real(_))
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        match &self.amps {
            Amplitudes::Real(v) => Complex64::new(v[index], 0.0),
            Amplitudes::Complex(v) => v[index],
        }
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        match &self.amps {
            Amplitudes::Real(v) => v.iter().map(|&a| a.to_complex()).collect(),
            Amplitudes::Complex(v) => v.clone(),
        }
    }

    pub fn probabilities(&self) -> Vec<f64> {
        match &self.amps {
            Amplitudes::Real(v) => v.iter().map(|a| a * a).collect(),
            Amplitudes::Complex(v) => v.iter().map(|a| a.norm_sqr()).collect(),
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        match &self.amps {
            Amplitudes::Real(v) => v.iter().map(|a| a * a).sum(),
            Amplitudes::Complex(v) => v.iter().map(|a| a.norm_sqr()).sum(),
        }
    }

    /// Largest `|Im a|` over the amplitudes.
    pub fn max_imag(&self) -> f64 {
        match &self.amps {
            Amplitudes::Real(_) => 0.0,
            Amplitudes::Complex(v) => v.iter().map(|a| a.im.abs()).fold(0.0, f64::max),
        }
    }

    fn promote(&mut self) {
        if let Amplitudes::Real(v) = &self.amps {
            self.amps = Amplitudes::Complex(v.iter().map(|&a| a.to_complex()).collect());
        }
    }

    /// `exp(-i φ P)` for a gate's Pauli string; `φ` is half the rotation angle.
    pub(crate) fn apply_half_angle(&mut self, gate: &PauliRotation, phi: f64) {
        let kernel = Kernel::of(gate);
        if kernel.k % 2 == 1 {
            self.promote();
        }
        match &mut self.amps {
            Amplitudes::Real(v) => kernel.rotate(v, phi),
            Amplitudes::Complex(v) => kernel.rotate(v, phi),
        }
    }
}

/// Applies `exp(-i · sign · angle · P / 2)` in place.
pub fn apply_pauli_rotation(state: &mut Statevector, gate: &PauliRotation, angle: f64) -> Result<()> {
    if let Some(q) = gate.qubits().find(|&q| q >= state.n_qubits) {
        return Err(Error::Parameter(format!(
            "gate {} touches qubit {q} of a {}-qubit state",
            gate.label(),
            state.n_qubits
        )));
    }
    state.apply_half_angle(gate, f64::from(gate.sign) * angle / 2.0);
    Ok(())
}

pub(crate) fn check_params(circuit: &Circuit, params: &[f64]) -> Result<()> {
    if params.len() != circuit.n_params() {
        return Err(Error::ParamLength { expected: circuit.n_params(), got: params.len() });
    }
    Ok(())
}

/// `|+⟩^N` followed by every gate of the circuit.
pub fn run(circuit: &Circuit, params: &[f64]) -> Result<Statevector> {
    check_params(circuit, params)?;
    let mut state = plus_state(circuit.n_qubits())?;
    for g in circuit.gates() {
        state.apply_half_angle(g, f64::from(g.sign) * params[g.param] / 2.0);
    }
    Ok(state)
}

/// Like [`run`] but with an explicit rotation angle per gate (sign included).
pub fn run_gate_angles(circuit: &Circuit, angles: &[f64]) -> Result<Statevector> {
    if angles.len() != circuit.gates().len() {
        return Err(Error::ParamLength { expected: circuit.gates().len(), got: angles.len() });
    }
    let mut state = plus_state(circuit.n_qubits())?;
    for (g, &a) in circuit.gates().iter().zip(angles) {
        state.apply_half_angle(g, a / 2.0);
    }
    Ok(state)
}

/// Effective angle `sign · θ[param]` of every gate.
pub fn gate_angles(circuit: &Circuit, params: &[f64]) -> Result<Vec<f64>> {
    check_params(circuit, params)?;
    Ok(circuit.gates().iter().map(|g| f64::from(g.sign) * params[g.param]).collect())
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{
        build_equal_angle, build_ihva_stagger, build_ihva_tree, build_ma_qaoa, EqualAngle,
    };
    use crate::graph::{assign_random_signs, complete, path, random_regular, random_tree, star, Graph};
    use crate::seed::rng;
    use rand::Rng as _;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn plus_states() {
        let s = plus_state(1).unwrap();
        assert!(s.to_complex().iter().all(|a| (a.re - FRAC_1_SQRT_2).abs() < 1e-15 && a.im == 0.0));
        let s = plus_state(2).unwrap();
        assert!(s.to_complex().iter().all(|a| (a.re - 0.5).abs() < 1e-15 && a.im == 0.0));
        assert!((plus_state(20).unwrap().norm_sqr() - 1.0).abs() < 1e-12);
        assert!(matches!(plus_state(27), Err(Error::Resource(_))));
        assert_eq!(plus_state_unchecked(3).dim(), 8);
    }

    #[test]
    fn ry_quarter_turn_on_plus() {
        // exp(-iπ/4 Y)|+⟩ = |1⟩ up to phase; check ⟨Z⟩ against the dense oracle.
        let gate = PauliRotation::single(0, Pauli::Y, 0, 1);
        let mut s = plus_state(1).unwrap();
        apply_pauli_rotation(&mut s, &gate, FRAC_PI_2).unwrap();
        let m = dense::rotation_matrix(&gate, 1, FRAC_PI_2);
        let want = dense::apply(&m, &[Complex64::new(FRAC_1_SQRT_2, 0.0); 2]);
        let z_kernel = want[0].norm_sqr() - want[1].norm_sqr();
        let z = s.probabilities()[0] - s.probabilities()[1];
        assert!((z - z_kernel).abs() < 1e-12);
        assert!((z.abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zy_quarter_turn_builds_bell_pair() {
        let gate = PauliRotation::pair(0, Pauli::Z, 1, Pauli::Y, 0, 1);
        let mut s = plus_state(2).unwrap();
        apply_pauli_rotation(&mut s, &gate, FRAC_PI_2).unwrap();
        let amps = s.to_complex();
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        // |01⟩ and |10⟩ are indices 2 and 1 in either bit order.
        let want = [zero, h, h, zero];
        assert!(amps.iter().zip(want).all(|(&a, b)| close(a, b, 1e-12)), "{amps:?}");
        assert!(s.is_real());
    }

    #[test]
    fn zero_angle_is_identity() {
        let g = random_regular(6, 3, 2).unwrap();
        for c in [build_ihva_tree(&g, 2).unwrap(), build_ma_qaoa(&g, 1).unwrap()] {
            let s = run(&c, &vec![0.0; c.n_params()]).unwrap();
            let plus = plus_state(6).unwrap();
            assert_eq!(s.to_complex(), plus.to_complex());
        }
    }

    #[test]
    fn tree_at_quarter_turn_is_ghz_type() {
        let g = Graph::unweighted(6, &[(0, 2), (1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
        let c = build_ihva_tree(&g, 1).unwrap();
        let s = run(&c, &vec![FRAC_PI_2; c.n_params()]).unwrap();
        let p = s.probabilities();
        let (a, b) = (0b010100, 0b101011);
        assert!((p[a] - 0.5).abs() < 1e-12 && (p[b] - 0.5).abs() < 1e-12);
        for e in g.edges() {
            assert!((expectation_zz(&s, e.u, e.v).unwrap() + 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn parameter_length_is_checked() {
        let c = build_ihva_tree(&path(3).unwrap(), 1).unwrap();
        assert!(matches!(run(&c, &[0.0]), Err(Error::ParamLength { expected: 2, got: 1 })));
    }

    #[test]
    fn matches_dense_oracle_up_to_four_qubits() {
        let mut r = rng(17);
        let graphs = [
            path(2).unwrap(),
            path(3).unwrap(),
            complete(3).unwrap(),
            star(4).unwrap(),
            complete(4).unwrap(),
            assign_random_signs(&complete(4).unwrap(), 3),
            Graph::unweighted(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap(),
        ];
        for g in &graphs {
            let circuits = [
                build_ihva_tree(g, 1).unwrap(),
                build_ihva_tree(g, 2).unwrap(),
                build_ihva_stagger(g, 2).unwrap(),
                build_ma_qaoa(g, 2).unwrap(),
                build_equal_angle(g, EqualAngle::IhvaTree).unwrap(),
                build_equal_angle(g, EqualAngle::Qaoa).unwrap(),
            ];
            for c in &circuits {
                for _ in 0..100 {
                    let params: Vec<f64> = (0..c.n_params()).map(|_| r.random_range(0.0..4.0 * PI)).collect();
                    let got = run(c, &params).unwrap().to_complex();
                    let want = dense::run(c, &params);
                    for (a, b) in got.iter().zip(&want) {
                        assert!(close(*a, *b, 1e-10), "{} on {:?}", c.kind, g);
                    }
                }
            }
        }
    }

    #[test]
    fn every_letter_pair_matches_dense_oracle() {
        let letters = [Pauli::X, Pauli::Y, Pauli::Z];
        let mut r = rng(5);
        let init: Vec<Complex64> = (0..8)
            .map(|_| Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)))
            .collect();
        let norm = init.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let init: Vec<Complex64> = init.iter().map(|a| a / norm).collect();
        for &la in &letters {
            for &lb in &letters {
                for (qa, qb) in [(0, 1), (2, 0), (1, 2)] {
                    let gate = PauliRotation::pair(qa, la, qb, lb, 0, -1);
                    let angle = r.random_range(0.0..2.0 * PI);
                    let mut s = Statevector::from_complex(init.clone()).unwrap();
                    apply_pauli_rotation(&mut s, &gate, angle).unwrap();
                    let want = dense::apply(&dense::rotation_matrix(&gate, 3, -angle), &init);
                    for (a, b) in s.to_complex().iter().zip(&want) {
                        assert!(close(*a, *b, 1e-12), "{}", gate.label());
                    }
                }
            }
        }
    }

    #[test]
    fn ihva_states_stay_real() {
        let mut r = rng(3);
        for seed in 0..10 {
            let g = assign_random_signs(&random_regular(10, 3, seed).unwrap(), seed);
            for c in [build_ihva_tree(&g, 2).unwrap(), build_ihva_stagger(&g, 2).unwrap()] {
                let params: Vec<f64> = (0..c.n_params()).map(|_| r.random_range(0.0..4.0 * PI)).collect();
                let s = run(&c, &params).unwrap();
                assert!(s.is_real());
                assert!(s.max_imag() < 1e-10);
            }
        }
        let c = build_ma_qaoa(&random_tree(5, 1).unwrap(), 1).unwrap();
        assert!(!run(&c, &vec![0.3; c.n_params()]).unwrap().is_real());
    }

    #[test]
    fn norm_survives_ten_thousand_random_gates() {
        let n = 12;
        let mut r = rng(99);
        let letters = [Pauli::X, Pauli::Y, Pauli::Z];
        let mut s = plus_state(n).unwrap();
        for _ in 0..10_000 {
            let a = r.random_range(0..n);
            let b = (a + r.random_range(1..n)) % n;
            let gate = if r.random::<bool>() {
                PauliRotation::single(a, letters[r.random_range(0..3)], 0, 1)
            } else {
                PauliRotation::pair(a, letters[r.random_range(0..3)], b, letters[r.random_range(0..3)], 0, 1)
            };
            apply_pauli_rotation(&mut s, &gate, r.random_range(0.0..2.0 * PI)).unwrap();
        }
        assert!((s.norm_sqr() - 1.0).abs() < 1e-9);
    }
}
