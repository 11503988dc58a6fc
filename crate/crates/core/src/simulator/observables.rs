use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::{Amplitudes, Statevector};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::seed::rng;

/// Expectation of the cost operator `Σ w Z_i Z_j` and the matching cut.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    /// `Σ w_ij ⟨Z_i Z_j⟩`.
    pub energy: f64,
    /// `½ Σ (1 - w_ij ⟨Z_i Z_j⟩)`.
    pub cut: f64,
    /// `⟨Z_i Z_j⟩` per edge, canonical edge order.
    pub per_edge: Vec<f64>,
}

fn check_match(state: &Statevector, graph: &Graph) -> Result<()> {
    if state.n_qubits() != graph.n() {
        return Err(Error::WidthMismatch { state: state.n_qubits(), graph: graph.n() });
    }
    Ok(())
}

pub fn expectation_zz(state: &Statevector, i: usize, j: usize) -> Result<f64> {
    let n = state.n_qubits();
    if i == j || i >= n || j >= n {
        return Err(Error::Parameter(format!("bad qubit pair ({i}, {j}) for {n} qubits")));
    }
    let mask = (1usize << i) | (1usize << j);
    let probs = state.probabilities();
    Ok(probs
        .iter()
        .enumerate()
        .map(|(x, p)| if (x & mask).count_ones() == 1 { -p } else { *p })
        .sum())
}

pub fn energy(state: &Statevector, graph: &Graph) -> Result<EnergyReport> {
    check_match(state, graph)?;
    let probs = state.probabilities();
    let per_edge: Vec<f64> = graph
        .edges()
        .iter()
        .map(|e| {
            let mask = (1usize << e.u) | (1usize << e.v);
            probs
                .iter()
                .enumerate()
                .map(|(x, p)| if (x & mask).count_ones() == 1 { -p } else { *p })
                .sum()
        })
        .collect();
    let energy: f64 = graph.edges().iter().zip(&per_edge).map(|(e, zz)| f64::from(e.w) * zz).sum();
    Ok(EnergyReport { energy, cut: (graph.n_edges() as f64 - energy) / 2.0, per_edge })
}

/// Classical energy `E(x) = Σ w_ij s_i s_j`, `s = (-1)^bit`, of every basis
/// state, grouped into levels for CVaR.
#[derive(Debug, Clone)]
pub struct CostDiagonal {
    n_qubits: usize,
    n_edges: usize,
    energies: Vec<f64>,
    /// Distinct energies, ascending.
    levels: Vec<f64>,
    level_of: Vec<u32>,
}

impl CostDiagonal {
    pub fn new(graph: &Graph) -> Result<Self> {
        if graph.n() > super::MAX_QUBITS {
            return Err(Error::Resource(format!(
                "{} nodes exceed the {}-qubit statevector guard",
                graph.n(),
                super::MAX_QUBITS
            )));
        }
        let m = graph.n_edges() as i64;
        let masks: Vec<(usize, i64)> = graph
            .edges()
            .iter()
            .map(|e| ((1usize << e.u) | (1usize << e.v), i64::from(e.w)))
            .collect();
        let keys: Vec<i64> = (0..1usize << graph.n())
            .map(|x| {
                masks
                    .iter()
                    .map(|&(mask, w)| if (x & mask).count_ones() == 1 { -w } else { w })
                    .sum()
            })
            .collect();
        let mut present = vec![false; (2 * m + 1) as usize];
        for &k in &keys {
            present[(k + m) as usize] = true;
        }
        let mut index = vec![0u32; present.len()];
        let mut levels = Vec::new();
        for (slot, &p) in present.iter().enumerate() {
            if p {
                index[slot] = levels.len() as u32;
                levels.push(slot as f64 - m as f64);
            }
        }
        Ok(CostDiagonal {
            n_qubits: graph.n(),
            n_edges: graph.n_edges(),
            energies: keys.iter().map(|&k| k as f64).collect(),
            level_of: keys.iter().map(|&k| index[(k + m) as usize]).collect(),
            levels,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Smallest classical energy, the ground-state energy of the cost operator.
    pub fn min_energy(&self) -> f64 {
        self.levels[0]
    }

    /// Cut of basis state `x`: `(|E| - E(x)) / 2`.
    pub fn cut(&self, x: usize) -> f64 {
        self.energy_to_cut(self.energies[x])
    }

    pub fn energy_to_cut(&self, energy: f64) -> f64 {
        (self.n_edges as f64 - energy) / 2.0
    }

    pub fn expectation(&self, probs: &[f64]) -> f64 {
        probs.iter().zip(&self.energies).map(|(p, e)| p * e).sum()
    }

    fn level_mass(&self, probs: &[f64]) -> Vec<f64> {
        let mut mass = vec![0.0; self.levels.len()];
        for (p, &l) in probs.iter().zip(&self.level_of) {
            mass[l as usize] += p;
        }
        mass
    }

    /// Lowest-`alpha` tail: value and boundary level.
    fn tail(&self, probs: &[f64], alpha: f64) -> (f64, usize) {
        let mass = self.level_mass(probs);
        let (mut cum, mut acc) = (0.0, 0.0);
        for (l, (&m, &e)) in mass.iter().zip(&self.levels).enumerate() {
            if cum + m >= alpha || l + 1 == mass.len() {
                acc += (alpha - cum) * e;
                return (acc / alpha, l);
            }
            cum += m;
            acc += m * e;
        }
        unreachable!("at least one energy level exists")
    }

    /// Conditional mean energy over the lowest `alpha` of probability mass.
    pub fn cvar(&self, probs: &[f64], alpha: f64) -> Result<f64> {
        check_alpha(alpha)?;
        Ok(self.tail(probs, alpha).0)
    }

    /// CVaR and the diagonal weights `c_x` whose expectation has the same
    /// gradient: `(E_x - E_b)/alpha` below the boundary level `E_b`, else 0.
    pub fn cvar_with_weights(&self, probs: &[f64], alpha: f64) -> Result<(f64, Vec<f64>)> {
        check_alpha(alpha)?;
        let (value, boundary) = self.tail(probs, alpha);
        let eb = self.levels[boundary];
        let weights = self
            .energies
            .iter()
            .zip(&self.level_of)
            .map(|(&e, &l)| if (l as usize) < boundary { (e - eb) / alpha } else { 0.0 })
            .collect();
        Ok((value, weights))
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Parameter(format!("CVaR level {alpha} outside (0, 1]")));
    }
    Ok(())
}

/// Exact CVaR of the cost operator in `state`.
pub fn cvar(state: &Statevector, graph: &Graph, alpha: f64) -> Result<f64> {
    check_match(state, graph)?;
    CostDiagonal::new(graph)?.cvar(&state.probabilities(), alpha)
}

/// Diagonal weights for the CVaR gradient; see [`CostDiagonal::cvar_with_weights`].
pub fn cvar_weights(state: &Statevector, diag: &CostDiagonal, alpha: f64) -> Result<(f64, Vec<f64>)> {
    diag.cvar_with_weights(&state.probabilities(), alpha)
}

/// `shots` basis-state indices drawn from `|amp|²` by inverse CDF.
pub fn sample(state: &Statevector, shots: usize, seed: u64) -> Result<Vec<usize>> {
    if shots == 0 {
        return Err(Error::Parameter("shots must be positive".into()));
    }
    let mut cdf = Vec::with_capacity(state.dim());
    let mut total = 0.0;
    let mut push = |p: f64| {
        total += p;
        cdf.push(total);
    };
    match state.amplitudes() {
        Amplitudes::Real(v) => v.iter().for_each(|a| push(a * a)),
        Amplitudes::Complex(v) => v.iter().for_each(|a| push(a.norm_sqr())),
    }
    let last_nonzero = cdf.iter().rposition(|&c| c > 0.0).unwrap_or(0);
    let mut r = rng(seed);
    Ok((0..shots)
        .map(|_| {
            let u = r.random::<f64>() * total;
            cdf.partition_point(|&c| c <= u).min(last_nonzero)
        })
        .collect())
}

/// `x` as a ket label, highest qubit first.
pub fn format_bitstring(x: usize, n: usize) -> String {
    (0..n).rev().map(|q| if (x >> q) & 1 == 1 { '1' } else { '0' }).collect()
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use crate::circuit::build_ihva_tree;
    use crate::graph::{complete, path, random_regular, Graph};
    use crate::seed::rng;
    use num_complex::Complex64;
    use rand::Rng as _;
    use std::f64::consts::FRAC_PI_2;

    fn random_state(n: usize, seed: u64) -> Statevector {
        let mut r = rng(seed);
        let v: Vec<Complex64> = (0..1 << n)
            .map(|_| Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)))
            .collect();
        let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        Statevector::from_complex(v.into_iter().map(|a| a / norm).collect()).unwrap()
    }

    #[test]
    fn zz_examples() {
        assert_eq!(expectation_zz(&plus_state(2).unwrap(), 0, 1).unwrap(), 0.0);
        assert_eq!(expectation_zz(&Statevector::basis(2, 0b10).unwrap(), 0, 1).unwrap(), -1.0);
        assert!(expectation_zz(&plus_state(2).unwrap(), 1, 1).is_err());
    }

    #[test]
    fn zz_matches_dense_operator() {
        for seed in 0..10 {
            let s = random_state(4, seed);
            let v = s.to_complex();
            for (i, j) in [(0, 1), (1, 3), (2, 0)] {
                let zz = crate::circuit::PauliRotation::pair(i, crate::circuit::Pauli::Z, j, crate::circuit::Pauli::Z, 0, 1);
                let pv = dense::apply(&dense::pauli_matrix(&zz, 4), &v);
                let want: f64 = v.iter().zip(&pv).map(|(a, b)| (a.conj() * b).re).sum();
                assert!((expectation_zz(&s, i, j).unwrap() - want).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn energy_examples() {
        let g = random_regular(8, 3, 1).unwrap();
        let r = energy(&plus_state(8).unwrap(), &g).unwrap();
        assert!((r.cut - 6.0).abs() < 1e-12 && r.energy.abs() < 1e-12);

        let tree = Graph::unweighted(6, &[(0, 2), (1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
        let c = build_ihva_tree(&tree, 1).unwrap();
        let s = run(&c, &vec![FRAC_PI_2; 5]).unwrap();
        assert!((energy(&s, &tree).unwrap().cut - 5.0).abs() < 1e-12);

        let signed = Graph::new(3, [(0, 1, 1), (1, 2, -1), (0, 2, 1)]).unwrap();
        let diag = CostDiagonal::new(&signed).unwrap();
        for x in 0..8 {
            let rep = energy(&Statevector::basis(3, x).unwrap(), &signed).unwrap();
            assert!((rep.cut - crate::oracle::cut_value(&signed, x as u64) as f64).abs() < 1e-12);
            assert!((rep.energy - diag.energies()[x]).abs() < 1e-12);
        }
        assert!(matches!(energy(&plus_state(2).unwrap(), &signed), Err(Error::WidthMismatch { .. })));
    }

    #[test]
    fn cvar_examples() {
        let g = complete(4).unwrap();
        let s = random_state(4, 3);
        let e = energy(&s, &g).unwrap().energy;
        assert!((cvar(&s, &g, 1.0).unwrap() - e).abs() < 1e-10);
        let b = Statevector::basis(4, 0b0110).unwrap();
        let diag = CostDiagonal::new(&g).unwrap();
        for alpha in [0.01, 0.3, 1.0] {
            assert!((cvar(&b, &g, alpha).unwrap() - diag.energies()[0b0110]).abs() < 1e-12);
        }
        // One edge, uniform state: energies +1, -1, -1, +1.
        let one = path(2).unwrap();
        assert!((cvar(&plus_state(2).unwrap(), &one, 0.5).unwrap() + 1.0).abs() < 1e-12);
        assert!((cvar(&plus_state(2).unwrap(), &one, 0.75).unwrap() + 1.0 / 3.0).abs() < 1e-12);
        assert!(cvar(&b, &g, 0.0).is_err());
    }

    #[test]
    fn cvar_weights_reproduce_cvar_offset() {
        let g = random_regular(6, 3, 4).unwrap();
        let diag = CostDiagonal::new(&g).unwrap();
        let s = random_state(6, 8);
        let probs = s.probabilities();
        let (value, w) = diag.cvar_with_weights(&probs, 0.1).unwrap();
        // CVaR = E_b + Σ p_x c_x.
        let eb = diag.levels.iter().copied().find(|&e| {
            let below: f64 = probs.iter().zip(diag.energies()).filter(|(_, &ex)| ex <= e).map(|(p, _)| p).sum();
            below >= 0.1
        }).unwrap();
        let offset: f64 = probs.iter().zip(&w).map(|(p, c)| p * c).sum();
        assert!((value - (eb + offset)).abs() < 1e-12);
    }

    #[test]
    fn sampling() {
        assert!(sample(&Statevector::basis(3, 0).unwrap(), 100, 1).unwrap().iter().all(|&x| x == 0));
        let shots = 100_000;
        let ones = sample(&plus_state(1).unwrap(), shots, 2).unwrap().iter().filter(|&&x| x == 1).count();
        let sigma = (shots as f64 * 0.25).sqrt();
        assert!((ones as f64 - shots as f64 / 2.0).abs() < 3.0 * sigma);
        assert_eq!(sample(&plus_state(3).unwrap(), 50, 9).unwrap(), sample(&plus_state(3).unwrap(), 50, 9).unwrap());
        assert!(sample(&plus_state(1).unwrap(), 0, 1).is_err());

        let tree = Graph::unweighted(6, &[(0, 2), (1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
        let s = run(&build_ihva_tree(&tree, 1).unwrap(), &[FRAC_PI_2; 5]).unwrap();
        let mut seen: Vec<String> = sample(&s, 2000, 3).unwrap().into_iter().map(|x| format_bitstring(x, 6)).collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen, ["010100", "101011"]);
    }

    #[test]
    fn sample_frequencies_pass_chi_square() {
        let s = random_state(6, 21);
        let shots = 100_000;
        let mut counts = vec![0usize; 64];
        for x in sample(&s, shots, 4).unwrap() {
            counts[x] += 1;
        }
        let chi2: f64 = s
            .probabilities()
            .iter()
            .zip(&counts)
            .map(|(p, &c)| {
                let e = p * shots as f64;
                (c as f64 - e).powi(2) / e
            })
            .sum();
        // 63 degrees of freedom; the 0.999 quantile is about 103.4.
        assert!(chi2 < 103.4, "chi2 = {chi2}");
    }
}
