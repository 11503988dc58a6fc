//! Barren-plateau diagnostics and structural scans.
//!
//! Monte-Carlo samples draw parameters uniformly from `[0, 4π]`, each sample
//! from its own derived seed, and are reduced in sample order.

use std::f64::consts::PI;

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::{backward_light_cone, build_ihva_tree, circuit_depth, AnsatzKind, Circuit};
use crate::error::{Error, Result};
use crate::graph::{random_regular, Graph};
use crate::oracle::ground_state_energy;
use crate::seed::{derive_seed, rng};
use crate::simulator::{expectation_zz, run, CostDiagonal, MAX_QUBITS};

/// Upper end of the parameter sampling interval.
pub const PARAM_RANGE: f64 = 4.0 * PI;

fn uniform_params(n_params: usize, seed: u64) -> Vec<f64> {
    let mut r = rng(seed);
    (0..n_params).map(|_| r.random_range(0.0..PARAM_RANGE)).collect()
}

fn check_pair(graph: &Graph, circuit: &Circuit) -> Result<()> {
    if circuit.n_qubits() != graph.n() {
        return Err(Error::WidthMismatch { state: circuit.n_qubits(), graph: graph.n() });
    }
    if graph.n() > MAX_QUBITS {
        return Err(Error::Resource(format!("{} qubits exceeds the limit of {MAX_QUBITS}", graph.n())));
    }
    Ok(())
}

/// Statistics of `⟨H⟩/E_0` over uniformly random parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarianceScan {
    pub n: usize,
    pub n_edges: usize,
    /// Degree when the graph is regular.
    pub degree: Option<usize>,
    pub graph_hash: u64,
    pub kind: AnsatzKind,
    pub rounds: usize,
    pub n_samples: usize,
    pub e0: f64,
    pub mean: f64,
    pub variance: f64,
    /// Standard error of the mean.
    pub stderr: f64,
    /// Standard error of the sample variance.
    pub variance_stderr: f64,
    /// Closed-form lower bound, attached for iHVA circuits with even rounds on
    /// regular graphs.
    pub bound: Option<f64>,
}

pub fn variance_scan(graph: &Graph, circuit: &Circuit, n_samples: usize, seed: u64) -> Result<VarianceScan> {
    check_pair(graph, circuit)?;
    if n_samples < 2 {
        return Err(Error::Parameter("variance needs at least two samples".into()));
    }
    let e0 = ground_state_energy(graph)?;
    if e0 == 0.0 {
        return Err(Error::Parameter("ground-state energy is zero; nothing to normalize by".into()));
    }
    let diag = CostDiagonal::new(graph)?;
    let values: Vec<f64> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let params = uniform_params(circuit.n_params(), derive_seed(seed, i as u64));
            let state = run(circuit, &params)?;
            Ok(diag.expectation(&state.probabilities()) / e0)
        })
        .collect::<Result<_>>()?;
    let m = moments(&values);
    if !m.variance.is_finite() {
        return Err(Error::Numerical("non-finite variance".into()));
    }

    let degree = graph.regular_degree();
    let bound = match degree {
        Some(d) if circuit.kind.is_ihva() && circuit.rounds % 2 == 0 && circuit.rounds > 0 => {
            variance_lower_bound(d, graph.n(), circuit.rounds, e0).ok()
        }
        _ => None,
    };
    Ok(VarianceScan {
        n: graph.n(),
        n_edges: graph.n_edges(),
        degree,
        graph_hash: graph.fingerprint(),
        kind: circuit.kind,
        rounds: circuit.rounds,
        n_samples,
        e0,
        mean: m.mean,
        variance: m.variance,
        stderr: (m.variance / n_samples as f64).sqrt(),
        variance_stderr: m.variance_stderr,
        bound,
    })
}

struct Moments {
    mean: f64,
    variance: f64,
    variance_stderr: f64,
}

fn moments(values: &[f64]) -> Moments {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let m2 = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let m4 = values.iter().map(|v| (v - mean).powi(4)).sum::<f64>() / n;
    let variance = m2 * n / (n - 1.0);
    // Var(s²) ≈ (μ4 - σ⁴ (n-3)/(n-1)) / n
    let var_of_var = ((m4 - m2 * m2 * (n - 3.0) / (n - 1.0)) / n).max(0.0);
    Moments { mean, variance, variance_stderr: var_of_var.sqrt() }
}

/// `D N / (E_0² 2^{D(p+1)-1})`, valid for even `p`.
pub fn variance_lower_bound(d: usize, n: usize, p: usize, e0: f64) -> Result<f64> {
    if p == 0 || p % 2 == 1 {
        return Err(Error::Parameter(format!("the bound holds for even rounds only, got p = {p}")));
    }
    if d == 0 || n < 2 {
        return Err(Error::Parameter(format!("need D >= 1 and N >= 2, got D = {d}, N = {n}")));
    }
    if e0 == 0.0 || !e0.is_finite() {
        return Err(Error::Parameter(format!("E_0 = {e0} is not a usable normalization")));
    }
    let exponent = (d * (p + 1) - 1) as i32;
    Ok((d * n) as f64 / (e0 * e0 * 2f64.powi(exponent)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Covariance {
    pub covariance: f64,
    pub stderr: f64,
}

/// Sample covariance of `⟨Z_a Z_a'⟩` and `⟨Z_b Z_b'⟩` over uniform parameters.
/// The standard error is that of the mean of `(x - x̄)(y - ȳ)`.
pub fn covariance_check(
    graph: &Graph,
    circuit: &Circuit,
    edge_a: (usize, usize),
    edge_b: (usize, usize),
    n_samples: usize,
    seed: u64,
) -> Result<Covariance> {
    check_pair(graph, circuit)?;
    let sorted = |(a, b): (usize, usize)| (a.min(b), a.max(b));
    let (ea, eb) = (sorted(edge_a), sorted(edge_b));
    if ea == eb {
        return Err(Error::Parameter(format!("edges {edge_a:?} and {edge_b:?} are the same")));
    }
    for e in [ea, eb] {
        if graph.edge_index(e.0, e.1).is_none() {
            return Err(Error::Parameter(format!("{e:?} is not an edge of the graph")));
        }
    }
    if n_samples < 2 {
        return Err(Error::Parameter("covariance needs at least two samples".into()));
    }
    let pairs: Vec<(f64, f64)> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let params = uniform_params(circuit.n_params(), derive_seed(seed, i as u64));
            let state = run(circuit, &params)?;
            Ok((expectation_zz(&state, ea.0, ea.1)?, expectation_zz(&state, eb.0, eb.1)?))
        })
        .collect::<Result<_>>()?;
    let n = n_samples as f64;
    let mx = pairs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pairs.iter().map(|p| p.1).sum::<f64>() / n;
    let z: Vec<f64> = pairs.iter().map(|(x, y)| (x - mx) * (y - my)).collect();
    let zbar = z.iter().sum::<f64>() / n;
    let z_var = z.iter().map(|v| (v - zbar).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(Covariance { covariance: zbar * n / (n - 1.0), stderr: (z_var / n).sqrt() })
}

/// One-round iHVA-tree depth statistics for one `(D, N)` cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepthRow {
    pub d: usize,
    pub n: usize,
    pub trials: usize,
    pub mean: f64,
    pub min: usize,
    pub max: usize,
    /// `log_{D-1}(N(D-2)+1) - 1`; absent for `D <= 2`.
    pub lower_bound: Option<f64>,
    /// `N D / 2`.
    pub upper_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DepthScan {
    pub rows: Vec<DepthRow>,
    /// Cells that admit no connected `D`-regular graph.
    pub skipped: Vec<String>,
}

pub fn depth_lower_bound(d: usize, n: usize) -> Option<f64> {
    (d > 2).then(|| ((n * (d - 2) + 1) as f64).ln() / ((d - 1) as f64).ln() - 1.0)
}

/// Graph seed for trial `t` of cell `(d, n)`; independent of the grid shape.
pub fn depth_scan_seed(seed: u64, d: usize, n: usize, trial: usize) -> u64 {
    derive_seed(derive_seed(seed, ((d as u64) << 32) | n as u64), trial as u64)
}

pub fn depth_scan(d_list: &[usize], n_list: &[usize], trials: usize, seed: u64) -> Result<DepthScan> {
    if trials == 0 {
        return Err(Error::Parameter("trials must be positive".into()));
    }
    let mut scan = DepthScan::default();
    for &d in d_list {
        for &n in n_list {
            if d < 2 || d >= n || (n * d) % 2 == 1 {
                scan.skipped.push(format!("no connected {d}-regular graph on {n} nodes"));
                continue;
            }
            let depths: Vec<usize> = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let g = random_regular(n, d, depth_scan_seed(seed, d, n, t))?;
                    Ok(circuit_depth(&build_ihva_tree(&g, 1)?))
                })
                .collect::<Result<_>>()?;
            scan.rows.push(DepthRow {
                d,
                n,
                trials,
                mean: depths.iter().sum::<usize>() as f64 / trials as f64,
                min: *depths.iter().min().expect("trials > 0"),
                max: *depths.iter().max().expect("trials > 0"),
                lower_bound: depth_lower_bound(d, n),
                upper_bound: (n * d) as f64 / 2.0,
            });
        }
    }
    Ok(scan)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LightConeScan {
    /// `(u, v, cone size)` in edge order.
    pub per_edge: Vec<(usize, usize, usize)>,
    pub min: usize,
    pub mean: f64,
    pub max: usize,
}

/// Backward light-cone size of every edge observable `Z_u Z_v`.
pub fn lightcone_scan(graph: &Graph, circuit: &Circuit) -> Result<LightConeScan> {
    if circuit.n_qubits() != graph.n() {
        return Err(Error::WidthMismatch { state: circuit.n_qubits(), graph: graph.n() });
    }
    if graph.n_edges() == 0 {
        return Err(Error::Parameter("graph has no edges".into()));
    }
    let per_edge: Vec<(usize, usize, usize)> = graph
        .edges()
        .iter()
        .map(|e| (e.u, e.v, backward_light_cone(circuit, &[e.u, e.v]).len()))
        .collect();
    let sizes = per_edge.iter().map(|t| t.2);
    Ok(LightConeScan {
        min: sizes.clone().min().expect("non-empty"),
        max: sizes.clone().max().expect("non-empty"),
        mean: sizes.sum::<usize>() as f64 / per_edge.len() as f64,
        per_edge,
    })
}

/// Ordinary least squares `y = intercept + slope x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// From the residual variance with `n - 2` degrees of freedom.
    pub slope_stderr: f64,
    pub n_points: usize,
}

pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    if xs.len() != ys.len() {
        return Err(Error::Parameter(format!("{} x values but {} y values", xs.len(), ys.len())));
    }
    if xs.len() < 3 {
        return Err(Error::Parameter("a fit with an error estimate needs at least three points".into()));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Parameter("x values are all equal".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs.iter().zip(ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let slope_stderr = (rss / (n - 2.0) / sxx).sqrt();
    if !slope.is_finite() || !slope_stderr.is_finite() {
        return Err(Error::Numerical("non-finite least-squares fit".into()));
    }
    Ok(LinearFit { slope, intercept, slope_stderr, n_points: xs.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_ihva_stagger, Circuit};
    use crate::graph::{path, ring};
    use proptest::prelude::*;

    fn empty_circuit(n: usize) -> Circuit {
        Circuit::new(n, vec![], 0).unwrap()
    }

    #[test]
    fn zero_gate_circuit_is_constant() {
        let g = random_regular(8, 3, 0).unwrap();
        let s = variance_scan(&g, &empty_circuit(8), 64, 1).unwrap();
        assert_eq!((s.mean, s.variance), (0.0, 0.0));
        let c = covariance_check(&g, &empty_circuit(8), g.edges()[0].endpoints(), g.edges()[1].endpoints(), 64, 1)
            .unwrap();
        assert_eq!(c.covariance, 0.0);
    }

    #[test]
    fn single_edge_variance_is_one_half() {
        let g = path(2).unwrap();
        let c = build_ihva_tree(&g, 1).unwrap();
        let s = variance_scan(&g, &c, 4096, 3).unwrap();
        assert!((s.variance - 0.5).abs() < 3.0 * s.variance_stderr, "{s:?}");
        assert!(s.mean.abs() < 3.0 * s.stderr);
        assert_eq!(s.bound, None);
    }

    #[test]
    fn regular_mean_is_zero() {
        let g = random_regular(8, 3, 2).unwrap();
        let c = build_ihva_tree(&g, 2).unwrap();
        let s = variance_scan(&g, &c, 1024, 5).unwrap();
        assert!(s.mean.abs() < 3.0 * s.stderr, "{s:?}");
        assert!(s.variance >= 0.0);
        let bound = s.bound.unwrap();
        assert!(s.variance >= bound - 3.0 * s.variance_stderr);
    }

    #[test]
    fn bound_examples() {
        let e0 = -8.0;
        let b8 = variance_lower_bound(3, 8, 2, e0).unwrap();
        assert!((b8 - 24.0 / (64.0 * 256.0)).abs() < 1e-18);
        assert_eq!(variance_lower_bound(3, 16, 2, e0).unwrap(), 2.0 * b8);
        assert!(variance_lower_bound(3, 8, 1, e0).is_err());
        assert!(variance_lower_bound(3, 8, 2, 0.0).is_err());
    }

    #[test]
    fn covariance_vanishes_on_regular_graphs() {
        let g = random_regular(8, 3, 4).unwrap();
        let c = build_ihva_tree(&g, 2).unwrap();
        let (a, b) = (g.edges()[0].endpoints(), g.edges()[7].endpoints());
        let cov = covariance_check(&g, &c, a, b, 2048, 9).unwrap();
        assert!(cov.covariance.abs() < 3.0 * cov.stderr, "{cov:?}");
        assert!(covariance_check(&g, &c, a, (a.1, a.0), 16, 0).is_err());
    }

    #[test]
    fn depth_scan_cells() {
        let scan = depth_scan(&[3, 4], &[7, 8, 10], 10, 1).unwrap();
        assert_eq!(scan.rows.len(), 5);
        assert_eq!(scan.skipped.len(), 1);
        for row in &scan.rows {
            assert!(row.min as f64 <= row.mean && row.mean <= row.max as f64);
            assert!(row.min as f64 >= row.lower_bound.unwrap());
            assert!(row.max as f64 <= row.upper_bound);
        }
        let again = depth_scan(&[4], &[8], 10, 1).unwrap();
        assert_eq!(again.rows[0], scan.rows[3]);
    }

    #[test]
    fn ring_depth_grows_linearly() {
        let ns = [8usize, 12, 16, 20, 24, 28];
        let scan = depth_scan(&[2], &ns, 3, 0).unwrap();
        let xs: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
        let ys: Vec<f64> = scan.rows.iter().map(|r| r.mean).collect();
        let fit = fit_line(&xs, &ys).unwrap();
        assert!(fit.slope > 0.25, "{fit:?}");
        assert!(scan.rows.iter().all(|r| r.lower_bound.is_none()));
    }

    #[test]
    fn light_cones_on_rings() {
        let mut stagger_max = vec![];
        for n in [8, 12, 16] {
            let g = ring(n).unwrap();
            stagger_max.push(lightcone_scan(&g, &build_ihva_stagger(&g, 1).unwrap()).unwrap().max);
            assert_eq!(lightcone_scan(&g, &build_ihva_tree(&g, 1).unwrap()).unwrap().max, n);
        }
        assert!(stagger_max.windows(2).all(|w| w[0] == w[1]));
        let g = ring(6).unwrap();
        let empty = lightcone_scan(&g, &empty_circuit(6)).unwrap();
        assert_eq!((empty.min, empty.max), (2, 2));
    }

    #[test]
    fn fit_examples() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let fit = fit_line(&xs, &[3.0, 5.0, 7.0, 9.0]).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-12 && (fit.intercept - 1.0).abs() < 1e-12);
        assert!(fit.slope_stderr < 1e-12);
        let fit = fit_line(&xs, &[1.0, 3.0, 1.0, 3.0]).unwrap();
        assert!((fit.slope - 0.4).abs() < 1e-12);
        assert!(fit_line(&xs[..2], &[1.0, 2.0]).is_err());
        assert!(fit_line(&[1.0; 3], &[1.0, 2.0, 3.0]).is_err());
    }

    proptest! {
        #[test]
        fn sample_variance_is_non_negative(v in proptest::collection::vec(-10.0f64..10.0, 2..50)) {
            let m = moments(&v);
            prop_assert!(m.variance >= 0.0 && m.variance_stderr >= 0.0);
        }
    }
}
