//! Variational loop: initialization, objectives, optimizers and restarts.
//!
//! Restarts draw their initial parameters from seeds derived from the
//! configured master seed, so a run is reproducible regardless of how the
//! restarts are scheduled. The best restart is the one with the largest
//! final cut.

mod optimizers;

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::seed::{derive_seed, rng};
use crate::simulator::{gradient_from_state, run, sample, CostDiagonal, Statevector};

pub use optimizers::Stop;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// L-BFGS on analytic gradients.
    QuasiNewton,
    /// Nelder–Mead, intended for one or two parameters.
    DerivativeFree,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Init {
    /// Independent uniform draws on `[0, 0.001]`.
    SmallConstant,
    /// Independent uniform draws on `[0, 4π]`.
    Uniform,
    /// The same vector for every restart.
    Explicit(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    /// `Σ w ⟨Z_i Z_j⟩`.
    Energy,
    /// Mean energy of the lowest `alpha` probability mass.
    Cvar(f64),
}

impl Objective {
    /// Parses `energy` or `cvar:<alpha>`.
    pub fn parse(text: &str) -> Result<Self> {
        match text.split_once(':') {
            None if text == "energy" => Ok(Objective::Energy),
            Some(("cvar", a)) => {
                let alpha: f64 = a
                    .parse()
                    .map_err(|_| Error::Parameter(format!("bad CVaR level {a:?}")))?;
                if !(alpha > 0.0 && alpha <= 1.0) {
                    return Err(Error::Parameter(format!("CVaR level {alpha} outside (0, 1]")));
                }
                Ok(Objective::Cvar(alpha))
            }
            _ => Err(Error::Parameter(format!(
                "objective {text:?} is neither `energy` nor `cvar:<alpha>`"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub method: Method,
    pub max_iters: usize,
    pub restarts: usize,
    pub init: Init,
    pub objective: Objective,
    pub seed: u64,
    /// Stop once the objective changes by less than this three times in a row.
    pub tol: f64,
    /// Initial simplex edge for Nelder–Mead.
    pub simplex_step: f64,
    /// Skip the remaining restarts once a restart reaches this cut.
    pub target_cut: Option<f64>,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            method: Method::QuasiNewton,
            max_iters: 500,
            restarts: 5,
            init: Init::SmallConstant,
            objective: Objective::Energy,
            seed: 0,
            tol: 1e-8,
            simplex_step: 1.0,
            target_cut: None,
        }
    }
}

impl OptimizerConfig {
    /// Single-parameter-family setting: Nelder–Mead for 20 iterations.
    pub fn equal_angle() -> Self {
        OptimizerConfig { method: Method::DerivativeFree, max_iters: 20, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::Parameter("at least one restart is required".into()));
        }
        if let Objective::Cvar(a) = self.objective {
            if !(a > 0.0 && a <= 1.0) {
                return Err(Error::Parameter(format!("CVaR level {a} outside (0, 1]")));
            }
        }
        if !(self.tol >= 0.0) {
            return Err(Error::Parameter(format!("tolerance {} is negative", self.tol)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartRecord {
    pub index: usize,
    pub seed: u64,
    pub initial_params: Vec<f64>,
    pub final_params: Vec<f64>,
    /// Objective at the initial point and after every iteration.
    pub history: Vec<f64>,
    pub iterations: usize,
    pub stop: Stop,
    pub final_objective: f64,
    /// `Σ w ⟨Z_i Z_j⟩` of the final state.
    pub final_energy: f64,
    /// Cut implied by the final objective, `(|E| - objective) / 2`.
    pub final_cut: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub best_restart: usize,
    pub best_params: Vec<f64>,
    pub best_energy: f64,
    pub best_objective: f64,
    /// Objective-implied cut of the best restart: the expected cut for the
    /// energy objective, the CVaR cut for a CVaR objective.
    pub best_cut: f64,
    /// Expected cut `(|E| - energy) / 2` of the best restart.
    pub best_expected_cut: f64,
    pub c_max: Option<i64>,
    pub approx_ratio: Option<f64>,
    pub restarts: Vec<RestartRecord>,
}

impl RunResult {
    /// Attaches the exact optimum and the resulting approximation ratio.
    pub fn with_reference(mut self, c_max: i64) -> Result<Self> {
        self.approx_ratio = Some(approximation_ratio(self.best_cut, c_max)?);
        self.c_max = Some(c_max);
        Ok(self)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("run result serialization is infallible")
    }
}

/// Uniform draws on `[0, 0.001]`.
pub fn small_constant_init(n_params: usize, seed: u64) -> Vec<f64> {
    let mut r = rng(seed);
    (0..n_params).map(|_| r.random_range(0.0..=0.001)).collect()
}

fn initial_params(init: &Init, n_params: usize, seed: u64) -> Result<Vec<f64>> {
    match init {
        Init::SmallConstant => Ok(small_constant_init(n_params, seed)),
        Init::Uniform => {
            let mut r = rng(seed);
            Ok((0..n_params).map(|_| r.random_range(0.0..4.0 * std::f64::consts::PI)).collect())
        }
        Init::Explicit(v) if v.len() == n_params => Ok(v.clone()),
        Init::Explicit(v) => Err(Error::ParamLength { expected: n_params, got: v.len() }),
    }
}

pub fn approximation_ratio(cut: f64, c_max: i64) -> Result<f64> {
    if c_max <= 0 {
        return Err(Error::Parameter(format!("maximum cut {c_max} must be positive")));
    }
    Ok(cut / c_max as f64)
}

/// Objective evaluation shared by the optimizers.
struct Evaluator<'a> {
    circuit: &'a Circuit,
    diag: &'a CostDiagonal,
    objective: Objective,
}

impl Evaluator<'_> {
    fn state(&self, params: &[f64]) -> Statevector {
        run(self.circuit, params).expect("circuit and parameters were validated")
    }

    fn value_of(&self, state: &Statevector) -> f64 {
        let probs = state.probabilities();
        match self.objective {
            Objective::Energy => self.diag.expectation(&probs),
            Objective::Cvar(a) => self.diag.cvar(&probs, a).expect("alpha was validated"),
        }
    }

    fn value(&self, params: &[f64]) -> f64 {
        self.value_of(&self.state(params))
    }

    fn value_and_gradient(&self, params: &[f64]) -> (f64, Vec<f64>) {
        let state = self.state(params);
        let probs = state.probabilities();
        match self.objective {
            Objective::Energy => {
                let value = self.diag.expectation(&probs);
                (value, gradient_from_state(self.circuit, params, state, self.diag.energies()))
            }
            Objective::Cvar(a) => {
                let (value, weights) = self.diag.cvar_with_weights(&probs, a).expect("alpha was validated");
                (value, gradient_from_state(self.circuit, params, state, &weights))
            }
        }
    }
}

fn one_restart(eval: &Evaluator<'_>, config: &OptimizerConfig, index: usize) -> Result<RestartRecord> {
    let seed = derive_seed(config.seed, index as u64);
    let x0 = initial_params(&config.init, eval.circuit.n_params(), seed)?;
    let trace = match config.method {
        Method::QuasiNewton => optimizers::lbfgs(
            x0.clone(),
            |x| eval.value_and_gradient(x),
            |x| eval.value(x),
            config.max_iters,
            config.tol,
        ),
        Method::DerivativeFree => optimizers::nelder_mead(
            x0.clone(),
            |x| eval.value(x),
            config.simplex_step,
            config.max_iters,
            config.tol,
        ),
    };
    let state = eval.state(&trace.x);
    let final_energy = eval.diag.expectation(&state.probabilities());
    Ok(RestartRecord {
        index,
        seed,
        initial_params: x0,
        final_cut: eval.diag.energy_to_cut(trace.f),
        final_params: trace.x,
        history: trace.history,
        iterations: trace.iterations,
        stop: trace.stop,
        final_objective: trace.f,
        final_energy,
    })
}

/// Runs `config.restarts` optimizations and keeps the one with the largest
/// final cut (earliest restart on ties). Restarts that hit a non-finite
/// objective are recorded but never selected.
pub fn minimize(circuit: &Circuit, graph: &Graph, config: &OptimizerConfig) -> Result<RunResult> {
    config.validate()?;
    if circuit.n_qubits() != graph.n() {
        return Err(Error::WidthMismatch { state: circuit.n_qubits(), graph: graph.n() });
    }
    let diag = CostDiagonal::new(graph)?;
    let eval = Evaluator { circuit, diag: &diag, objective: config.objective };
    eval.value(&vec![0.0; circuit.n_params()]);

    let restarts: Vec<RestartRecord> = match config.target_cut {
        None => (0..config.restarts)
            .into_par_iter()
            .map(|i| one_restart(&eval, config, i))
            .collect::<Result<_>>()?,
        Some(target) => {
            let mut done = Vec::new();
            for i in 0..config.restarts {
                let record = one_restart(&eval, config, i)?;
                let hit = record.stop != Stop::NonFinite && record.final_cut >= target - 1e-9;
                done.push(record);
                if hit {
                    break;
                }
            }
            done
        }
    };

    let best = restarts
        .iter()
        .filter(|r| r.stop != Stop::NonFinite)
        .fold(None::<&RestartRecord>, |acc, r| match acc {
            Some(b) if b.final_cut >= r.final_cut => Some(b),
            _ => Some(r),
        })
        .ok_or_else(|| Error::Numerical("every restart produced a non-finite objective".into()))?;
    Ok(RunResult {
        best_restart: best.index,
        best_params: best.final_params.clone(),
        best_energy: best.final_energy,
        best_objective: best.final_objective,
        best_cut: best.final_cut,
        best_expected_cut: diag.energy_to_cut(best.final_energy),
        c_max: None,
        approx_ratio: None,
        restarts,
    })
}

/// Per-shot approximation ratios of sampled bitstrings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioDistribution {
    pub max: f64,
    pub mean: f64,
    /// Shot counts in equal-width bins over `[0, 1]`; ratio 1 falls in the
    /// last bin.
    pub bins: Vec<usize>,
}

/// Samples `shots` bitstrings and scores each by `cut(x) / c_max`.
pub fn ratio_distribution(
    state: &Statevector,
    graph: &Graph,
    c_max: i64,
    shots: usize,
    seed: u64,
) -> Result<RatioDistribution> {
    const BINS: usize = 20;
    if c_max <= 0 {
        return Err(Error::Parameter(format!("maximum cut {c_max} must be positive")));
    }
    if state.n_qubits() != graph.n() {
        return Err(Error::WidthMismatch { state: state.n_qubits(), graph: graph.n() });
    }
    let draws = sample(state, shots, seed)?;
    let mut bins = vec![0usize; BINS];
    let (mut max, mut sum) = (f64::NEG_INFINITY, 0.0);
    for x in draws {
        let ratio = crate::oracle::cut_value(graph, x as u64) as f64 / c_max as f64;
        max = max.max(ratio);
        sum += ratio;
        let bin = ((ratio * BINS as f64) as usize).min(BINS - 1);
        bins[bin] += 1;
    }
    Ok(RatioDistribution { max, mean: sum / shots as f64, bins })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_equal_angle, build_ihva_tree, build_ma_qaoa, EqualAngle};
    use crate::graph::{path, random_regular, random_tree};
    use crate::oracle::brute_force_maxcut;
    use crate::simulator::plus_state;

    #[test]
    fn small_constant_init_range_and_mean() {
        let v = small_constant_init(5, 3);
        assert_eq!(v.len(), 5);
        assert!(v.iter().all(|&x| (0.0..=0.001).contains(&x)));
        assert_eq!(small_constant_init(5, 3), v);
        let draws = small_constant_init(10_000, 8);
        let mean = draws.iter().sum::<f64>() / 1e4;
        // uniform on [0, a]: σ = a/√12
        let sigma = 0.001 / 12f64.sqrt() / 100.0;
        assert!((mean - 0.0005).abs() < 3.0 * sigma);
    }

    #[test]
    fn ratio_examples() {
        assert_eq!(approximation_ratio(5.0, 5).unwrap(), 1.0);
        assert_eq!(approximation_ratio(0.0, 7).unwrap(), 0.0);
        assert_eq!(approximation_ratio(7.0, 7).unwrap(), 1.0);
        assert!(approximation_ratio(1.0, 0).is_err());
    }

    #[test]
    fn objective_parsing() {
        assert_eq!(Objective::parse("energy").unwrap(), Objective::Energy);
        assert_eq!(Objective::parse("cvar:0.1").unwrap(), Objective::Cvar(0.1));
        assert!(Objective::parse("cvar:0").is_err());
        assert!(Objective::parse("cvar").is_err());
        assert!(Objective::parse("mean").is_err());
    }

    #[test]
    fn single_edge_reaches_full_cut() {
        let g = path(2).unwrap();
        let c = build_ihva_tree(&g, 1).unwrap();
        let r = minimize(&c, &g, &OptimizerConfig::default()).unwrap();
        assert!(r.best_cut >= 1.0 - 1e-6);
    }

    #[test]
    fn six_node_tree_is_solved() {
        let g = Graph::unweighted(6, &[(0, 2), (1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
        let c = build_ihva_tree(&g, 1).unwrap();
        let r = minimize(&c, &g, &OptimizerConfig::default()).unwrap().with_reference(5).unwrap();
        assert!((r.approx_ratio.unwrap() - 1.0).abs() < 1e-6);
        assert_eq!(r.restarts.len(), 5);
    }

    #[test]
    fn histories_descend_and_best_is_best() {
        let g = random_regular(8, 3, 4).unwrap();
        let c = build_ihva_tree(&g, 2).unwrap();
        for objective in [Objective::Energy, Objective::Cvar(0.1)] {
            let config = OptimizerConfig { objective, seed: 7, ..OptimizerConfig::default() };
            let r = minimize(&c, &g, &config).unwrap();
            for rec in &r.restarts {
                assert!(rec.history.windows(2).all(|w| w[1] <= w[0] + 1e-12));
                assert!(r.best_cut >= rec.final_cut);
            }
        }
    }

    #[test]
    fn runs_are_deterministic() {
        let g = random_regular(8, 3, 1).unwrap();
        let c = build_ma_qaoa(&g, 1).unwrap();
        let config = OptimizerConfig { seed: 42, max_iters: 50, ..OptimizerConfig::default() };
        assert_eq!(minimize(&c, &g, &config).unwrap(), minimize(&c, &g, &config).unwrap());
    }

    #[test]
    fn target_cut_skips_remaining_restarts() {
        let g = random_tree(8, 2).unwrap();
        let c = build_ihva_tree(&g, 1).unwrap();
        let config = OptimizerConfig { target_cut: Some(7.0), ..OptimizerConfig::default() };
        let r = minimize(&c, &g, &config).unwrap();
        assert_eq!(r.restarts.len(), 1);
        assert!((r.best_cut - 7.0).abs() < 1e-6);
    }

    #[test]
    fn equal_angle_nelder_mead() {
        let g = random_tree(10, 5).unwrap();
        let c = build_equal_angle(&g, EqualAngle::IhvaTree).unwrap();
        let config = OptimizerConfig { objective: Objective::Cvar(0.1), ..OptimizerConfig::equal_angle() };
        let r = minimize(&c, &g, &config).unwrap();
        assert!(r.restarts.iter().all(|rec| rec.iterations <= 20));
        assert!(r.best_cut > 8.0, "{}", r.best_cut);
    }

    #[test]
    fn explicit_init_length_is_checked() {
        let g = path(3).unwrap();
        let c = build_ihva_tree(&g, 1).unwrap();
        let config = OptimizerConfig { init: Init::Explicit(vec![0.1]), ..OptimizerConfig::default() };
        assert!(matches!(minimize(&c, &g, &config), Err(Error::ParamLength { .. })));
        let bad = OptimizerConfig { restarts: 0, ..OptimizerConfig::default() };
        assert!(minimize(&c, &g, &bad).is_err());
    }

    #[test]
    fn ratio_distributions() {
        let g = random_regular(6, 3, 0).unwrap();
        let exact = brute_force_maxcut(&g).unwrap();
        let basis = Statevector::basis(6, exact.bits() as usize).unwrap();
        let d = ratio_distribution(&basis, &g, exact.cut, 100, 1).unwrap();
        assert_eq!((d.max, d.mean, d.bins[19]), (1.0, 1.0, 100));

        let one = path(2).unwrap();
        let d = ratio_distribution(&plus_state(2).unwrap(), &one, 1, 10_000, 2).unwrap();
        assert_eq!(d.bins[0] + d.bins[19], 10_000);
        assert!((d.bins[19] as f64 - 5000.0).abs() < 3.0 * 50.0);
        assert!(d.max >= d.mean);
    }
}
