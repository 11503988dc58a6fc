//! Reproducible batch experiments behind the command-line front end.
//!
//! Every randomized step takes its seed from [`derive_seed`] applied to the
//! experiment's master seed, keyed by the task index, and batch outputs are
//! emitted in input order.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::analysis::{variance_scan, VarianceScan};
use crate::circuit::{
    build_equal_angle, build_ihva_stagger, build_ihva_tree, build_ma_qaoa, AnsatzKind, Circuit, EqualAngle,
};
use crate::error::{Error, Result};
use crate::graph::{
    assign_random_signs, complete, erdos_renyi, erdos_renyi_connected, heavy_hex_patch, load_edge_list, path,
    random_bipartite, random_regular, random_tree, ring, star, Graph,
};
use crate::oracle::{brute_force_maxcut, greedy_maxcut, gw_maxcut, BRUTE_FORCE_MAX_NODES};
use crate::seed::derive_seed;
use crate::simulator::run;
use crate::vqe::{minimize, ratio_distribution, Objective, OptimizerConfig, RatioDistribution, RunResult};

/// Attempts allowed when a connected Erdős–Rényi graph is requested.
pub const ER_CONNECT_TRIES: usize = 1000;

/// Where a graph comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum GraphSource {
    /// Edge-list text, or graph JSON when the extension is `.json`.
    File { path: PathBuf },
    Regular { n: usize, d: usize },
    Tree { n: usize },
    Er { n: usize, q: f64, connected: bool },
    Bipartite { n: usize, q: f64 },
    HeavyHex { n: usize },
    Ring { n: usize },
    Path { n: usize },
    Star { n: usize },
    Complete { n: usize },
}

impl GraphSource {
    /// Builds the graph; `signed` replaces unit weights by seeded random ±1.
    pub fn build(&self, seed: u64, signed: bool) -> Result<Graph> {
        let g = match self {
            GraphSource::File { path } => load_graph(path)?,
            GraphSource::Regular { n, d } => random_regular(*n, *d, seed)?,
            GraphSource::Tree { n } => random_tree(*n, seed)?,
            GraphSource::Er { n, q, connected: true } => erdos_renyi_connected(*n, *q, seed, ER_CONNECT_TRIES)?,
            GraphSource::Er { n, q, connected: false } => erdos_renyi(*n, *q, seed)?,
            GraphSource::Bipartite { n, q } => random_bipartite(*n, *q, seed)?,
            GraphSource::HeavyHex { n } => heavy_hex_patch(*n, seed)?,
            GraphSource::Ring { n } => ring(*n)?,
            GraphSource::Path { n } => path(*n)?,
            GraphSource::Star { n } => star(*n)?,
            GraphSource::Complete { n } => complete(*n)?,
        };
        Ok(if signed { assign_random_signs(&g, derive_seed(seed, 0)) } else { g })
    }
}

pub fn load_graph(path: &Path) -> Result<Graph> {
    if path.extension().is_some_and(|e| e == "json") {
        Graph::from_json(&std::fs::read_to_string(path)?)
    } else {
        load_edge_list(path)
    }
}

/// Everything needed to replay a run; written next to its outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub command: String,
    pub graph: Option<GraphSource>,
    pub signed: bool,
    pub ansatz: Option<AnsatzKind>,
    pub rounds: Option<usize>,
    pub optimizer: Option<OptimizerConfig>,
    pub outputs: Vec<PathBuf>,
    pub seed: u64,
}

impl ExperimentSpec {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

pub fn build_circuit(graph: &Graph, kind: AnsatzKind, p: usize) -> Result<Circuit> {
    match kind {
        AnsatzKind::IhvaTree => build_ihva_tree(graph, p),
        AnsatzKind::IhvaStagger => build_ihva_stagger(graph, p),
        AnsatzKind::MaQaoa => build_ma_qaoa(graph, p),
        AnsatzKind::EqualAngleIhvaTree => build_equal_angle(graph, EqualAngle::IhvaTree),
        AnsatzKind::EqualAngleQaoa => build_equal_angle(graph, EqualAngle::Qaoa),
        AnsatzKind::Custom => Err(Error::Parameter("a custom ansatz cannot be built from a graph".into())),
    }
}

pub fn parse_ansatz(name: &str) -> Result<AnsatzKind> {
    [
        AnsatzKind::IhvaTree,
        AnsatzKind::IhvaStagger,
        AnsatzKind::MaQaoa,
        AnsatzKind::EqualAngleIhvaTree,
        AnsatzKind::EqualAngleQaoa,
    ]
    .into_iter()
    .find(|k| k.name() == name)
    .ok_or_else(|| Error::Parameter(format!("unknown ansatz {name:?}")))
}

/// Parses `6,8,10`, `8..14` (inclusive) or a mix such as `4,8..10`.
pub fn parse_list(text: &str) -> Result<Vec<usize>> {
    let bad = || Error::Parameter(format!("cannot read {text:?} as a list of integers"));
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim) {
        match part.split_once("..") {
            Some((a, b)) => {
                let (a, b): (usize, usize) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
                if a > b {
                    return Err(bad());
                }
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|_| bad())?),
        }
    }
    Ok(out)
}

pub fn cmd_generate(source: &GraphSource, seed: u64, signed: bool) -> Result<Graph> {
    source.build(seed, signed)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizeReport {
    pub ansatz: AnsatzKind,
    pub rounds: usize,
    pub n_params: usize,
    pub result: RunResult,
    /// Sampled `cut(x)/C_max` of the best parameters, when shots were asked for.
    pub ratios: Option<RatioDistribution>,
}

/// Builds the ansatz, optimizes it and attaches `C_max` when the graph is
/// small enough for brute force.
pub fn cmd_optimize(
    graph: &Graph,
    ansatz: AnsatzKind,
    p: usize,
    config: &OptimizerConfig,
    shots: Option<usize>,
) -> Result<OptimizeReport> {
    let circuit = build_circuit(graph, ansatz, p)?;
    let mut result = minimize(&circuit, graph, config)?;
    let mut ratios = None;
    if graph.n() <= BRUTE_FORCE_MAX_NODES && graph.n_edges() > 0 {
        let c_max = brute_force_maxcut(graph)?.cut;
        if c_max > 0 {
            result = result.with_reference(c_max)?;
            if let Some(shots) = shots {
                let state = run(&circuit, &result.best_params)?;
                ratios = Some(ratio_distribution(&state, graph, c_max, shots, derive_seed(config.seed, u64::MAX))?);
            }
        }
    }
    Ok(OptimizeReport { ansatz, rounds: p, n_params: circuit.n_params(), result, ratios })
}

/// One `(iteration, objective)` line of an optimization history.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistoryRow {
    pub restart: usize,
    pub iteration: usize,
    pub objective: f64,
}

pub fn history_rows(result: &RunResult) -> Vec<HistoryRow> {
    result
        .restarts
        .iter()
        .flat_map(|r| {
            r.history
                .iter()
                .enumerate()
                .map(move |(iteration, &objective)| HistoryRow { restart: r.index, iteration, objective })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareSpec {
    pub source: GraphSource,
    pub signed: bool,
    pub count: usize,
    pub rounds: usize,
    pub objective: Objective,
    pub restarts: usize,
    /// Independent G-W runs; the best is kept.
    pub gw_runs: usize,
    pub rounding_trials: usize,
    pub seed: u64,
}

impl Default for CompareSpec {
    fn default() -> Self {
        CompareSpec {
            source: GraphSource::Regular { n: 8, d: 3 },
            signed: false,
            count: 10,
            rounds: 2,
            objective: Objective::Cvar(0.1),
            restarts: 5,
            gw_runs: 5,
            rounding_trials: 1,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub graph_id: usize,
    pub n: usize,
    pub n_edges: usize,
    pub c_max: i64,
    pub method: String,
    pub cut: f64,
    pub alpha: f64,
}

/// Seeds of graph `i` in a batch: generation, VQE, G-W, greedy.
fn batch_seeds(master: u64, i: usize) -> [u64; 4] {
    let base = derive_seed(master, i as u64);
    [base, derive_seed(base, 1), derive_seed(base, 2), derive_seed(base, 3)]
}

/// iHVA-tree, best-of-runs G-W and greedy on a batch of generated graphs;
/// three rows per graph.
pub fn cmd_compare(spec: &CompareSpec) -> Result<Vec<CompareRow>> {
    if spec.count == 0 || spec.gw_runs == 0 {
        return Err(Error::Parameter("count and gw_runs must be positive".into()));
    }
    let per_graph: Vec<Vec<CompareRow>> = (0..spec.count)
        .into_par_iter()
        .map(|i| {
            let [gseed, vseed, gwseed, grseed] = batch_seeds(spec.seed, i);
            let g = spec.source.build(gseed, spec.signed)?;
            let c_max = brute_force_maxcut(&g)?.cut;
            if c_max <= 0 {
                return Err(Error::Parameter(format!("graph {i} has no positive cut")));
            }
            let config = OptimizerConfig {
                objective: spec.objective,
                restarts: spec.restarts,
                seed: vseed,
                target_cut: Some(c_max as f64),
                ..OptimizerConfig::default()
            };
            let vqe = minimize(&build_ihva_tree(&g, spec.rounds)?, &g, &config)?;
            let mut gw = i64::MIN;
            for r in 0..spec.gw_runs {
                gw = gw.max(gw_maxcut(&g, derive_seed(gwseed, r as u64), spec.rounding_trials)?.cut);
            }
            let greedy = greedy_maxcut(&g, grseed).cut;
            let row = |method: &str, cut: f64| CompareRow {
                graph_id: i,
                n: g.n(),
                n_edges: g.n_edges(),
                c_max,
                method: method.into(),
                cut,
                alpha: cut / c_max as f64,
            };
            Ok(vec![
                row(&format!("ihva-tree-p{}", spec.rounds), vqe.best_cut),
                row("gw", gw as f64),
                row("greedy", greedy as f64),
            ])
        })
        .collect::<Result<_>>()?;
    Ok(per_graph.into_iter().flatten().collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarianceGrid {
    /// `regular` (one cell per degree) or `er`.
    pub family: String,
    pub degrees: Vec<usize>,
    pub sizes: Vec<usize>,
    pub q: f64,
    pub rounds: usize,
    pub samples: usize,
    /// Graphs per cell.
    pub graphs: usize,
    pub seed: u64,
}

/// Variance scans of the iHVA-tree over a grid; infeasible regular cells
/// (odd `N D`, `D >= N`) are skipped.
pub fn cmd_scan_variance(grid: &VarianceGrid) -> Result<Vec<VarianceScan>> {
    let mut cells: Vec<(GraphSource, u64)> = Vec::new();
    match grid.family.as_str() {
        "regular" => {
            for &d in &grid.degrees {
                for &n in &grid.sizes {
                    if d < n && (n * d) % 2 == 0 {
                        cells.push((GraphSource::Regular { n, d }, (d as u64) << 32 | n as u64));
                    }
                }
            }
        }
        "er" => {
            for &n in &grid.sizes {
                cells.push((GraphSource::Er { n, q: grid.q, connected: true }, n as u64));
            }
        }
        other => return Err(Error::Parameter(format!("unknown scan family {other:?}"))),
    }
    let tasks: Vec<(GraphSource, u64)> = cells
        .into_iter()
        .flat_map(|(src, key)| {
            let cell = derive_seed(grid.seed, key);
            (0..grid.graphs).map(move |t| (src.clone(), derive_seed(cell, t as u64)))
        })
        .collect();
    tasks
        .iter()
        .map(|(src, seed)| {
            let g = src.build(*seed, false)?;
            let c = build_ihva_tree(&g, grid.rounds)?;
            variance_scan(&g, &c, grid.samples, derive_seed(*seed, 1))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LightConeRow {
    pub ansatz: AnsatzKind,
    pub n: usize,
    pub u: usize,
    pub v: usize,
    pub cone: usize,
}

/// Per-edge cone sizes of the tree and stagger ansätze with `p` rounds.
pub fn cmd_scan_lightcone(graph: &Graph, p: usize) -> Result<Vec<LightConeRow>> {
    let mut rows = Vec::new();
    for kind in [AnsatzKind::IhvaTree, AnsatzKind::IhvaStagger] {
        let scan = crate::analysis::lightcone_scan(graph, &build_circuit(graph, kind, p)?)?;
        rows.extend(scan.per_edge.into_iter().map(|(u, v, cone)| LightConeRow { ansatz: kind, n: graph.n(), u, v, cone }));
    }
    Ok(rows)
}

pub fn write_csv<T: Serialize>(rows: &[T], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_csv<T: Serialize>(rows: &[T], path: &Path) -> Result<()> {
    write_csv(rows, BufWriter::new(File::create(path)?))
}

pub fn read_csv<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_path(path)?;
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

pub fn save_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut f, value)?;
    f.write_all(b"\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists() {
        assert_eq!(parse_list("6,8,10").unwrap(), vec![6, 8, 10]);
        assert_eq!(parse_list("8..11").unwrap(), vec![8, 9, 10, 11]);
        assert_eq!(parse_list("4, 8..9").unwrap(), vec![4, 8, 9]);
        assert!(parse_list("9..8").is_err());
        assert!(parse_list("x").is_err());
    }

    #[test]
    fn ansatz_names_round_trip() {
        for name in ["ihva-tree", "ihva-stagger", "ma-qaoa", "equal-angle-ihva-tree", "equal-angle-qaoa"] {
            assert_eq!(parse_ansatz(name).unwrap().name(), name);
        }
        assert!(parse_ansatz("qaoa").is_err());
    }

    #[test]
    fn sources_build_what_they_say() {
        let g = GraphSource::Regular { n: 12, d: 3 }.build(1, false).unwrap();
        assert_eq!((g.n(), g.regular_degree()), (12, Some(3)));
        let t = GraphSource::Tree { n: 6 }.build(2, false).unwrap();
        assert_eq!(t.n_edges(), 5);
        let e = GraphSource::Er { n: 14, q: 0.5, connected: true }.build(3, false).unwrap();
        assert!(e.is_connected());
        let s = GraphSource::HeavyHex { n: 16 }.build(4, true).unwrap();
        assert!(s.edges().iter().all(|e| e.w == 1 || e.w == -1));
    }

    #[test]
    fn spec_round_trips() {
        let spec = ExperimentSpec {
            command: "optimize".into(),
            graph: Some(GraphSource::Er { n: 10, q: 0.5, connected: true }),
            signed: true,
            ansatz: Some(AnsatzKind::IhvaTree),
            rounds: Some(2),
            optimizer: Some(OptimizerConfig { objective: Objective::Cvar(0.1), ..OptimizerConfig::default() }),
            outputs: vec!["run.json".into()],
            seed: 9,
        };
        assert_eq!(ExperimentSpec::from_json(&spec.to_json()).unwrap(), spec);
    }

    #[test]
    fn compare_shape_and_trees() {
        let spec = CompareSpec { source: GraphSource::Tree { n: 8 }, count: 4, ..CompareSpec::default() };
        let rows = cmd_compare(&spec).unwrap();
        assert_eq!(rows.len(), 12);
        for r in rows.iter().filter(|r| r.method.starts_with("ihva")) {
            assert!((r.alpha - 1.0).abs() < 1e-4, "{r:?}");
        }
        assert!(rows.iter().all(|r| r.alpha <= 1.0 + 1e-9));
        assert_eq!(cmd_compare(&spec).unwrap(), rows);
    }
}
