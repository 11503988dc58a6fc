use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ihva::analysis::depth_scan;
use ihva::arrangement::{arrange_round_with, stagger_arrangement, RootPick};
use ihva::experiment::{
    cmd_compare, cmd_generate, cmd_optimize, cmd_scan_lightcone, cmd_scan_variance, history_rows, load_graph,
    parse_ansatz, parse_list, save_csv, save_json, write_csv, CompareSpec, ExperimentSpec, GraphSource,
    VarianceGrid,
};
use ihva::graph::{save_edge_list, write_edge_list};
use ihva::oracle::{brute_force_maxcut, greedy_maxcut, gw_maxcut};
use ihva::vqe::{Init, Method, Objective, OptimizerConfig};
use ihva::{Error, Graph, Result};

const THREADS_ENV: &str = "IHVA_THREADS";

/// iHVA MaxCut experiments.
#[derive(Parser)]
#[command(name = "ihva", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph and write it as an edge list (plus JSON with -o).
    Generate {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the gate arrangement of one round.
    Arrange {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_enum, default_value_t = Layout::Tree)]
        layout: Layout,
        /// Seed for a random BFS start; the lowest label is used otherwise.
        #[arg(long)]
        root_seed: Option<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run VQE with restarts and report the best cut.
    Optimize {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value = "ihva-tree")]
        ansatz: String,
        #[arg(long, default_value_t = 1)]
        p: usize,
        #[arg(long, default_value = "energy")]
        objective: String,
        #[arg(long, value_enum, default_value_t = MethodArg::QuasiNewton)]
        method: MethodArg,
        #[arg(long, value_enum, default_value_t = InitArg::SmallConstant)]
        init: InitArg,
        #[arg(long, default_value_t = 5)]
        restarts: usize,
        #[arg(long)]
        max_iters: Option<usize>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Sample this many bitstrings from the optimized state.
        #[arg(long)]
        shots: Option<usize>,
        /// RunResult JSON.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Per-restart objective history CSV.
        #[arg(long)]
        history: Option<PathBuf>,
    },
    /// iHVA-tree versus G-W versus greedy on a generated batch.
    Compare {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 2)]
        p: usize,
        #[arg(long, default_value = "cvar:0.1")]
        objective: String,
        #[arg(long, default_value_t = 5)]
        restarts: usize,
        #[arg(long, default_value_t = 5)]
        gw_runs: usize,
        #[arg(long, default_value_t = 1)]
        rounding_trials: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Variance, depth and light-cone scans.
    Scan {
        #[command(subcommand)]
        scan: Scan,
    },
    /// Brute-force maximum cut.
    Exact {
        #[command(flatten)]
        graph: GraphArgs,
    },
    /// Goemans-Williamson cut from a low-rank relaxation.
    Gw {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 50)]
        trials: usize,
    },
    /// 1-opt local search from a random assignment.
    Greedy {
        #[command(flatten)]
        graph: GraphArgs,
    },
}

#[derive(Subcommand)]
enum Scan {
    Variance {
        #[arg(long, default_value = "regular")]
        family: String,
        #[arg(long, default_value = "3")]
        d: String,
        #[arg(long, default_value = "6,8,10")]
        n: String,
        #[arg(long, default_value_t = 0.5)]
        q: f64,
        #[arg(long, default_value_t = 2)]
        p: usize,
        #[arg(long, default_value_t = 1024)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        graphs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    Depth {
        #[arg(long, default_value = "3")]
        d: String,
        #[arg(long, default_value = "8..24")]
        n: String,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    Lightcone {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 1)]
        p: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Family {
    Regular,
    Tree,
    Er,
    Bipartite,
    HeavyHex,
    Ring,
    Path,
    Star,
    Complete,
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(value_enum)]
    family: Family,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    d: usize,
    #[arg(long, default_value_t = 0.5)]
    q: f64,
    #[arg(long)]
    connected: bool,
    /// Random ±1 edge weights.
    #[arg(long)]
    signed: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl FamilyArgs {
    fn source(&self) -> GraphSource {
        let n = self.n;
        match self.family {
            Family::Regular => GraphSource::Regular { n, d: self.d },
            Family::Tree => GraphSource::Tree { n },
            Family::Er => GraphSource::Er { n, q: self.q, connected: self.connected },
            Family::Bipartite => GraphSource::Bipartite { n, q: self.q },
            Family::HeavyHex => GraphSource::HeavyHex { n },
            Family::Ring => GraphSource::Ring { n },
            Family::Path => GraphSource::Path { n },
            Family::Star => GraphSource::Star { n },
            Family::Complete => GraphSource::Complete { n },
        }
    }
}

#[derive(Args)]
struct GraphArgs {
    /// Edge list, or graph JSON with a .json extension.
    #[arg(short, long)]
    graph: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl GraphArgs {
    fn load(&self) -> Result<Graph> {
        load_graph(&self.graph)
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Layout {
    Tree,
    Stagger,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    QuasiNewton,
    DerivativeFree,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum InitArg {
    SmallConstant,
    Uniform,
}

fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(path) => std::fs::write(path, format!("{text}\n"))?,
        None => writeln!(io::stdout().lock(), "{text}")?,
    }
    Ok(())
}

fn emit_csv<T: serde::Serialize>(rows: &[T], output: Option<&Path>) -> Result<()> {
    match output {
        Some(path) => save_csv(rows, path),
        None => write_csv(rows, io::stdout().lock()),
    }
}

fn spec_path(output: &Path) -> PathBuf {
    let mut name = output.file_name().unwrap_or_default().to_os_string();
    name.push(".spec.json");
    output.with_file_name(name)
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Generate { family, output } => {
            let g = cmd_generate(&family.source(), family.seed, family.signed)?;
            match output {
                Some(path) => {
                    save_edge_list(&g, &path)?;
                    std::fs::write(path.with_extension("json"), g.to_json())?;
                }
                None => write_edge_list(&g, io::stdout().lock())?,
            }
        }
        Command::Arrange { graph, layout, root_seed, output } => {
            let g = graph.load()?;
            let round = match layout {
                Layout::Tree => {
                    arrange_round_with(&g, root_seed.map_or(RootPick::Lowest, RootPick::Seeded))?
                }
                Layout::Stagger => stagger_arrangement(&g),
            };
            emit(&round.to_json(), output.as_deref())?;
        }
        Command::Optimize {
            graph,
            ansatz,
            p,
            objective,
            method,
            init,
            restarts,
            max_iters,
            tol,
            shots,
            output,
            history,
        } => {
            let g = graph.load()?;
            let kind = parse_ansatz(&ansatz)?;
            let method = match method {
                MethodArg::QuasiNewton => Method::QuasiNewton,
                MethodArg::DerivativeFree => Method::DerivativeFree,
            };
            let base = match method {
                Method::QuasiNewton => OptimizerConfig::default(),
                Method::DerivativeFree => OptimizerConfig::equal_angle(),
            };
            let config = OptimizerConfig {
                method,
                max_iters: max_iters.unwrap_or(base.max_iters),
                restarts,
                init: match init {
                    InitArg::SmallConstant => Init::SmallConstant,
                    InitArg::Uniform => Init::Uniform,
                },
                objective: Objective::parse(&objective)?,
                seed: graph.seed,
                tol,
                ..base
            };
            let report = cmd_optimize(&g, kind, p, &config, shots)?;
            if let Some(path) = &history {
                save_csv(&history_rows(&report.result), path)?;
            }
            if let Some(path) = &output {
                let spec = ExperimentSpec {
                    command: "optimize".into(),
                    graph: Some(GraphSource::File { path: graph.graph.clone() }),
                    signed: false,
                    ansatz: Some(kind),
                    rounds: Some(p),
                    optimizer: Some(config.clone()),
                    outputs: std::iter::once(path.clone()).chain(history.clone()).collect(),
                    seed: graph.seed,
                };
                save_json(&spec, &spec_path(path))?;
            }
            emit(&serde_json::to_string_pretty(&report)?, output.as_deref())?;
        }
        Command::Compare { family, count, p, objective, restarts, gw_runs, rounding_trials, output } => {
            let spec = CompareSpec {
                source: family.source(),
                signed: family.signed,
                count,
                rounds: p,
                objective: Objective::parse(&objective)?,
                restarts,
                gw_runs,
                rounding_trials,
                seed: family.seed,
            };
            let rows = cmd_compare(&spec)?;
            if let Some(path) = &output {
                save_json(&spec, &spec_path(path))?;
            }
            emit_csv(&rows, output.as_deref())?;
        }
        Command::Scan { scan } => match scan {
            Scan::Variance { family, d, n, q, p, samples, graphs, seed, output } => {
                let grid = VarianceGrid {
                    family,
                    degrees: parse_list(&d)?,
                    sizes: parse_list(&n)?,
                    q,
                    rounds: p,
                    samples,
                    graphs,
                    seed,
                };
                emit_csv(&cmd_scan_variance(&grid)?, output.as_deref())?;
            }
            Scan::Depth { d, n, trials, seed, output } => {
                let scan = depth_scan(&parse_list(&d)?, &parse_list(&n)?, trials, seed)?;
                for note in &scan.skipped {
                    eprintln!("skipped: {note}");
                }
                emit_csv(&scan.rows, output.as_deref())?;
            }
            Scan::Lightcone { graph, p, output } => {
                emit_csv(&cmd_scan_lightcone(&graph.load()?, p)?, output.as_deref())?;
            }
        },
        Command::Exact { graph } => {
            emit(&serde_json::to_string_pretty(&brute_force_maxcut(&graph.load()?)?)?, None)?;
        }
        Command::Gw { graph, trials } => {
            emit(&serde_json::to_string_pretty(&gw_maxcut(&graph.load()?, graph.seed, trials)?)?, None)?;
        }
        Command::Greedy { graph } => {
            emit(&serde_json::to_string_pretty(&greedy_maxcut(&graph.load()?, graph.seed))?, None)?;
        }
    }
    Ok(())
}

fn configure_threads() -> Result<()> {
    if let Ok(value) = std::env::var(THREADS_ENV) {
        let threads: usize = value
            .parse()
            .map_err(|_| Error::Parameter(format!("{THREADS_ENV}={value:?} is not a thread count")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Error::Resource(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match configure_threads().and_then(|()| execute(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
