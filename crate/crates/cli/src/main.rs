//! `cubemap` command-line tool.
//!
//! Exit status: 0 on success, 1 on usage errors, 2 on domain errors (bad
//! input files, a processor graph that is not a partial cube, ...).

mod bench;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use cubemap::distance::bfs_all_pairs;
use cubemap::objective::imbalance;
use cubemap::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "cubemap", version, about = "Improve task-to-processor mappings on partial-cube topologies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Processor topologies
    #[command(subcommand)]
    Topo(TopoCommand),
    /// Initial mappings from a partition
    #[command(subcommand)]
    Map(MapCommand),
    /// Built-in partitioner
    #[command(subcommand)]
    Partition(PartitionCommand),
    /// Improve a mapping by hierarchical label swapping
    Enhance(EnhanceArgs),
    /// Report Coco, edge cut and balance of a mapping
    Eval(EvalArgs),
    /// Repeated enhance runs summarized as before/after quotients
    Bench(bench::BenchArgs),
}

#[derive(Subcommand)]
enum TopoCommand {
    /// Write a topology as a METIS graph
    Gen {
        /// e.g. grid2d:16x16, torus3d:8x8x8, hypercube:8
        spec: TopologySpec,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compute partial-cube labels (JSON)
    Label {
        spec: TopologySpec,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Test whether a topology is a partial cube (JSON report)
    Check {
        spec: TopologySpec,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct MapArgs {
    /// Application graph (METIS)
    #[arg(short, long)]
    graph: PathBuf,
    /// Partition file, one block id per line
    #[arg(short, long)]
    partition: PathBuf,
    #[arg(short, long)]
    topology: TopologySpec,
    /// Mapping file to write (default: stdout)
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum MapCommand {
    /// Block i on PE i
    Identity(MapArgs),
    /// Greedy construction scoring the heaviest single edge
    GreedyMin(MapArgs),
    /// Greedy construction scoring all edges to placed blocks
    GreedyAllc(MapArgs),
}

#[derive(Subcommand)]
enum PartitionCommand {
    /// Grow balanced blocks breadth-first from random seeds
    Grow {
        #[arg(short, long)]
        graph: PathBuf,
        #[arg(short)]
        k: usize,
        #[arg(long, default_value_t = 0.03)]
        eps: f64,
        #[arg(long, env = "CUBEMAP_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct EnhanceArgs {
    #[arg(short, long)]
    graph: PathBuf,
    #[arg(short, long)]
    topology: TopologySpec,
    /// Initial mapping, one PE id per line
    #[arg(short, long)]
    mapping: PathBuf,
    #[arg(long, default_value_t = timer::DEFAULT_HIERARCHIES)]
    hierarchies: usize,
    #[arg(long, env = "CUBEMAP_SEED", default_value_t = 0)]
    seed: u64,
    /// Accept initial mappings that leave PEs empty
    #[arg(long)]
    allow_empty_pes: bool,
    /// Improved mapping (default: stdout)
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Per-hierarchy records as JSON lines
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Summary with objective values and timing (JSON)
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(short, long)]
    graph: PathBuf,
    #[arg(short, long)]
    topology: TopologySpec,
    #[arg(short, long)]
    mapping: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

/// Failure carrying the partial-cube witness, reported as JSON.
#[derive(Debug, Serialize)]
struct NotPartialCubeReport<'a> {
    error: &'static str,
    topology: String,
    #[serde(flatten)]
    detail: &'a NotPartialCube,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Topo(t) => topo(t),
        Command::Map(m) => map(m),
        Command::Partition(PartitionCommand::Grow {
            graph,
            k,
            eps,
            seed,
            output,
        }) => {
            let ga = read_graph(&graph)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = grow_partition(&ga, k, eps, &mut rng)?;
            emit(output.as_deref(), &write_partition(&p))
        }
        Command::Enhance(args) => enhance(args),
        Command::Eval(args) => eval(args),
        Command::Bench(args) => bench::run(args),
    }
}

pub(crate) fn read_graph(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_metis(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_partition(path: &Path, n: usize, k: Option<usize>) -> Result<Partition> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_partition(&text, n, k).with_context(|| format!("parsing {}", path.display()))
}

/// Generates the topology and labels it, printing the witness as JSON on
/// stderr if it is not a partial cube.
pub(crate) fn labeled_topology(spec: &TopologySpec) -> Result<(Graph, PcubeLabeling)> {
    let gp = spec.generate().with_context(|| format!("topology {spec}"))?;
    match label_partial_cube(&gp) {
        Ok(pl) => Ok((gp, pl)),
        Err(Error::NotPartialCube(e)) => {
            let report = NotPartialCubeReport {
                error: "not a partial cube",
                topology: spec.to_string(),
                detail: &e,
            };
            eprintln!("{}", serde_json::to_string(&report)?);
            bail!("topology {spec} is not a partial cube: {e}")
        }
        Err(e) => Err(e).with_context(|| format!("labeling {spec}")),
    }
}

pub(crate) fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

pub(crate) fn emit_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit(path, &text)
}

fn topo(cmd: TopoCommand) -> Result<()> {
    match cmd {
        TopoCommand::Gen { spec, output } => {
            let gp = spec.generate()?;
            emit(output.as_deref(), &write_metis(&gp))
        }
        TopoCommand::Label { spec, output } => {
            let (gp, pl) = labeled_topology(&spec)?;
            emit_json(output.as_deref(), &LabeledTopology::new(&gp, &pl))
        }
        TopoCommand::Check { spec, output } => {
            #[derive(Serialize)]
            struct Check {
                topology: String,
                n: usize,
                m: usize,
                partial_cube: bool,
                #[serde(skip_serializing_if = "Option::is_none")]
                dim: Option<usize>,
                #[serde(skip_serializing_if = "Option::is_none")]
                failure: Option<NotPartialCube>,
            }
            let gp = spec.generate()?;
            let (dim, failure) = match label_partial_cube(&gp) {
                Ok(pl) => (Some(pl.dim), None),
                Err(Error::NotPartialCube(e)) => (None, Some(e)),
                Err(e) => return Err(e.into()),
            };
            let report = Check {
                topology: spec.to_string(),
                n: gp.n(),
                m: gp.m(),
                partial_cube: dim.is_some(),
                dim,
                failure,
            };
            emit_json(output.as_deref(), &report)?;
            if let Some(e) = failure {
                bail!("topology {spec} is not a partial cube: {e}");
            }
            Ok(())
        }
    }
}

fn map(cmd: MapCommand) -> Result<()> {
    let (args, method) = match cmd {
        MapCommand::Identity(a) => (a, "identity"),
        MapCommand::GreedyMin(a) => (a, "greedy-min"),
        MapCommand::GreedyAllc(a) => (a, "greedy-allc"),
    };
    let ga = read_graph(&args.graph)?;
    let gp = args.topology.generate()?;
    let p = read_partition(&args.partition, ga.n(), None)?;
    let mapping = match method {
        "identity" => {
            if p.k != gp.n() {
                bail!("partition has {} blocks, topology has {} PEs", p.k, gp.n());
            }
            p
        }
        _ => {
            let gc = contract_blocks(&ga, &p);
            let dist = bfs_all_pairs(&gp)?;
            let a = if method == "greedy-min" {
                greedy_min(&gc, &dist)?
            } else {
                greedy_allc(&gc, &dist)?
            };
            a.compose(&p)
        }
    };
    emit(args.output.as_deref(), &write_partition(&mapping))
}

fn enhance(args: EnhanceArgs) -> Result<()> {
    let ga = read_graph(&args.graph)?;
    let (_, pl) = labeled_topology(&args.topology)?;
    let mapping = read_partition(&args.mapping, ga.n(), Some(pl.n()))?;
    let cfg = TimerConfig {
        n_hierarchies: args.hierarchies,
        seed: args.seed,
        allow_empty_pes: args.allow_empty_pes,
    };
    let t0 = Instant::now();
    let out = run_timer(&ga, &pl, &mapping, &cfg)?;
    let millis = t0.elapsed().as_secs_f64() * 1e3;
    log::info!(
        "Coco {} -> {}, Coco+ {} -> {} in {millis:.1} ms",
        out.initial.coco,
        out.last.coco,
        out.initial.coco_plus,
        out.last.coco_plus
    );

    if let Some(path) = &args.trace {
        let mut text = String::new();
        for t in &out.trace {
            text.push_str(&serde_json::to_string(t)?);
            text.push('\n');
        }
        emit(Some(path), &text)?;
    }
    if let Some(path) = &args.report {
        #[derive(Serialize)]
        struct Report<'a> {
            topology: String,
            seed: u64,
            hierarchies: usize,
            accepted: usize,
            millis: f64,
            initial: &'a ObjectiveValue,
            last: &'a ObjectiveValue,
        }
        let report = Report {
            topology: args.topology.to_string(),
            seed: args.seed,
            hierarchies: args.hierarchies,
            accepted: out.trace.iter().filter(|t| t.accepted).count(),
            millis,
            initial: &out.initial,
            last: &out.last,
        };
        emit_json(Some(path), &report)?;
    }
    emit(args.output.as_deref(), &write_partition(&out.mapping))
}

fn eval(args: EvalArgs) -> Result<()> {
    #[derive(Serialize)]
    struct Eval {
        n: usize,
        m: usize,
        pes: usize,
        coco: u64,
        edge_cut: u64,
        imbalance: f64,
    }
    let ga = read_graph(&args.graph)?;
    let gp = args.topology.generate()?;
    let mapping = read_partition(&args.mapping, ga.n(), Some(gp.n()))?;
    let dist = bfs_all_pairs(&gp)?;
    let coco = ga
        .edges()
        .map(|(u, v, w)| w * dist.get(mapping.block[u] as usize, mapping.block[v] as usize) as u64)
        .sum();
    let report = Eval {
        n: ga.n(),
        m: ga.m(),
        pes: gp.n(),
        coco,
        edge_cut: edge_cut(&ga, &mapping),
        imbalance: imbalance(&mapping),
    };
    emit_json(args.output.as_deref(), &report)
}
