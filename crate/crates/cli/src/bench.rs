//! `cubemap bench`: repeated partition → map → enhance runs per instance,
//! reduced to before/after quotients.

use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use cubemap::distance::bfs_all_pairs;
use cubemap::report::{aggregate, Metrics, RunRecord};
use cubemap::synthetic::random_geometric;
use cubemap::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::{emit, emit_json, labeled_topology, read_graph};

#[derive(Clone, Copy, ValueEnum)]
pub enum Init {
    Identity,
    GreedyMin,
    GreedyAllc,
}

#[derive(Args)]
pub struct BenchArgs {
    /// Application graph: a METIS file, or `rgg:N` / `rgg:N:DEG` for a
    /// random geometric graph. Repeat for several instances.
    #[arg(short, long, required = true)]
    graph: Vec<String>,
    #[arg(short, long)]
    topology: TopologySpec,
    #[arg(long, value_enum, default_value = "identity")]
    init: Init,
    #[arg(long, default_value_t = 5)]
    repeats: usize,
    #[arg(long, default_value_t = timer::DEFAULT_HIERARCHIES)]
    hierarchies: usize,
    #[arg(long, default_value_t = 0.03)]
    eps: f64,
    /// First seed; repeat r uses seed + r
    #[arg(long, env = "CUBEMAP_SEED", default_value_t = 0)]
    seed: u64,
    /// Running time of an external baseline tool, one value for all
    /// instances or one per instance. Without it, the time quotient is
    /// relative to the built-in partition and initial mapping.
    #[arg(long)]
    baseline_seconds: Vec<f64>,
    /// Quotient table as CSV
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Serialize)]
struct BenchReport {
    runs: Vec<RunRecord>,
    report: AggregateReport,
}

fn load(instance: &str, seed: u64) -> Result<Graph> {
    let Some(rest) = instance.strip_prefix("rgg:") else {
        return read_graph(instance.as_ref());
    };
    let mut parts = rest.split(':');
    let n: usize = parts.next().unwrap_or("").parse().context("rgg:N expects a vertex count")?;
    let deg: f64 = match parts.next() {
        Some(d) => d.parse().context("rgg:N:DEG expects a degree")?,
        None => 8.0,
    };
    Ok(random_geometric(n, deg, &mut ChaCha8Rng::seed_from_u64(seed)))
}

pub fn run(args: BenchArgs) -> Result<()> {
    let baseline = &args.baseline_seconds;
    if !(baseline.is_empty() || baseline.len() == 1 || baseline.len() == args.graph.len()) {
        bail!(
            "--baseline-seconds takes 1 or {} values, got {}",
            args.graph.len(),
            baseline.len()
        );
    }
    if args.repeats == 0 {
        bail!("--repeats must be positive");
    }
    let (gp, pl) = labeled_topology(&args.topology)?;
    let dist = bfs_all_pairs(&gp)?;

    let mut runs = Vec::new();
    for (gi, instance) in args.graph.iter().enumerate() {
        let ga = load(instance, args.seed)?;
        let baseline_ms = match baseline.len() {
            0 => None,
            1 => Some(baseline[0] * 1e3),
            _ => Some(baseline[gi] * 1e3),
        };
        for r in 0..args.repeats {
            let seed = args.seed + r as u64;
            let t0 = Instant::now();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = grow_partition(&ga, pl.n(), args.eps, &mut rng)?;
            let mapping = match args.init {
                Init::Identity => identity_mapping(&p, &pl)?,
                Init::GreedyMin => greedy_min(&contract_blocks(&ga, &p), &dist)?.compose(&p),
                Init::GreedyAllc => greedy_allc(&contract_blocks(&ga, &p), &dist)?.compose(&p),
            };
            let init_ms = t0.elapsed().as_secs_f64() * 1e3;

            let cfg = TimerConfig {
                n_hierarchies: args.hierarchies,
                seed,
                ..Default::default()
            };
            let t1 = Instant::now();
            let out = run_timer(&ga, &pl, &mapping, &cfg)?;
            let timer_ms = t1.elapsed().as_secs_f64() * 1e3;
            log::info!(
                "{instance} #{r}: Coco {} -> {} in {timer_ms:.0} ms",
                out.initial.coco,
                out.last.coco
            );
            runs.push(RunRecord {
                instance: instance.clone(),
                topology: args.topology.to_string(),
                seed,
                before: Metrics {
                    millis: baseline_ms.unwrap_or(init_ms),
                    cut: out.initial.edge_cut,
                    coco: out.initial.coco,
                },
                after: Metrics {
                    millis: timer_ms,
                    cut: out.last.edge_cut,
                    coco: out.last.coco,
                },
                trace: None,
            });
        }
    }

    let report = aggregate::<f64>(&runs);
    if let Some(path) = &args.csv {
        emit(Some(path), &report.to_csv())?;
    }
    emit_json(args.output.as_deref(), &BenchReport { runs, report })
}
