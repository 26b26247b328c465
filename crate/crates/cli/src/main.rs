//! burstcore command-line front end.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use burstcore::report::{frontier_json, mdc_json};
use burstcore::{
    build_graph, generate, metric_report, mdc_baseline, mdc, mdc_plus, parse_edge_list, pomdc, pomdc_baseline,
    BucketWidth, Burst, Density, GenConfig, MdcResult, NodeMask, TemporalGraph,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "burstcore", version, about = "Bursting community mining on temporal graphs")]
struct Cli {
    /// Worker threads for parallel density priming (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print node, edge and horizon counts as JSON.
    Stats(InputArgs),
    /// Compute the (l, delta) maximal dense core.
    Mdc(MdcArgs),
    /// Compute the Pareto frontier over (l, delta).
    Pomdc(PomdcArgs),
    /// Score a node set.
    Metrics(MetricsArgs),
    /// Write a synthetic edge list.
    Gen(GenArgs),
    /// Time the core algorithms on one or more inputs.
    Bench(BenchArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Edge list with one `u v t` per line.
    input: PathBuf,
    /// Snapshot width in raw time units, or "raw" for already-regular timestamps.
    #[arg(long = "bucket-width", default_value = "raw")]
    bucket: String,
    /// Write the result here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Baseline,
    Dp,
    Incremental,
}

#[derive(Args)]
struct MdcArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    l: usize,
    /// Threshold as an integer, exact decimal, or `p/q`.
    #[arg(long)]
    delta: String,
    #[arg(long, value_enum, default_value = "incremental")]
    algo: AlgoArg,
}

#[derive(Args)]
struct PomdcArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Recompute over all nodes at every step instead of pruning to a k-core.
    #[arg(long)]
    no_prune: bool,
}

#[derive(Args)]
struct MetricsArgs {
    #[command(flatten)]
    input: InputArgs,
    /// File with whitespace-separated node labels.
    #[arg(long)]
    nodes: PathBuf,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    horizon: u32,
    /// Per-snapshot probability of each background node pair.
    #[arg(long, default_value_t = 0.0)]
    background: f64,
    /// Planted clique as `size:start:end:prob`; repeatable.
    #[arg(long = "burst")]
    bursts: Vec<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Edge list path; planted members go to `<output>.planted`.
    #[arg(long, short)]
    output: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Edge lists to time.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long = "bucket-width", default_value = "raw")]
    bucket: String,
    #[arg(long, default_value_t = 3)]
    l: usize,
    #[arg(long, default_value = "3")]
    delta: String,
    /// Repetitions per measurement; the median is reported.
    #[arg(long, default_value_t = 3)]
    reps: usize,
    /// Also time the frontier with and without pruning.
    #[arg(long)]
    frontier: bool,
    /// Write the CSV here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

/// Failure with the process exit code it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Failure {
        let internal = error
            .chain()
            .any(|e| matches!(e.downcast_ref::<burstcore::Error>(), Some(burstcore::Error::InternalState(_))));
        Failure {
            code: if internal { 3 } else { 2 },
            error,
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("BURSTCORE_LOG", "error")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(anyhow!("--threads must be positive").into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("configuring the thread pool")?;
    }
    match cli.command {
        Command::Stats(args) => {
            let g = load(&args.input, &args.bucket)?;
            emit(args.output.as_deref(), &serde_json::to_value(g.stats()).map_err(anyhow::Error::from)?)
        }
        Command::Mdc(args) => run_mdc(args),
        Command::Pomdc(args) => run_pomdc(args),
        Command::Metrics(args) => run_metrics(args),
        Command::Gen(args) => run_gen(args),
        Command::Bench(args) => run_bench(args),
    }
}

fn parse_bucket(s: &str) -> anyhow::Result<BucketWidth> {
    Ok(s.parse::<BucketWidth>()?)
}

fn parse_delta(s: &str) -> anyhow::Result<Density> {
    let d: Density = s.parse().with_context(|| format!("parsing --delta {s:?}"))?;
    if d.is_zero() {
        bail!("--delta must be positive");
    }
    Ok(d)
}

fn read_graph(path: &Path, bucket: &str) -> anyhow::Result<Option<TemporalGraph>> {
    let width = parse_bucket(bucket)?;
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let parsed = parse_edge_list(BufReader::new(file), width).with_context(|| format!("reading {}", path.display()))?;
    log::info!(
        "{}: {} records, {} self-loops, {} duplicates dropped",
        path.display(),
        parsed.stats.records,
        parsed.stats.self_loops,
        parsed.stats.duplicates
    );
    if parsed.triples.is_empty() {
        return Ok(None);
    }
    Ok(Some(build_graph(parsed)?))
}

fn load(path: &Path, bucket: &str) -> anyhow::Result<TemporalGraph> {
    read_graph(path, bucket)?.ok_or_else(|| anyhow!("{}: no edges", path.display()))
}

fn emit(output: Option<&Path>, value: &serde_json::Value) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(anyhow::Error::from)?;
    text.push('\n');
    write_text(output, &text)?;
    Ok(())
}

fn write_text(output: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match output {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn mine(g: &TemporalGraph, l: usize, delta: Density, algo: AlgoArg) -> burstcore::Result<MdcResult> {
    match algo {
        AlgoArg::Baseline => mdc_baseline(g, l, delta),
        AlgoArg::Dp => mdc(g, l, delta),
        AlgoArg::Incremental => mdc_plus(g, l, delta),
    }
}

fn run_mdc(args: MdcArgs) -> Result<(), Failure> {
    let delta = parse_delta(&args.delta)?;
    let g = load(&args.input.input, &args.input.bucket)?;
    let start = Instant::now();
    let result = mine(&g, args.l, delta, args.algo).map_err(anyhow::Error::from)?;
    log::info!("core of {} nodes in {:.2?}", result.nodes.len(), start.elapsed());
    result.verify(&g).map_err(anyhow::Error::from)?;
    emit(args.input.output.as_deref(), &mdc_json(&g, &result))
}

fn run_pomdc(args: PomdcArgs) -> Result<(), Failure> {
    let Some(g) = read_graph(&args.input.input, &args.input.bucket)? else {
        return emit(args.input.output.as_deref(), &serde_json::json!([]));
    };
    let start = Instant::now();
    let points = if args.no_prune { pomdc_baseline(&g) } else { pomdc(&g) }.map_err(anyhow::Error::from)?;
    log::info!("{} frontier points in {:.2?}", points.len(), start.elapsed());
    emit(args.input.output.as_deref(), &frontier_json(&g, &points))
}

fn run_metrics(args: MetricsArgs) -> Result<(), Failure> {
    let g = load(&args.input.input, &args.input.bucket)?;
    let text = std::fs::read_to_string(&args.nodes).with_context(|| format!("reading {}", args.nodes.display()))?;
    let mut members = NodeMask::empty(g.n());
    for label in text.split_whitespace() {
        let u = g
            .node_by_label(label)
            .ok_or_else(|| anyhow!("node {label:?} does not occur in the graph"))?;
        members.insert(u);
    }
    let report = metric_report(&g, &members).map_err(anyhow::Error::from)?;
    emit(args.input.output.as_deref(), &serde_json::to_value(report).map_err(anyhow::Error::from)?)
}

fn run_gen(args: GenArgs) -> Result<(), Failure> {
    let bursts = args
        .bursts
        .iter()
        .map(|b| b.parse::<Burst>())
        .collect::<burstcore::Result<Vec<_>>>()
        .map_err(anyhow::Error::from)?;
    let config = GenConfig {
        n: args.n,
        horizon: args.horizon,
        background: args.background,
        bursts,
        seed: args.seed,
    };
    let generated = generate(&config).map_err(anyhow::Error::from)?;
    let mut out = BufWriter::new(
        File::create(&args.output).with_context(|| format!("creating {}", args.output.display()))?,
    );
    generated.write_edge_list(&mut out).map_err(anyhow::Error::from)?;
    out.flush().map_err(anyhow::Error::from)?;
    let mut sidecar = args.output.clone().into_os_string();
    sidecar.push(".planted");
    let mut planted = BufWriter::new(File::create(&sidecar).context("creating the planted sidecar")?);
    generated.write_planted(&mut planted).map_err(anyhow::Error::from)?;
    planted.flush().map_err(anyhow::Error::from)?;
    log::info!("wrote {} edges", generated.edges.len());
    Ok(())
}

fn median_ms<T>(reps: usize, mut f: impl FnMut() -> anyhow::Result<T>) -> anyhow::Result<(f64, T)> {
    let mut times = Vec::with_capacity(reps);
    let mut last = None;
    for _ in 0..reps {
        let start = Instant::now();
        last = Some(f()?);
        times.push(start.elapsed().as_secs_f64() * 1e3);
    }
    times.sort_by(f64::total_cmp);
    Ok((times[reps / 2], last.expect("reps >= 1")))
}

fn run_bench(args: BenchArgs) -> Result<(), Failure> {
    if args.reps < 3 {
        return Err(anyhow!("--reps must be at least 3").into());
    }
    let delta = parse_delta(&args.delta)?;
    let mut csv = String::from("instance,algo,median_ms,nodes_out\n");
    for path in &args.inputs {
        let g = load(path, &args.bucket)?;
        let name = path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned());
        let mut timings = Vec::new();
        for (label, algo) in [("mdc-b", AlgoArg::Baseline), ("mdc", AlgoArg::Dp), ("mdc+", AlgoArg::Incremental)] {
            let (ms, result) = median_ms(args.reps, || Ok(mine(&g, args.l, delta, algo)?))?;
            csv.push_str(&format!("{name},{label},{ms:.3},{}\n", result.nodes.len()));
            timings.push(ms);
        }
        eprintln!("{name}: mdc-b / mdc+ speedup {:.2}", timings[0] / timings[2]);
        if args.frontier {
            let (pruned, f) = median_ms(args.reps, || Ok(pomdc(&g)?))?;
            let (full, fb) = median_ms(args.reps, || Ok(pomdc_baseline(&g)?))?;
            let size = |f: &[burstcore::ParetoPoint]| f.iter().map(|p| p.nodes.len()).sum::<usize>();
            csv.push_str(&format!("{name},pomdc,{pruned:.3},{}\n", size(&f)));
            csv.push_str(&format!("{name},pomdc-b,{full:.3},{}\n", size(&fb)));
            eprintln!("{name}: pomdc-b / pomdc speedup {:.2}", full / pruned);
        }
    }
    write_text(args.output.as_deref(), &csv)?;
    Ok(())
}
