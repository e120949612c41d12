//! Command-line front end: exact counts, seeded experiments, parameter
//! sweeps and graph generation.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use ldp_tri::experiment::{
    run_bench, run_experiment, write_csv, BenchSpec, ExperimentSpec, GraphSource, DEFAULT_CELL_CAP,
};
use ldp_tri::graph::{
    exact_counts, generate_ba, read_edge_list_file, sample_induced, write_edge_list,
};
use serde_json::{json, Map, Value};

/// Worker-thread count for trials; unset means one per core.
const THREADS_ENV: &str = "LDP_TRI_THREADS";

#[derive(Parser)]
#[command(
    name = "ldp-tri",
    version,
    about = "Triangle counting under edge local differential privacy"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print exact subgraph counts of a graph.
    Exact {
        /// Edge-list path, `ba:<n>:<m>` or `sample:<n>:<path>`.
        graph: String,
        /// Seed for generated or sampled graphs.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print JSON instead of `key value` lines.
        #[arg(long)]
        json: bool,
    },
    /// Run one experiment and write one CSV row per trial plus summaries.
    Run(RunArgs),
    /// Sweep a parameter grid and write one summary row per cell.
    Bench(BenchArgs),
    /// Generate a Barabási–Albert graph as an edge list.
    GenBa {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Induced subgraph on uniformly sampled nodes, relabelled in order.
    Sample {
        input: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// JSON experiment spec; flags override its fields.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long)]
    graph: Option<String>,
    /// full | onens | twons | rr-biased | rr-unbiased | arr-unbiased | cluster
    #[arg(long)]
    algorithm: Option<String>,
    /// none | edge | double
    #[arg(long)]
    clipping: Option<String>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    eps0: Option<f64>,
    #[arg(long)]
    eps1: Option<f64>,
    #[arg(long)]
    eps2: Option<f64>,
    #[arg(long)]
    mu_star: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    p2: Option<f64>,
    #[arg(long)]
    star_epsilon: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Link rate in bits per second for transfer times.
    #[arg(long)]
    link_bps: Option<f64>,
    #[arg(long)]
    max_noisy_edges: Option<f64>,
    /// Fill the runtime column (output is then not byte-reproducible).
    #[arg(long)]
    timing: bool,
    /// Write per-trial JSON transcripts of two-round runs here.
    #[arg(long)]
    transcript: Option<PathBuf>,
    /// CSV destination; stdout when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// JSON grid spec; flags override its fields.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    graphs: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',')]
    algorithms: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',')]
    clippings: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',')]
    epsilons: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    mu_stars: Option<Vec<f64>>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    cell_cap: Option<usize>,
    /// Leave the runtime column empty for byte-reproducible output.
    #[arg(long)]
    no_timing: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    configure_threads()?;
    match cli.command {
        Command::Exact { graph, seed, json } => cmd_exact(&graph, seed, json),
        Command::Run(args) => cmd_run(args),
        Command::Bench(args) => cmd_bench(args),
        Command::GenBa { n, m, seed, output } => {
            let g = generate_ba(n, m, seed).context("generating BA graph")?;
            write_edge_list(&g, sink(output.as_deref())?)?;
            Ok(())
        }
        Command::Sample {
            input,
            n,
            seed,
            output,
        } => {
            let g = read_edge_list_file(&input)
                .with_context(|| format!("reading {}", input.display()))?;
            let s = sample_induced(&g, n, seed)?;
            write_edge_list(&s, sink(output.as_deref())?)?;
            Ok(())
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .with_context(|| format!("{THREADS_ENV}={raw:?} is not a thread count"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()?;
    Ok(())
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn cmd_exact(graph: &str, seed: u64, as_json: bool) -> Result<()> {
    let source: GraphSource = graph.parse()?;
    let g = source
        .load(seed)
        .with_context(|| format!("loading {source}"))?;
    let counts = serde_json::to_value(exact_counts(&g))?;
    let mut out = io::stdout().lock();
    if as_json {
        writeln!(out, "{}", serde_json::to_string_pretty(&counts)?)?;
    } else {
        print_flat(&mut out, "", &counts)?;
    }
    Ok(())
}

fn print_flat(out: &mut impl Write, prefix: &str, v: &Value) -> io::Result<()> {
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                print_flat(out, &key, child)?;
            }
            Ok(())
        }
        Value::Null => writeln!(out, "{prefix} NA"),
        other => writeln!(out, "{prefix} {other}"),
    }
}

fn read_object(path: Option<&Path>) -> Result<Map<String, Value>> {
    let Some(path) = path else {
        return Ok(Map::new());
    };
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    match serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))? {
        Value::Object(map) => Ok(map),
        _ => bail!("{} must hold a JSON object", path.display()),
    }
}

/// Inserts `value` under `key` when the flag was given.
fn set<T: Into<Value>>(map: &mut Map<String, Value>, key: &str, value: Option<T>) {
    if let Some(v) = value {
        map.insert(key.to_string(), v.into());
    }
}

fn cmd_run(args: RunArgs) -> Result<()> {
    let mut m = read_object(args.spec.as_deref())?;
    set(&mut m, "graph", args.graph);
    set(
        &mut m,
        "algorithm",
        args.algorithm.map(|a| a.to_ascii_lowercase()),
    );
    set(
        &mut m,
        "clipping",
        args.clipping.map(|c| c.to_ascii_lowercase()),
    );
    set(&mut m, "epsilon", args.epsilon);
    set(&mut m, "eps0", args.eps0);
    set(&mut m, "eps1", args.eps1);
    set(&mut m, "eps2", args.eps2);
    set(&mut m, "mu_star", args.mu_star);
    set(&mut m, "alpha", args.alpha);
    set(&mut m, "beta", args.beta);
    set(&mut m, "p2", args.p2);
    set(&mut m, "star_epsilon", args.star_epsilon);
    set(&mut m, "trials", args.trials);
    set(&mut m, "seed", args.seed);
    set(&mut m, "link_bps", args.link_bps);
    set(&mut m, "max_noisy_edges", args.max_noisy_edges);
    if args.timing {
        m.insert("timing".into(), true.into());
    }
    for required in ["graph", "algorithm"] {
        if !m.contains_key(required) {
            bail!("missing --{required} (or a spec file providing it)");
        }
    }
    let spec: ExperimentSpec =
        serde_json::from_value(Value::Object(m)).context("invalid experiment spec")?;
    spec.validate().context("invalid experiment spec")?;

    let out = run_experiment(&spec, args.transcript.is_some())?;
    write_csv(&out.rows, sink(args.output.as_deref())?)?;
    if let Some(path) = args.transcript {
        let runs = out
            .transcripts
            .iter()
            .map(|t| serde_json::from_str(t))
            .collect::<serde_json::Result<Vec<Value>>>()?;
        let mut f = sink(Some(&path))?;
        serde_json::to_writer_pretty(&mut f, &Value::Array(runs))?;
        writeln!(f)?;
    }
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    let mut m = read_object(args.spec.as_deref())?;
    let defaults = json!({
        "clippings": ["double"],
        "epsilons": [1.0],
        "mu_stars": [1e-3],
        "trials": 10,
        "seed": 0,
        "cell_cap": DEFAULT_CELL_CAP,
        "timing": true,
    });
    if let Value::Object(d) = defaults {
        for (k, v) in d {
            m.entry(k).or_insert(v);
        }
    }
    let lower = |v: Vec<String>| {
        v.into_iter()
            .map(|s| s.trim().to_ascii_lowercase())
            .collect::<Vec<_>>()
    };
    set(&mut m, "graphs", args.graphs);
    set(&mut m, "algorithms", args.algorithms.map(lower));
    set(&mut m, "clippings", args.clippings.map(lower));
    set(&mut m, "epsilons", args.epsilons);
    set(&mut m, "mu_stars", args.mu_stars);
    set(&mut m, "trials", args.trials);
    set(&mut m, "seed", args.seed);
    set(&mut m, "cell_cap", args.cell_cap);
    if args.no_timing {
        m.insert("timing".into(), false.into());
    }
    for required in ["graphs", "algorithms"] {
        if !m.contains_key(required) {
            bail!("missing --{required} (or a spec file providing it)");
        }
    }
    let spec: BenchSpec = serde_json::from_value(Value::Object(m)).context("invalid bench spec")?;
    let rows = run_bench(&spec)?;
    write_csv(&rows, sink(args.output.as_deref())?)?;
    Ok(())
}
