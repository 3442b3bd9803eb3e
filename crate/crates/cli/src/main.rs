//! `fpq`: run federated path queries, cross-check the engine against the
//! oracle, and run the synthetic benchmark.

use std::fmt;
use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fpq_bench::{emit, gen_map_graph, gen_orders, run_benchmark_on, workload::bundled_queries, BenchConfig};
use fpq_core::oracle::{classify_fragment, run_check, Profile};
use fpq_core::{
    eval_query, eval_query_timed, explain, load_graph, parse_query, to_json, to_tsv, HeterogeneousDb, ParseError,
    Query, RdfGraph, RelDatabase,
};

#[derive(Parser)]
#[command(name = "fpq", version, about = "Federated path queries over an RDF graph and CSV relations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a query file against a graph and a relation manifest.
    Query(QueryArgs),
    /// Compare the engine with the brute-force oracle on random instances.
    Check(CheckArgs),
    /// Run q1-q4 on the synthetic map and taxi data.
    Bench(BenchArgs),
    /// Print the operators a query uses.
    Classify(ClassifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Args)]
struct QueryArgs {
    /// Triple file, one `S P O .` per line.
    #[arg(long)]
    graph: PathBuf,
    /// JSON manifest listing the CSV relations.
    #[arg(long)]
    db: Option<PathBuf>,
    #[arg(long)]
    query: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
    /// Report per-phase time and solution counts on stderr.
    #[arg(long)]
    time: bool,
    /// Print the evaluation plan on stderr.
    #[arg(long)]
    explain: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ProfileName {
    Default,
    Cnrpq,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, default_value_t = 100)]
    cases: usize,
    #[arg(long, env = "FPQ_SEED", default_value_t = 42)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = ProfileName::Default)]
    profile: ProfileName,
}

#[derive(Args)]
struct BenchArgs {
    /// Filler tuples per relation, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [10_000usize, 100_000, 1_000_000])]
    sizes: Vec<usize>,
    /// Points in the map graph.
    #[arg(long, default_value_t = fpq_bench::workload::DEFAULT_POINTS)]
    points: usize,
    #[arg(long, env = "FPQ_SEED", default_value_t = 42)]
    seed: u64,
    /// Also write the generated data, one subdirectory per size.
    #[arg(long)]
    emit_dir: Option<PathBuf>,
    /// Write size/total-time chart data as CSV.
    #[arg(long)]
    chart: Option<PathBuf>,
    /// Long-form TSV instead of the table.
    #[arg(long)]
    tsv: bool,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    query: PathBuf,
}

/// Error plus the exit status it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    fn user(error: impl Into<anyhow::Error>) -> Self {
        Failure { code: 1, error: error.into() }
    }

    fn internal(error: impl Into<anyhow::Error>) -> Self {
        Failure { code: 2, error: error.into() }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error: {:#}", self.error)
    }
}

type Outcome = Result<(), Failure>;

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display())).map_err(Failure::user)
}

/// Parse error with the offending source line and a caret underline.
fn render_parse_error(path: &Path, text: &str, e: &ParseError) -> anyhow::Error {
    let Some(span) = e.span() else {
        return anyhow!("{}: {e}", path.display());
    };
    let line = text.lines().nth(span.line.saturating_sub(1)).unwrap_or("");
    let width = text[span.start..span.end.max(span.start)].chars().count().max(1);
    let gutter = span.line.to_string();
    anyhow!(
        "{}:{e}\n{gutter} | {line}\n{} | {}{}",
        path.display(),
        " ".repeat(gutter.len()),
        " ".repeat(span.column.saturating_sub(1)),
        "^".repeat(width)
    )
}

fn load_query(path: &Path) -> Result<Query, Failure> {
    let text = read_text(path)?;
    parse_query(&text).map_err(|e| Failure::user(render_parse_error(path, &text, &e)))
}

fn load_graph_file(path: &Path) -> Result<RdfGraph, Failure> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display())).map_err(Failure::user)?;
    load_graph(BufReader::new(file)).with_context(|| format!("graph {}", path.display())).map_err(Failure::user)
}

fn write_out(text: &str) -> Outcome {
    let mut out = io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        r => r.map_err(Failure::internal),
    }
}

fn run_query(args: QueryArgs) -> Outcome {
    let query = load_query(&args.query)?;
    let graph = load_graph_file(&args.graph)?;
    let db = match &args.db {
        Some(path) => RelDatabase::load_manifest(path).map_err(Failure::user)?,
        None => RelDatabase::new(),
    };
    let d = HeterogeneousDb::new(graph, db);
    // Relational errors at this point (undeclared names, arity) come from the query text.
    if args.explain {
        eprintln!("{}", explain(&d, &query).map_err(Failure::user)?);
    }
    let results = if args.time {
        let (results, report) = eval_query_timed(&d, &query).map_err(Failure::user)?;
        eprintln!("{report}");
        results
    } else {
        eval_query(&d, &query).map_err(Failure::user)?
    };
    match args.format {
        Format::Tsv => write_out(&to_tsv(&query, &results)),
        Format::Json => {
            let json = serde_json::to_string_pretty(&to_json(&query, &results)).map_err(Failure::internal)?;
            write_out(&(json + "\n"))
        }
    }
}

fn run_check_command(args: CheckArgs) -> Outcome {
    let profile = match args.profile {
        ProfileName::Default => Profile::default(),
        ProfileName::Cnrpq => Profile::cnrpq(),
    };
    let report = run_check(args.cases, args.seed, &profile);
    write_out(&report.to_string())?;
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure::internal(anyhow!("{} of {} cases disagree with the oracle", report.failures.len(), report.cases)))
    }
}

fn run_bench(args: BenchArgs) -> Outcome {
    if args.points < 2 {
        return Err(Failure::user(anyhow!("--points must be at least 2")));
    }
    let cfg = BenchConfig { seed: args.seed, n_points: args.points, sizes: args.sizes };
    let map = gen_map_graph(cfg.seed, cfg.n_points);
    if let Some(dir) = &args.emit_dir {
        for &size in &cfg.sizes {
            let target = dir.join(size.to_string());
            emit(&target, &map, &gen_orders(cfg.seed, size, &map))
                .with_context(|| format!("cannot write {}", target.display()))
                .map_err(Failure::user)?;
        }
    }
    let report = run_benchmark_on(&map, &cfg, &bundled_queries()).map_err(Failure::internal)?;
    if let Some(path) = &args.chart {
        std::fs::write(path, report.chart_csv())
            .with_context(|| format!("cannot write {}", path.display()))
            .map_err(Failure::user)?;
    }
    if args.tsv {
        write_out(&report.to_tsv())
    } else {
        write_out(&format!("{report}\n"))
    }
}

fn run_classify(args: ClassifyArgs) -> Outcome {
    let query = load_query(&args.query)?;
    write_out(&format!("{}\n", classify_fragment(&query)))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Query(args) => run_query(args),
        Command::Check(args) => run_check_command(args),
        Command::Bench(args) => run_bench(args),
        Command::Classify(args) => run_classify(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("{failure}");
            ExitCode::from(failure.code)
        }
    }
}
