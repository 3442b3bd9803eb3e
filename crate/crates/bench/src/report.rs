use std::fmt;
use std::time::{Duration, Instant};

use fpq_core::{eval_query_timed, EvalError, HeterogeneousDb, Phase, PhaseReport, Query};

use crate::workload::{bundled_queries, gen_map_graph, gen_orders, MapGraph, DEFAULT_POINTS};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchConfig {
    pub seed: u64,
    pub n_points: usize,
    /// Filler tuples per relation, one benchmark column each.
    pub sizes: Vec<usize>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig { seed: 42, n_points: DEFAULT_POINTS, sizes: vec![10_000, 100_000, 1_000_000] }
    }
}

/// One query's phase reports, one per size.
#[derive(Clone, Debug)]
pub struct QueryRun {
    pub name: String,
    pub reports: Vec<PhaseReport>,
}

#[derive(Clone, Debug)]
pub struct BenchReport {
    pub sizes: Vec<usize>,
    pub map_triples: usize,
    pub queries: Vec<QueryRun>,
    /// Wall time including data generation.
    pub elapsed: Duration,
}

pub fn run_benchmark(cfg: &BenchConfig) -> Result<BenchReport, EvalError> {
    let map = gen_map_graph(cfg.seed, cfg.n_points);
    run_benchmark_on(&map, cfg, &bundled_queries())
}

/// Sizes run in order; within a size the queries run one after another on
/// the same database.
pub fn run_benchmark_on(map: &MapGraph, cfg: &BenchConfig, queries: &[(&str, Query)]) -> Result<BenchReport, EvalError> {
    let start = Instant::now();
    let mut runs: Vec<QueryRun> =
        queries.iter().map(|(name, _)| QueryRun { name: name.to_string(), reports: Vec::new() }).collect();
    for &size in &cfg.sizes {
        let data = gen_orders(cfg.seed, size, map);
        let d = HeterogeneousDb::new(map.graph.clone(), data.database());
        for (run, (_, q)) in runs.iter_mut().zip(queries) {
            let (_, report) = eval_query_timed(&d, q)?;
            run.reports.push(report);
        }
    }
    Ok(BenchReport { sizes: cfg.sizes.clone(), map_triples: map.graph.len(), queries: runs, elapsed: start.elapsed() })
}

/// `1234567` as `1,234,567`.
pub fn grouped(n: usize) -> String {
    let digits = n.to_string();
    let mut out = String::new();
    for (i, c) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(c);
    }
    out
}

impl BenchReport {
    /// Long form: `query  phase  tuples  time_ms  solutions`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("query\tphase\ttuples\ttime_ms\tsolutions\n");
        for run in &self.queries {
            for phase in Phase::ALL {
                for (size, report) in self.sizes.iter().zip(&run.reports) {
                    let stat = report.get(phase);
                    out.push_str(&format!(
                        "{}\t{}\t{}\t{:.3}\t{}\n",
                        run.name,
                        phase.label(),
                        size,
                        stat.time_ms(),
                        stat.solutions
                    ));
                }
            }
        }
        out
    }

    /// Line-chart data: total time per query and size.
    pub fn chart_csv(&self) -> String {
        let mut out = String::from("query,tuples,total_ms\n");
        for run in &self.queries {
            for (size, report) in self.sizes.iter().zip(&run.reports) {
                out.push_str(&format!("{},{},{:.3}\n", run.name, size, report.total.time_ms()));
            }
        }
        out
    }

    /// RDF-phase solution counts per query, one entry per size.
    pub fn rdf_solutions(&self) -> Vec<(String, Vec<usize>)> {
        self.queries.iter().map(|r| (r.name.clone(), r.reports.iter().map(|p| p.rdf.solutions).collect())).collect()
    }
}

const CELL: usize = 22;

impl fmt::Display for BenchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rule = format!("+{}+{}", "-".repeat(16), format!("{}+", "-".repeat(CELL)).repeat(self.sizes.len()));
        writeln!(f, "{rule}")?;
        write!(f, "| {:<6} {:<7} |", "Query", "")?;
        for size in &self.sizes {
            write!(f, "{:^width$}|", format!("{} tuples", grouped(*size)), width = CELL)?;
        }
        writeln!(f)?;
        write!(f, "| {:<14} |", "")?;
        for _ in &self.sizes {
            write!(f, " {:>9} {:>10} |", "Time", "Solutions")?;
        }
        writeln!(f)?;
        writeln!(f, "{rule}")?;
        for run in &self.queries {
            for (i, phase) in Phase::ALL.into_iter().enumerate() {
                let name = if i == 0 { run.name.as_str() } else { "" };
                write!(f, "| {:<6} {:<7} |", name, phase.label())?;
                for report in &run.reports {
                    let stat = report.get(phase);
                    write!(f, " {:>9.1} {:>10} |", stat.time_ms(), grouped(stat.solutions))?;
                }
                writeln!(f)?;
            }
            writeln!(f, "{rule}")?;
        }
        write!(f, "Times in ms; map graph of {} triples.", grouped(self.map_triples))
    }
}
