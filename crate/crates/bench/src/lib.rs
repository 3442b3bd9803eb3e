//! Synthetic map/taxi workload and the per-phase benchmark report.

pub mod report;
pub mod workload;

pub use report::{run_benchmark, run_benchmark_on, BenchConfig, BenchReport, QueryRun};
pub use workload::{bundled_queries, emit, gen_map_graph, gen_orders, MapGraph, MapPoint, TaxiData};
