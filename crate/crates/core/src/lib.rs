//! Federated path queries over heterogeneous databases.
//!
//! A heterogeneous database pairs an in-memory RDF graph with a set of named
//! relational tables. Queries are unions of rules; each rule conjoins
//! nested-regular-expression triple patterns over the graph with relational
//! atoms over the tables:
//!
//! ```text
//! q(?x, ?y) :- (?x, next^-1::lon/next::lat, ?y), Orders(?id, "2019-03-01", ?d, ?v, ?p, ?x, ?y)
//! ```
//!
//! The crate is split along the evaluation pipeline:
//!
//! - [`graph`]: triple store with SPO/POS/OSP indexes, paths and traces.
//! - [`relation`]: CSV-backed relations and relational atom evaluation.
//! - [`model`]: expression and query ASTs plus the mapping algebra.
//! - [`parser`]: concrete syntax for expressions, property paths and queries.
//! - [`nre`]: nested regular expression evaluation (product automaton and
//!   compositional routes).
//! - [`pp`]: SPARQL 1.1 property paths and their translation into nre.
//! - [`federator`]: rule/query evaluation, membership, phase timing, output.
//! - [`oracle`]: brute-force reference semantics, generators and checkers.

pub mod federator;
pub mod graph;
pub mod model;
pub mod nre;
pub mod oracle;
pub mod parser;
pub mod pp;
pub mod relation;

pub use federator::{
    decide_membership, eval_query, eval_query_timed, eval_rule, explain, to_json, to_tsv, EvalError,
    HeterogeneousDb, Phase, PhaseReport, PhaseStat,
};
pub use graph::{load_graph, parse_graph_str, Constant, GraphError, Path, RdfGraph, TraceLabel, Triple};
pub use model::{
    Axis, AxisBase, Mapping, MappingSet, NreExpr, PpExpr, Query, Rule, Term, TriplePattern,
    ValidationError, Variable,
};
pub use nre::{eval_nre, eval_nre_directed, eval_triple_pattern, Direction};
pub use parser::{parse_nre, parse_pp, parse_query, ParseError, SourceSpan};
pub use pp::{eval_pp, pp_to_nre, PpError};
pub use relation::{eval_atom, eval_conjunction, load_relation, RelAtom, RelDatabase, Relation, RelationError};
