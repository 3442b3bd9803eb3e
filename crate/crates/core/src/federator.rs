//! Evaluation of federated queries over a heterogeneous database.
//!
//! The default evaluator starts from the relational conjunction and then adds
//! graph atoms one at a time, seeding each traversal from values already
//! bound. The timed evaluator instead runs the graph part and the relational
//! part independently and joins them at the end, so each phase can be
//! measured on its own. Both return the same mappings.

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::graph::{Constant, RdfGraph};
use crate::model::{Mapping, MappingSet, Query, Rule, Term, TriplePattern, Variable};
use crate::nre::{pattern_mappings, Plan};
use crate::relation::{eval_conjunction, RelDatabase, RelationError};

/// `𝔻 = (G, 𝒟)`.
#[derive(Clone, Debug, Default)]
pub struct HeterogeneousDb {
    pub graph: RdfGraph,
    pub db: RelDatabase,
}

impl HeterogeneousDb {
    pub fn new(graph: RdfGraph, db: RelDatabase) -> Self {
        HeterogeneousDb { graph, db }
    }
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error(transparent)]
    Relation(#[from] RelationError),
    #[error("mapping binds {found}, query head has {expected}")]
    DomainMismatch { expected: String, found: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phase {
    Rdf,
    RelDb,
    Joining,
    Total,
}

impl Phase {
    pub const ALL: [Phase; 4] = [Phase::Rdf, Phase::RelDb, Phase::Joining, Phase::Total];

    pub fn label(self) -> &'static str {
        match self {
            Phase::Rdf => "RDF",
            Phase::RelDb => "Rel-DB",
            Phase::Joining => "Joining",
            Phase::Total => "Total",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PhaseStat {
    pub elapsed: Duration,
    pub solutions: usize,
    pub atoms: usize,
}

impl PhaseStat {
    pub fn time_ms(&self) -> f64 {
        self.elapsed.as_secs_f64() * 1000.0
    }
}

/// Per-phase wall time and solution counts of one timed evaluation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PhaseReport {
    pub rdf: PhaseStat,
    pub rel_db: PhaseStat,
    pub joining: PhaseStat,
    pub total: PhaseStat,
}

impl PhaseReport {
    pub fn get(&self, phase: Phase) -> &PhaseStat {
        match phase {
            Phase::Rdf => &self.rdf,
            Phase::RelDb => &self.rel_db,
            Phase::Joining => &self.joining,
            Phase::Total => &self.total,
        }
    }

    fn get_mut(&mut self, phase: Phase) -> &mut PhaseStat {
        match phase {
            Phase::Rdf => &mut self.rdf,
            Phase::RelDb => &mut self.rel_db,
            Phase::Joining => &mut self.joining,
            Phase::Total => &mut self.total,
        }
    }

    /// `phase\ttime_ms\tsolutions` with a header line.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("phase\ttime_ms\tsolutions\n");
        for p in Phase::ALL {
            let s = self.get(p);
            out.push_str(&format!("{}\t{:.3}\t{}\n", p.label(), s.time_ms(), s.solutions));
        }
        out
    }
}

impl fmt::Display for PhaseReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<8} {:>10} {:>10} {:>6}", "phase", "time_ms", "solutions", "atoms")?;
        for p in Phase::ALL {
            let s = self.get(p);
            writeln!(f, "{:<8} {:>10.3} {:>10} {:>6}", p.label(), s.time_ms(), s.solutions, s.atoms)?;
        }
        Ok(())
    }
}

/// `⟦q_i(u, v)⟧_𝔻` for one rule.
pub fn eval_rule(d: &HeterogeneousDb, r: &Rule) -> Result<MappingSet, EvalError> {
    eval_rule_traced(d, r, &mut None)
}

/// Union over all rules.
pub fn eval_query(d: &HeterogeneousDb, q: &Query) -> Result<MappingSet, EvalError> {
    let mut out = MappingSet::new();
    for r in &q.rules {
        out = out.union(eval_rule(d, r)?);
    }
    Ok(out)
}

/// Whether `mu ∈ ⟦q⟧_𝔻`, decided by substituting `mu` into each rule and
/// checking the resulting boolean rule.
pub fn decide_membership(d: &HeterogeneousDb, q: &Query, mu: &Mapping) -> Result<bool, EvalError> {
    let head: BTreeSet<Variable> = q.head_vars().into_iter().collect();
    let dom: BTreeSet<Variable> = mu.domain().cloned().collect();
    if head != dom {
        let show = |s: &BTreeSet<Variable>| s.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
        return Err(EvalError::DomainMismatch { expected: format!("{{{}}}", show(&head)), found: format!("{{{}}}", show(&dom)) });
    }
    for r in &q.rules {
        if !eval_rule(d, &substitute(r, mu))?.is_empty() {
            return Ok(true);
        }
    }
    Ok(false)
}

fn substitute(r: &Rule, mu: &Mapping) -> Rule {
    let sub = |t: &Term| match t {
        Term::Var(v) => mu.get(v).map_or_else(|| t.clone(), |c| Term::Const(c.clone())),
        Term::Const(_) => t.clone(),
    };
    let mut out = Rule::new(r.name.clone(), (sub(&r.head.0), sub(&r.head.1)));
    for t in &r.triple_atoms {
        out.triple_atoms.push(TriplePattern::new(sub(&t.subject), t.path.clone(), sub(&t.object)));
    }
    for a in &r.rel_atoms {
        let mut a = a.clone();
        a.args = a.args.iter().map(sub).collect();
        out.rel_atoms.push(a);
    }
    out
}

/// Evaluate with each phase run and timed separately, then joined.
pub fn eval_query_timed(d: &HeterogeneousDb, q: &Query) -> Result<(MappingSet, PhaseReport), EvalError> {
    let start = Instant::now();
    let mut report = PhaseReport::default();
    let mut out = MappingSet::new();
    for r in &q.rules {
        let t = Instant::now();
        let mut graph_part = MappingSet::unit();
        for atom in &r.triple_atoms {
            let plan = Plan::for_nre(&d.graph, &atom.path);
            graph_part = graph_part.join(&pattern_mappings(&plan, atom, None, None));
        }
        record(&mut report, Phase::Rdf, t.elapsed(), graph_part.len(), r.triple_atoms.len());

        let t = Instant::now();
        let rel_part = if r.rel_atoms.is_empty() { MappingSet::unit() } else { eval_conjunction(&d.db, &r.rel_atoms)? };
        let rel_count = if r.rel_atoms.is_empty() { 0 } else { rel_part.len() };
        record(&mut report, Phase::RelDb, t.elapsed(), rel_count, r.rel_atoms.len());

        let t = Instant::now();
        let joined = graph_part.join(&rel_part).restrict(&r.head_vars());
        out = out.union(joined);
        record(&mut report, Phase::Joining, t.elapsed(), 0, 0);
    }
    report.joining.solutions = out.len();
    report.total = PhaseStat { elapsed: start.elapsed(), solutions: out.len(), atoms: q.rules.iter().map(Rule::atom_count).sum() };
    Ok((out, report))
}

fn record(report: &mut PhaseReport, phase: Phase, elapsed: Duration, solutions: usize, atoms: usize) {
    let s = report.get_mut(phase);
    s.elapsed += elapsed;
    s.solutions += solutions;
    s.atoms += atoms;
}

/// The evaluation order chosen for each rule, with intermediate sizes.
pub fn explain(d: &HeterogeneousDb, q: &Query) -> Result<String, EvalError> {
    let mut lines = Vec::new();
    for (i, r) in q.rules.iter().enumerate() {
        let mut trace = Some(Vec::new());
        let out = eval_rule_traced(d, r, &mut trace)?;
        lines.push(format!("rule {}: {r}", i + 1));
        lines.extend(trace.unwrap_or_default().into_iter().map(|s| format!("  {s}")));
        lines.push(format!("  project onto {} -> {} mappings", show_vars(&r.head_vars()), out.len()));
    }
    Ok(lines.join("\n") + "\n")
}

fn show_vars(vars: &[Variable]) -> String {
    if vars.is_empty() {
        return "()".to_string();
    }
    vars.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

/// How a graph atom is seeded given the variables bound so far.
fn seeding(t: &TriplePattern, bound: &BTreeSet<Variable>) -> (u8, &'static str) {
    let fixed = |term: &Term| match term {
        Term::Const(_) => 2,
        Term::Var(v) if bound.contains(v) => 1,
        Term::Var(_) => 0,
    };
    match (fixed(&t.subject), fixed(&t.object)) {
        (2, _) | (_, 2) => (0, "from constant"),
        (1, _) | (_, 1) => (1, "from bound values"),
        _ => (2, "unseeded"),
    }
}

fn eval_rule_traced(d: &HeterogeneousDb, r: &Rule, trace: &mut Option<Vec<String>>) -> Result<MappingSet, EvalError> {
    let mut acc = if r.rel_atoms.is_empty() { MappingSet::unit() } else { eval_conjunction(&d.db, &r.rel_atoms)? };
    let mut bound: BTreeSet<Variable> = r.rel_atoms.iter().flat_map(|a| a.variables().cloned()).collect();
    if let Some(lines) = trace.as_mut() {
        if !r.rel_atoms.is_empty() {
            let atoms: Vec<String> = r.rel_atoms.iter().map(ToString::to_string).collect();
            lines.push(format!("relational {} -> {} mappings", atoms.join(", "), acc.len()));
        }
    }
    let mut remaining: Vec<&TriplePattern> = r.triple_atoms.iter().collect();
    while !remaining.is_empty() && !acc.is_empty() {
        let distinct = |term: &Term| match term {
            Term::Var(v) if bound.contains(v) => acc.values_of(v).len(),
            _ => usize::MAX,
        };
        let pick = (0..remaining.len())
            .min_by_key(|&i| {
                let t = remaining[i];
                (seeding(t, &bound).0, distinct(&t.subject).min(distinct(&t.object)), t.path.size())
            })
            .unwrap();
        let t = remaining.swap_remove(pick);
        let values = |term: &Term| match term {
            Term::Var(v) if bound.contains(v) => Some(acc.values_of(v)),
            _ => None,
        };
        let (subjects, objects) = (values(&t.subject), values(&t.object));
        let plan = Plan::for_nre(&d.graph, &t.path);
        let found = pattern_mappings(&plan, t, subjects.as_ref(), objects.as_ref());
        let how = seeding(t, &bound).1;
        acc = acc.join(&found);
        bound.extend(t.variables().cloned());
        if let Some(lines) = trace.as_mut() {
            lines.push(format!("graph {t} [{how}] -> {} matches, {} joined", found.len(), acc.len()));
        }
    }
    Ok(acc.restrict(&r.head_vars()))
}

fn escape_tsv(s: &str) -> String {
    s.replace('\\', "\\\\").replace('\t', "\\t").replace('\n', "\\n")
}

/// Rows in head-variable order, sorted.
fn rows(q: &Query, results: &MappingSet) -> Vec<Vec<Constant>> {
    let head = q.head_vars();
    let mut rows: Vec<Vec<Constant>> =
        results.iter().map(|m| head.iter().map(|v| m.get(v).cloned().expect("restricted to head")).collect()).collect();
    rows.sort();
    rows
}

/// TSV with a header of variable names; `true`/`false` for boolean queries.
pub fn to_tsv(q: &Query, results: &MappingSet) -> String {
    if q.is_boolean() {
        return format!("{}\n", !results.is_empty());
    }
    let head = q.head_vars();
    let mut out = head.iter().map(|v| escape_tsv(v.name())).collect::<Vec<_>>().join("\t");
    out.push('\n');
    for row in rows(q, results) {
        out.push_str(&row.iter().map(|c| escape_tsv(c.as_str())).collect::<Vec<_>>().join("\t"));
        out.push('\n');
    }
    out
}

/// A JSON array of objects keyed by variable name; a JSON boolean for
/// boolean queries.
pub fn to_json(q: &Query, results: &MappingSet) -> serde_json::Value {
    if q.is_boolean() {
        return serde_json::Value::Bool(!results.is_empty());
    }
    let head = q.head_vars();
    let items = rows(q, results)
        .into_iter()
        .map(|row| {
            let obj = head
                .iter()
                .zip(row)
                .map(|(v, c)| (v.name().to_string(), serde_json::Value::String(c.as_str().to_string())))
                .collect();
            serde_json::Value::Object(obj)
        })
        .collect();
    serde_json::Value::Array(items)
}
