//! Reference semantics by direct set construction, random instance
//! generation, and the structural tools (induced graphs, fragment flags) used
//! by the property tests.
//!
//! Nothing here shares code with the evaluators it checks.

mod classify;
mod generate;
mod induced;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::federator::HeterogeneousDb;
use crate::graph::{Constant, RdfGraph};
use crate::model::{AxisBase, Mapping, MappingSet, NreExpr, PpExpr, Query, Term, Variable};

pub use classify::{classify_fragment, FragmentFlags};
pub use generate::{
    gen_nre, gen_p_rdf, gen_pp, gen_random, gen_strongly_acyclic, run_check, CheckFailure, CheckReport, Profile,
};
pub use induced::{induced_graph, is_strongly_acyclic, InducedGraph};

/// Default refusal bound on `|adom(G)|`.
pub const DEFAULT_BOUND: usize = 64;

/// Refusal bound on the number of variable assignments tried per rule.
const ASSIGNMENT_BOUND: u128 = 5_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance too large for brute force: {what} is {size}, bound is {bound}")]
    TooLarge { what: &'static str, size: u128, bound: u128 },
    #[error("relation {0} is not declared")]
    Undeclared(String),
    #[error("atom {name} has {found} arguments, relation has arity {expected}")]
    Arity { name: String, expected: usize, found: usize },
    #[error("not a p-RDF graph: {0}")]
    NotPRdf(String),
}

type Rel = BTreeSet<(Constant, Constant)>;

fn check_bound(g: &RdfGraph, bound: usize) -> Result<(), OracleError> {
    let n = g.adom().len();
    if n > bound {
        return Err(OracleError::TooLarge { what: "|adom(G)|", size: n as u128, bound: bound as u128 });
    }
    Ok(())
}

fn compose(l: &Rel, r: &Rel) -> Rel {
    let mut out = Rel::new();
    for (a, b) in l {
        for (c, d) in r {
            if b == c {
                out.insert((a.clone(), d.clone()));
            }
        }
    }
    out
}

fn identity(g: &RdfGraph) -> Rel {
    g.adom().into_iter().map(|c| (c.clone(), c)).collect()
}

/// `⟦self⟧ ∪ R ∪ R/R ∪ ...` by repeated composition until nothing changes.
fn reflexive_closure(g: &RdfGraph, r: &Rel) -> Rel {
    let mut x: Rel = identity(g).union(r).cloned().collect();
    loop {
        let next: Rel = x.union(&compose(&x, r)).cloned().collect();
        if next == x {
            return x;
        }
        x = next;
    }
}

/// `⟦e⟧_G`, transcribed clause by clause.
pub fn brute_eval_nre(g: &RdfGraph, e: &NreExpr) -> Result<Rel, OracleError> {
    brute_eval_nre_bounded(g, e, DEFAULT_BOUND)
}

pub fn brute_eval_nre_bounded(g: &RdfGraph, e: &NreExpr, bound: usize) -> Result<Rel, OracleError> {
    check_bound(g, bound)?;
    Ok(nre_rel(g, e))
}

fn nre_rel(g: &RdfGraph, e: &NreExpr) -> Rel {
    let triples: Vec<_> = g.triples().collect();
    // The forward pair of `base::c` contributed by (s, p, o), with its label.
    let step = |base: AxisBase, s: &Constant, p: &Constant, o: &Constant| -> (Constant, Constant, Constant) {
        match base {
            AxisBase::Next => (s.clone(), o.clone(), p.clone()),
            AxisBase::Edge => (s.clone(), p.clone(), o.clone()),
            AxisBase::Node => (p.clone(), o.clone(), s.clone()),
            AxisBase::Self_ => unreachable!(),
        }
    };
    let axis_rel = |axis: crate::model::Axis, label_ok: &dyn Fn(&Constant) -> bool| -> Rel {
        let mut out = Rel::new();
        for t in &triples {
            let (a, b, c) = step(axis.base(), &t.s, &t.p, &t.o);
            if label_ok(&c) {
                out.insert(if axis.is_inverted() { (b, a) } else { (a, b) });
            }
        }
        out
    };
    match e {
        NreExpr::Axis(a) if a.is_self() => identity(g),
        NreExpr::Axis(a) => axis_rel(*a, &|_| true),
        NreExpr::AxisConst(a, c) if a.is_self() => identity(g).into_iter().filter(|(x, _)| x == c).collect(),
        NreExpr::AxisConst(a, c) => axis_rel(*a, &|l| l == c),
        NreExpr::AxisNest(a, inner) => {
            let has_successor: BTreeSet<Constant> = nre_rel(g, inner).into_iter().map(|(x, _)| x).collect();
            if a.is_self() {
                has_successor.into_iter().map(|x| (x.clone(), x)).collect()
            } else {
                axis_rel(*a, &|l| has_successor.contains(l))
            }
        }
        NreExpr::Concat(l, r) => compose(&nre_rel(g, l), &nre_rel(g, r)),
        NreExpr::Alt(l, r) => nre_rel(g, l).union(&nre_rel(g, r)).cloned().collect(),
        NreExpr::Star(inner) => reflexive_closure(g, &nre_rel(g, inner)),
    }
}

/// `⟦elt⟧_G` for property paths, transcribed clause by clause.
pub fn brute_eval_pp(g: &RdfGraph, elt: &PpExpr) -> Result<Rel, OracleError> {
    check_bound(g, DEFAULT_BOUND)?;
    Ok(pp_rel(g, elt))
}

fn pp_rel(g: &RdfGraph, elt: &PpExpr) -> Rel {
    let triples: Vec<_> = g.triples().collect();
    match elt {
        PpExpr::Iri(c) => triples.iter().filter(|t| &t.p == c).map(|t| (t.s.clone(), t.o.clone())).collect(),
        PpExpr::Seq(l, r) => compose(&pp_rel(g, l), &pp_rel(g, r)),
        PpExpr::Alt(l, r) => pp_rel(g, l).union(&pp_rel(g, r)).cloned().collect(),
        PpExpr::Inv(e) => pp_rel(g, e).into_iter().map(|(a, b)| (b, a)).collect(),
        PpExpr::Opt(e) => identity(g).union(&pp_rel(g, e)).cloned().collect(),
        PpExpr::Plus(e) => {
            let r = pp_rel(g, e);
            let mut x = r.clone();
            loop {
                let next: Rel = x.union(&compose(&x, &r)).cloned().collect();
                if next == x {
                    return x;
                }
                x = next;
            }
        }
        PpExpr::Star(e) => reflexive_closure(g, &pp_rel(g, e)),
        PpExpr::NegSet { forward, inverse } => {
            let linked = |a: &Constant, b: &Constant, p: &Constant| triples.iter().any(|t| &t.s == a && &t.p == p && &t.o == b);
            let mut out = Rel::new();
            for t in &triples {
                if !forward.is_empty() && !forward.iter().any(|f| linked(&t.s, &t.o, f)) {
                    out.insert((t.s.clone(), t.o.clone()));
                }
                if !inverse.is_empty() && !inverse.iter().any(|f| linked(&t.s, &t.o, f)) {
                    out.insert((t.o.clone(), t.s.clone()));
                }
            }
            out
        }
    }
}

/// `⟦q⟧_𝔻` by trying every assignment of the rule's variables to
/// `adom(G)` ∪ relational constants ∪ query constants.
pub fn brute_eval_query(d: &HeterogeneousDb, q: &Query) -> Result<MappingSet, OracleError> {
    check_bound(&d.graph, DEFAULT_BOUND)?;
    let mut universe: BTreeSet<Constant> = d.graph.adom();
    for r in d.db.relations() {
        universe.extend(r.constants());
    }
    let universe: Vec<Constant> = universe.into_iter().collect();
    let mut out = MappingSet::new();
    for rule in &q.rules {
        let mut vars: BTreeSet<Variable> = rule.body_vars();
        vars.extend(rule.head_vars());
        let vars: Vec<Variable> = vars.into_iter().collect();
        let count = (universe.len() as u128).checked_pow(vars.len() as u32).unwrap_or(u128::MAX);
        if count > ASSIGNMENT_BOUND {
            return Err(OracleError::TooLarge { what: "assignment count", size: count, bound: ASSIGNMENT_BOUND });
        }
        let paths: Vec<Rel> = rule.triple_atoms.iter().map(|t| nre_rel(&d.graph, &t.path)).collect();
        let mut tables: Vec<BTreeSet<Vec<Constant>>> = Vec::new();
        for a in &rule.rel_atoms {
            let rel = d.db.get(&a.name).ok_or_else(|| OracleError::Undeclared(a.name.clone()))?;
            if rel.arity() != a.args.len() {
                return Err(OracleError::Arity { name: a.name.clone(), expected: rel.arity(), found: a.args.len() });
            }
            tables.push(rel.tuples().map(<[Constant]>::to_vec).collect());
        }
        if universe.is_empty() && !vars.is_empty() {
            continue;
        }
        let mut digits = vec![0usize; vars.len()];
        'assignments: loop {
            let mu: BTreeMap<&Variable, &Constant> = vars.iter().zip(&digits).map(|(v, &i)| (v, &universe[i])).collect();
            let value = |t: &Term| -> Constant {
                match t {
                    Term::Var(v) => mu[v].clone(),
                    Term::Const(c) => c.clone(),
                }
            };
            let graph_ok =
                rule.triple_atoms.iter().zip(&paths).all(|(t, rel)| rel.contains(&(value(&t.subject), value(&t.object))));
            let rel_ok = rule
                .rel_atoms
                .iter()
                .zip(&tables)
                .all(|(a, table)| table.contains(&a.args.iter().map(value).collect::<Vec<_>>()));
            if graph_ok && rel_ok {
                let head = rule.head_vars();
                out.insert(Mapping::from_pairs(head.iter().map(|v| (v.clone(), mu[v].clone()))));
            }
            // Advance the odometer.
            for d in digits.iter_mut() {
                *d += 1;
                if *d < universe.len() {
                    continue 'assignments;
                }
                *d = 0;
            }
            break;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Triple;
    use crate::parser::{parse_nre, parse_pp, parse_query};
    use crate::relation::RelDatabase;

    fn g(triples: &[(&str, &str, &str)]) -> RdfGraph {
        RdfGraph::from_triples(triples.iter().map(|&(s, p, o)| Triple::new(s, p, o)))
    }

    fn pairs(items: &[(&str, &str)]) -> Rel {
        items.iter().map(|&(a, b)| (a.into(), b.into())).collect()
    }

    #[test]
    fn oracle_examples() {
        let two_hop = g(&[("a", "p", "b"), ("b", "q", "c"), ("a", "r", "c")]);
        assert_eq!(brute_eval_nre(&two_hop, &parse_nre("next::p/next::q").unwrap()).unwrap(), pairs(&[("a", "c")]));
        assert!(brute_eval_nre(&g(&[]), &parse_nre("self").unwrap()).unwrap().is_empty());
        let q = parse_query("q(?x,?y) :- (?x, (next::p)/(next::q), ?y), (?x, next::r, ?y)").unwrap();
        let d = HeterogeneousDb::new(two_hop, RelDatabase::new());
        let expected: MappingSet = [Mapping::from_pairs([("x", "a"), ("y", "c")])].into_iter().collect();
        assert_eq!(brute_eval_query(&d, &q).unwrap(), expected);
    }

    #[test]
    fn empty_database() {
        let d = HeterogeneousDb::default();
        assert!(brute_eval_query(&d, &parse_query("q(?x,?y) :- (?x, self, ?y)").unwrap()).unwrap().is_empty());
        assert!(brute_eval_query(&d, &parse_query("q(a,a) :- (a, self, a)").unwrap()).unwrap().is_empty());
    }

    #[test]
    fn negated_sets() {
        let graph = g(&[("a", "q", "b"), ("a", "p", "b")]);
        assert!(brute_eval_pp(&graph, &parse_pp("!p").unwrap()).unwrap().is_empty());
        assert_eq!(brute_eval_pp(&g(&[("a", "q", "b")]), &parse_pp("!p").unwrap()).unwrap(), pairs(&[("a", "b")]));
    }

    #[test]
    fn refuses_large_graphs() {
        let big = RdfGraph::from_triples((0..40).map(|i| Triple::new(format!("s{i}"), "p", format!("o{i}"))));
        assert!(matches!(brute_eval_nre(&big, &parse_nre("next").unwrap()), Err(OracleError::TooLarge { .. })));
        assert!(brute_eval_nre_bounded(&big, &parse_nre("next").unwrap(), 100).is_ok());
    }
}
