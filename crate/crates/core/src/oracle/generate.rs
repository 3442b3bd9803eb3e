use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::federator::{decide_membership, eval_query, eval_query_timed, HeterogeneousDb};
use crate::graph::{Constant, RdfGraph, Triple};
use crate::model::{Axis, Mapping, NreExpr, PpExpr, Query, Rule, Term, TriplePattern, Variable};
use crate::nre::{eval_nre, eval_nre_directed, Direction};
use crate::relation::{RelAtom, RelDatabase, Relation};

use super::{brute_eval_nre, brute_eval_query};

/// Size bounds for random instances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    /// Constants available to graphs and relations.
    pub vocab: usize,
    /// Distinct constants one graph draws its triples from.
    pub max_nodes: usize,
    pub max_triples: usize,
    pub max_relations: usize,
    pub max_arity: usize,
    pub max_tuples: usize,
    pub nre_depth: usize,
    pub max_atoms: usize,
    pub max_rules: usize,
    /// Allow constants in query terms and `axis::c` steps.
    pub constants: bool,
}

impl Default for Profile {
    fn default() -> Self {
        Profile {
            vocab: 8,
            max_nodes: 8,
            max_triples: 20,
            max_relations: 3,
            max_arity: 3,
            max_tuples: 10,
            nre_depth: 3,
            max_atoms: 3,
            max_rules: 3,
            constants: true,
        }
    }
}

impl Profile {
    /// Single-rule, graph-only queries.
    pub fn cnrpq() -> Self {
        Profile { max_relations: 0, max_rules: 1, ..Profile::default() }
    }

    fn vocab_constants(&self) -> Vec<Constant> {
        (0..self.vocab)
            .map(|i| match i {
                0..=25 => Constant::from(((b'a' + i as u8) as char).to_string()),
                _ => Constant::from(format!("k{i}")),
            })
            .collect()
    }
}

/// A constant that never occurs in generated data.
const ABSENT: &str = "zz";

const VARS: [&str; 4] = ["x", "y", "z", "w"];

fn nre_with<R: Rng>(rng: &mut R, depth: usize, pick: &mut impl FnMut(&mut R) -> Option<Constant>) -> NreExpr {
    if depth == 0 || rng.gen_bool(0.35) {
        let axis = *Axis::ALL.choose(rng).unwrap();
        return match rng.gen_bool(0.5).then(|| pick(rng)).flatten() {
            Some(c) => NreExpr::axis_const(axis, c),
            None => NreExpr::axis(axis),
        };
    }
    match rng.gen_range(0..4) {
        0 => NreExpr::nest(*Axis::ALL.choose(rng).unwrap(), nre_with(rng, depth - 1, pick)),
        1 => NreExpr::concat(nre_with(rng, depth - 1, pick), nre_with(rng, depth - 1, pick)),
        2 => NreExpr::alt(nre_with(rng, depth - 1, pick), nre_with(rng, depth - 1, pick)),
        _ => NreExpr::star(nre_with(rng, depth - 1, pick)),
    }
}

/// Random nre of at most `depth` levels; constants come from `pool` (none
/// when empty).
pub fn gen_nre<R: Rng>(rng: &mut R, depth: usize, pool: &[Constant]) -> NreExpr {
    nre_with(rng, depth, &mut |r: &mut R| pool.choose(r).cloned())
}

/// Random property path over the IRIs in `pool` (non-empty).
pub fn gen_pp<R: Rng>(rng: &mut R, depth: usize, pool: &[Constant], negation: bool) -> PpExpr {
    if depth == 0 || rng.gen_bool(0.35) {
        if negation && rng.gen_bool(0.25) {
            let mut forward = BTreeSet::new();
            let mut inverse = BTreeSet::new();
            for _ in 0..rng.gen_range(1..=3) {
                let c = pool.choose(rng).unwrap().clone();
                if rng.gen_bool(0.5) {
                    forward.insert(c);
                } else {
                    inverse.insert(c);
                }
            }
            return PpExpr::NegSet { forward, inverse };
        }
        return PpExpr::Iri(pool.choose(rng).unwrap().clone());
    }
    let sub = |rng: &mut R| gen_pp(rng, depth - 1, pool, negation);
    match rng.gen_range(0..6) {
        0 => PpExpr::seq(sub(rng), sub(rng)),
        1 => PpExpr::alt(sub(rng), sub(rng)),
        2 => PpExpr::inv(sub(rng)),
        3 => PpExpr::opt(sub(rng)),
        4 => PpExpr::plus(sub(rng)),
        _ => PpExpr::star(sub(rng)),
    }
}

fn gen_graph<R: Rng>(rng: &mut R, p: &Profile, vocab: &[Constant]) -> RdfGraph {
    if p.max_triples == 0 || vocab.is_empty() {
        return RdfGraph::new();
    }
    let k = rng.gen_range(1..=p.max_nodes.min(vocab.len()).max(1));
    let nodes: Vec<Constant> = vocab.choose_multiple(rng, k).cloned().collect();
    let n = rng.gen_range(0..=p.max_triples);
    RdfGraph::from_triples((0..n).map(|_| {
        let mut c = || nodes.choose(rng).unwrap().clone();
        Triple { s: c(), p: c(), o: c() }
    }))
}

fn gen_db<R: Rng>(rng: &mut R, p: &Profile, vocab: &[Constant], adom: &[Constant]) -> RelDatabase {
    let mut db = RelDatabase::new();
    if vocab.is_empty() {
        return db;
    }
    for i in 0..rng.gen_range(0..=p.max_relations) {
        let arity = rng.gen_range(1..=p.max_arity.max(1));
        let rows: Vec<Vec<Constant>> = (0..rng.gen_range(0..=p.max_tuples))
            .map(|_| {
                (0..arity)
                    .map(|_| {
                        let from = if !adom.is_empty() && rng.gen_bool(0.5) { adom } else { vocab };
                        from.choose(rng).unwrap().clone()
                    })
                    .collect()
            })
            .collect();
        db.insert(Relation::new(format!("R{i}"), arity, rows).expect("arity is positive")).expect("fresh name");
    }
    db
}

/// Deterministic random instance: a graph, a relational database and a
/// validated query over them.
pub fn gen_random(seed: u64, p: &Profile) -> (HeterogeneousDb, Query) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vocab = p.vocab_constants();
    let graph = gen_graph(&mut rng, p, &vocab);
    let adom: Vec<Constant> = graph.adom().into_iter().collect();
    let db = gen_db(&mut rng, p, &vocab, &adom);
    let relations: Vec<(String, usize)> = db.relations().map(|r| (r.name().to_string(), r.arity())).collect();

    let mut consts: Vec<Constant> = vocab.clone();
    consts.push(Constant::from(ABSENT));
    let mut pick = |rng: &mut ChaCha8Rng| -> Option<Constant> {
        if !p.constants {
            return None;
        }
        let from = if !adom.is_empty() && rng.gen_bool(0.3) { &adom } else { &consts };
        from.choose(rng).cloned()
    };
    let term = |rng: &mut ChaCha8Rng, pick: &mut dyn FnMut(&mut ChaCha8Rng) -> Option<Constant>| -> Term {
        if rng.gen_bool(0.2) {
            if let Some(c) = pick(rng) {
                return Term::Const(c);
            }
        }
        Term::var(VARS.choose(rng).unwrap())
    };

    let head = if p.constants && rng.gen_bool(0.1) {
        (Term::Const(pick(&mut rng).unwrap()), Term::Const(pick(&mut rng).unwrap()))
    } else if rng.gen_bool(0.1) {
        (Term::var("x"), Term::var("x"))
    } else {
        (Term::var("x"), Term::var("y"))
    };
    let rules = (0..rng.gen_range(1..=p.max_rules.max(1)))
        .map(|_| {
            let mut rule = Rule::new("q", head.clone());
            let first = nre_with(&mut rng, p.nre_depth, &mut pick);
            rule.triple_atoms.push(TriplePattern::new(head.0.clone(), first, head.1.clone()));
            for _ in 1..rng.gen_range(1..=p.max_atoms.max(1)) {
                if !relations.is_empty() && rng.gen_bool(0.3) {
                    let (name, arity) = relations.choose(&mut rng).unwrap().clone();
                    let args = (0..arity).map(|_| term(&mut rng, &mut pick)).collect();
                    rule.rel_atoms.push(RelAtom::new(name, args));
                } else {
                    let s = term(&mut rng, &mut pick);
                    let e = nre_with(&mut rng, p.nre_depth, &mut pick);
                    let o = term(&mut rng, &mut pick);
                    rule.triple_atoms.push(TriplePattern::new(s, e, o));
                }
            }
            rule
        })
        .collect();
    let q = Query::new(rules).expect("the first atom binds every head variable");
    (HeterogeneousDb::new(graph, db), q)
}

/// Random p-RDF graph over `nodes` constants `n0, n1, ...` with predicate `p`.
pub fn gen_p_rdf(seed: u64, nodes: usize, triples: usize) -> RdfGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names: Vec<String> = (0..nodes.max(1)).map(|i| format!("n{i}")).collect();
    RdfGraph::from_triples((0..triples).map(|_| {
        Triple::new(names.choose(&mut rng).unwrap().as_str(), "p", names.choose(&mut rng).unwrap().as_str())
    }))
}

/// Random strongly acyclic p-RDF graph: a random forest over `nodes`
/// constants with each edge oriented at random.
pub fn gen_strongly_acyclic(seed: u64, nodes: usize) -> RdfGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut triples = Vec::new();
    for i in 1..nodes {
        if rng.gen_bool(0.8) {
            let j = rng.gen_range(0..i);
            let (a, b) = (format!("n{i}"), format!("n{j}"));
            triples.push(if rng.gen_bool(0.5) { Triple::new(a, "p", b) } else { Triple::new(b, "p", a) });
        }
    }
    RdfGraph::from_triples(triples)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckFailure {
    pub seed: u64,
    pub query: String,
    pub detail: String,
}

/// Outcome of a differential run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub cases: usize,
    pub passed: usize,
    pub failures: Vec<CheckFailure>,
}

impl CheckReport {
    pub fn all_passed(&self) -> bool {
        self.passed == self.cases
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}/{} ok", self.passed, self.cases)?;
        for fail in &self.failures {
            writeln!(f, "seed {}: {}\n  query: {}", fail.seed, fail.detail, fail.query)?;
        }
        Ok(())
    }
}

fn check_case(seed: u64, profile: &Profile) -> Result<(), String> {
    let (d, q) = gen_random(seed, profile);
    for t in q.rules.iter().flat_map(|r| &r.triple_atoms) {
        let expected = brute_eval_nre(&d.graph, &t.path).map_err(|e| e.to_string())?;
        if eval_nre(&d.graph, &t.path) != expected {
            return Err(format!("eval_nre differs on {}", t.path));
        }
        if eval_nre_directed(&d.graph, &t.path, &d.graph.adom(), Direction::Forward) != expected {
            return Err(format!("directed evaluation differs on {}", t.path));
        }
    }
    let expected = brute_eval_query(&d, &q).map_err(|e| e.to_string())?;
    let got = eval_query(&d, &q).map_err(|e| e.to_string())?;
    if got != expected {
        return Err(format!("query result {got:?}, oracle {expected:?}"));
    }
    let (timed, report) = eval_query_timed(&d, &q).map_err(|e| e.to_string())?;
    if timed != expected || report.total.solutions != expected.len() {
        return Err("timed evaluation differs".to_string());
    }
    // Membership: every answer, plus a few arbitrary candidates.
    let mut universe: Vec<Constant> = d.graph.adom().into_iter().collect();
    universe.push(Constant::from(ABSENT));
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
    let head = q.head_vars();
    let mut candidates: Vec<Mapping> = expected.iter().cloned().collect();
    for _ in 0..3 {
        candidates.push(Mapping::from_pairs(
            head.iter().map(|v: &Variable| (v.clone(), universe.choose(&mut rng).unwrap().clone())),
        ));
    }
    for mu in candidates {
        let member = decide_membership(&d, &q, &mu).map_err(|e| e.to_string())?;
        if member != expected.contains(&mu) {
            return Err(format!("membership of {mu:?} decided {member}"));
        }
    }
    Ok(())
}

/// Compare every evaluator with the oracle on `cases` instances generated
/// from consecutive seeds starting at `seed`.
pub fn run_check(cases: usize, seed: u64, profile: &Profile) -> CheckReport {
    let mut report = CheckReport { cases, ..Default::default() };
    for i in 0..cases as u64 {
        let s = seed.wrapping_add(i);
        match check_case(s, profile) {
            Ok(()) => report.passed += 1,
            Err(detail) => {
                let query = gen_random(s, profile).1.to_string();
                report.failures.push(CheckFailure { seed: s, query, detail });
            }
        }
    }
    report
}
