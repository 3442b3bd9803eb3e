//! Evaluation of nested regular expressions and nre-triple patterns.
//!
//! Two routes compute the same relation. [`eval_nre`] materializes every
//! sub-expression as a pair set. [`eval_nre_directed`] compiles the
//! expression to an ε-NFA and explores the product with the graph from each
//! seed, which is what query evaluation uses.

mod algebra;
pub(crate) mod automaton;

use std::collections::{BTreeSet, HashSet};

use crate::graph::{Constant, NodeId, RdfGraph};
use crate::model::{Mapping, MappingSet, NreExpr, Term, TriplePattern};

pub(crate) use automaton::Plan;

/// Which end of the relation the seeds constrain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Seeds are sources: pairs `(seed, b)`.
    Forward,
    /// Seeds are targets: pairs `(a, seed)`.
    Backward,
}

fn decode(g: &RdfGraph, pairs: impl IntoIterator<Item = (NodeId, NodeId)>) -> BTreeSet<(Constant, Constant)> {
    pairs.into_iter().map(|(a, b)| (g.term(a).clone(), g.term(b).clone())).collect()
}

/// `⟦e⟧_G` as a set of pairs.
pub fn eval_nre(g: &RdfGraph, e: &NreExpr) -> BTreeSet<(Constant, Constant)> {
    decode(g, algebra::eval(g, e))
}

/// The pairs of `⟦e⟧_G` whose source (forward) or target (backward) is one
/// of `seeds`. Seeds outside the active domain contribute nothing.
pub fn eval_nre_directed(
    g: &RdfGraph,
    e: &NreExpr,
    seeds: &BTreeSet<Constant>,
    direction: Direction,
) -> BTreeSet<(Constant, Constant)> {
    let plan = Plan::for_nre(g, e);
    let ids: Vec<NodeId> = seeds.iter().filter_map(|c| g.id_of(c.as_str())).collect();
    decode(g, seeded_pairs(&plan, &ids, direction))
}

/// Pairs `(a, b)` oriented as in the relation, for every seed.
pub(crate) fn seeded_pairs(plan: &Plan<'_>, seeds: &[NodeId], direction: Direction) -> Vec<(NodeId, NodeId)> {
    let mut scratch = plan.scratch();
    let mut reached = Vec::new();
    let mut out = Vec::new();
    for &s in seeds {
        reached.clear();
        plan.reach(s, direction, &mut scratch, &mut reached);
        out.extend(reached.iter().map(|&r| match direction {
            Direction::Forward => (s, r),
            Direction::Backward => (r, s),
        }));
    }
    out
}

/// Every pair of the relation, exploring from whichever end has fewer
/// candidate seeds.
pub(crate) fn all_pairs(plan: &Plan<'_>) -> Vec<(NodeId, NodeId)> {
    let fwd = plan.candidates(Direction::Forward);
    let bwd = plan.candidates(Direction::Backward);
    if fwd.len() <= bwd.len() {
        seeded_pairs(plan, &fwd, Direction::Forward)
    } else {
        seeded_pairs(plan, &bwd, Direction::Backward)
    }
}

/// `⟦(u, e, v)⟧_G`.
pub fn eval_triple_pattern(g: &RdfGraph, t: &TriplePattern) -> MappingSet {
    pattern_mappings(&Plan::for_nre(g, &t.path), t, None, None)
}

/// Mappings of `t` whose subject value lies in `subjects` and object value
/// in `objects` (when given). Constants in `t` seed the traversal; otherwise
/// the smaller of the two value sets does, and with neither every candidate
/// is tried.
pub(crate) fn pattern_mappings(
    plan: &Plan<'_>,
    t: &TriplePattern,
    subjects: Option<&BTreeSet<Constant>>,
    objects: Option<&BTreeSet<Constant>>,
) -> MappingSet {
    let g = plan.graph();
    let ids = |term: &Term, given: Option<&BTreeSet<Constant>>| -> Option<Vec<NodeId>> {
        match term {
            Term::Const(c) => Some(g.id_of(c.as_str()).into_iter().collect()),
            Term::Var(_) => given.map(|set| set.iter().filter_map(|c| g.id_of(c.as_str())).collect()),
        }
    };
    let subj = ids(&t.subject, subjects);
    let obj = ids(&t.object, objects);
    let pairs = match (&subj, &obj) {
        (Some(s), Some(o)) if s.len() <= o.len() => seeded_pairs(plan, s, Direction::Forward),
        (_, Some(o)) => seeded_pairs(plan, o, Direction::Backward),
        (Some(s), None) => seeded_pairs(plan, s, Direction::Forward),
        (None, None) => all_pairs(plan),
    };
    // The seeded end already satisfies its constraint; the other end may not.
    let as_set = |v: Option<Vec<NodeId>>| v.map(|v| v.into_iter().collect::<HashSet<NodeId>>());
    let (subj_filter, obj_filter) = (as_set(subj), as_set(obj));
    let mut out = MappingSet::new();
    for (a, b) in pairs {
        if subj_filter.as_ref().is_some_and(|f| !f.contains(&a)) || obj_filter.as_ref().is_some_and(|f| !f.contains(&b)) {
            continue;
        }
        let mut m = Mapping::empty();
        let mut ok = true;
        for (term, value) in [(&t.subject, a), (&t.object, b)] {
            if let Term::Var(v) = term {
                ok &= m.bind(v.clone(), g.term(value).clone());
            }
        }
        if ok {
            out.insert(m);
        }
    }
    out
}
