//! Whole-relation evaluation: each sub-expression is materialized as a set of
//! node pairs and combined with union, composition and a semi-naive closure.
//! Quadratic in the worst case; used for full evaluation and as the second
//! route that directed evaluation is checked against.

use std::collections::{HashMap, HashSet};

use crate::graph::{NodeId, RdfGraph};
use crate::model::{Axis, AxisBase, NreExpr};

pub(crate) type Pairs = HashSet<(NodeId, NodeId)>;

pub(crate) fn eval(g: &RdfGraph, e: &NreExpr) -> Pairs {
    match e {
        NreExpr::Axis(a) if a.is_self() => identity(g),
        NreExpr::Axis(a) => axis_pairs(g, *a, |_| true),
        NreExpr::AxisConst(a, c) => match g.id_of(c.as_str()) {
            None => Pairs::new(),
            Some(id) if a.is_self() => Pairs::from([(id, id)]),
            Some(id) => axis_pairs(g, *a, |l| l == id),
        },
        NreExpr::AxisNest(a, inner) => {
            let sources: HashSet<NodeId> = eval(g, inner).into_iter().map(|(s, _)| s).collect();
            if a.is_self() {
                sources.into_iter().map(|s| (s, s)).collect()
            } else {
                axis_pairs(g, *a, |l| sources.contains(&l))
            }
        }
        NreExpr::Concat(l, r) => compose(&eval(g, l), &eval(g, r)),
        NreExpr::Alt(l, r) => {
            let mut out = eval(g, l);
            out.extend(eval(g, r));
            out
        }
        NreExpr::Star(inner) => closure(g, &eval(g, inner)),
    }
}

fn identity(g: &RdfGraph) -> Pairs {
    (0..g.node_count() as NodeId).map(|i| (i, i)).collect()
}

/// Pairs of `axis::c` for every label `c` accepted by `keep`.
fn axis_pairs(g: &RdfGraph, axis: Axis, keep: impl Fn(NodeId) -> bool) -> Pairs {
    let mut out = Pairs::new();
    for &[s, p, o] in g.encoded_triples() {
        // (from, to, label) of the forward axis on this triple.
        let (from, to, label) = match axis.base() {
            AxisBase::Next => (s, o, p),
            AxisBase::Edge => (s, p, o),
            AxisBase::Node => (p, o, s),
            AxisBase::Self_ => unreachable!("self handled by caller"),
        };
        if keep(label) {
            out.insert(if axis.is_inverted() { (to, from) } else { (from, to) });
        }
    }
    out
}

fn successors_of(r: &Pairs) -> HashMap<NodeId, Vec<NodeId>> {
    let mut by_source: HashMap<NodeId, Vec<NodeId>> = HashMap::new();
    for &(a, b) in r {
        by_source.entry(a).or_default().push(b);
    }
    by_source
}

fn compose(l: &Pairs, r: &Pairs) -> Pairs {
    let next = successors_of(r);
    let mut out = Pairs::new();
    for &(a, b) in l {
        if let Some(cs) = next.get(&b) {
            out.extend(cs.iter().map(|&c| (a, c)));
        }
    }
    out
}

/// `⟦self⟧ ∪ R ∪ R∘R ∪ ...`, extending only the pairs found last round.
fn closure(g: &RdfGraph, r: &Pairs) -> Pairs {
    let next = successors_of(r);
    let mut out = identity(g);
    let mut delta: Vec<(NodeId, NodeId)> = r.iter().copied().filter(|p| out.insert(*p)).collect();
    while !delta.is_empty() {
        let mut fresh = Vec::new();
        for (a, b) in delta {
            if let Some(cs) = next.get(&b) {
                for &c in cs {
                    if out.insert((a, c)) {
                        fresh.push((a, c));
                    }
                }
            }
        }
        delta = fresh;
    }
    out
}
