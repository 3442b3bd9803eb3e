use std::collections::BTreeMap;

use crate::graph::{Constant, RdfGraph};

use super::OracleError;

/// Node-labelled undirected multigraph. Nodes `0..subjects_objects` are the
/// merged subject/object nodes; the rest are one predicate node per triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedGraph {
    pub labels: Vec<Constant>,
    pub edges: Vec<(usize, usize)>,
}

impl InducedGraph {
    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Union-find cycle detection. Parallel edges count as a cycle.
    pub fn is_acyclic(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.labels.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return false;
            }
            parent[ra] = rb;
        }
        true
    }
}

/// The predicate shared by every triple of a p-RDF graph.
fn p_rdf_predicate(g: &RdfGraph) -> Result<Option<Constant>, OracleError> {
    let mut p: Option<Constant> = None;
    for t in g.triples() {
        match &p {
            None => p = Some(t.p.clone()),
            Some(q) if *q != t.p => return Err(OracleError::NotPRdf(format!("{t} uses predicate {} besides {q}", t.p))),
            _ => {}
        }
    }
    if let Some(p) = &p {
        if let Some(t) = g.triples().find(|t| t.s == *p || t.o == *p) {
            return Err(OracleError::NotPRdf(format!("{t} has the predicate {p} as subject or object")));
        }
    }
    Ok(p)
}

/// Each triple `(a, p, b)` contributes a fresh `p` node joined to the nodes
/// labelled `a` and `b`; subject and object nodes with equal labels merge.
pub fn induced_graph(g: &RdfGraph) -> Result<InducedGraph, OracleError> {
    p_rdf_predicate(g)?;
    let mut labels = Vec::new();
    let mut index: BTreeMap<Constant, usize> = BTreeMap::new();
    for t in g.triples() {
        for c in [&t.s, &t.o] {
            if !index.contains_key(c) {
                index.insert(c.clone(), labels.len());
                labels.push(c.clone());
            }
        }
    }
    let mut edges = Vec::new();
    for t in g.triples() {
        let u = labels.len();
        labels.push(t.p.clone());
        edges.push((index[&t.s], u));
        edges.push((u, index[&t.o]));
    }
    Ok(InducedGraph { labels, edges })
}

pub fn is_strongly_acyclic(g: &RdfGraph) -> Result<bool, OracleError> {
    Ok(induced_graph(g)?.is_acyclic())
}
