//! Immutable in-memory RDF graph.
//!
//! Constants are interned into dense ids assigned in lexicographic order, so
//! id order and string order agree. Triples are kept in three sorted
//! permutations (SPO, POS, OSP), each with a per-id offset table so that any
//! probe with a bound leading position is a slice lookup.

use std::borrow::Borrow;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::io::{self, BufRead, Write};
use std::sync::Arc;

use thiserror::Error;

use crate::model::{Axis, AxisBase};

/// Dense identifier of a constant inside one [`RdfGraph`].
pub type NodeId = u32;

/// An element of the constant universe: an IRI or plain token, stored without
/// angle brackets.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constant(Arc<str>);

impl Constant {
    pub fn new(value: impl Into<Arc<str>>) -> Self {
        let value = value.into();
        debug_assert!(!value.is_empty(), "constants are non-empty");
        Constant(value)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Constant {
    fn from(value: &str) -> Self {
        Constant::new(value)
    }
}

impl From<String> for Constant {
    fn from(value: String) -> Self {
        Constant::new(value)
    }
}

impl Borrow<str> for Constant {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub s: Constant,
    pub p: Constant,
    pub o: Constant,
}

impl Triple {
    pub fn new(s: impl Into<Constant>, p: impl Into<Constant>, o: impl Into<Constant>) -> Self {
        Triple { s: s.into(), p: p.into(), o: o.into() }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.s, self.p, self.o)
    }
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("not a path: {from} and {to} (positions {index} and {next}) share no triple", next = .index + 1)]
    NotAPath { index: usize, from: Constant, to: Constant },
    #[error("empty path")]
    EmptyPath,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Which of the three sorted permutations to probe.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexRoute {
    Spo,
    Pos,
    Osp,
}

impl IndexRoute {
    pub const ALL: [IndexRoute; 3] = [IndexRoute::Spo, IndexRoute::Pos, IndexRoute::Osp];

    fn permute(self, [s, p, o]: [NodeId; 3]) -> [NodeId; 3] {
        match self {
            IndexRoute::Spo => [s, p, o],
            IndexRoute::Pos => [p, o, s],
            IndexRoute::Osp => [o, s, p],
        }
    }

    fn unpermute(self, row: [NodeId; 3]) -> [NodeId; 3] {
        match self {
            IndexRoute::Spo => row,
            IndexRoute::Pos => [row[2], row[0], row[1]],
            IndexRoute::Osp => [row[1], row[2], row[0]],
        }
    }
}

#[derive(Clone, Debug, Default)]
struct Index {
    rows: Vec<[NodeId; 3]>,
    offsets: Vec<u32>,
}

impl Index {
    fn build(route: IndexRoute, spo: &[[NodeId; 3]], node_count: usize) -> Self {
        let mut rows: Vec<[NodeId; 3]> = spo.iter().map(|&t| route.permute(t)).collect();
        rows.sort_unstable();
        let mut offsets = vec![0u32; node_count + 1];
        for row in &rows {
            offsets[row[0] as usize + 1] += 1;
        }
        for i in 0..node_count {
            offsets[i + 1] += offsets[i];
        }
        Index { rows, offsets }
    }

    fn probe(&self, key: NodeId) -> &[[NodeId; 3]] {
        let k = key as usize;
        &self.rows[self.offsets[k] as usize..self.offsets[k + 1] as usize]
    }
}

/// A finite set of triples with SPO/POS/OSP access paths.
#[derive(Clone, Debug, Default)]
pub struct RdfGraph {
    terms: Vec<Constant>,
    ids: HashMap<Constant, NodeId>,
    spo: Index,
    pos: Index,
    osp: Index,
}

impl RdfGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_triples<I: IntoIterator<Item = Triple>>(triples: I) -> Self {
        let triples: BTreeSet<Triple> = triples.into_iter().collect();
        let mut terms = BTreeSet::new();
        for t in &triples {
            terms.insert(t.s.clone());
            terms.insert(t.p.clone());
            terms.insert(t.o.clone());
        }
        let terms: Vec<Constant> = terms.into_iter().collect();
        let ids: HashMap<Constant, NodeId> =
            terms.iter().enumerate().map(|(i, c)| (c.clone(), i as NodeId)).collect();
        let encoded: Vec<[NodeId; 3]> =
            triples.iter().map(|t| [ids[&t.s], ids[&t.p], ids[&t.o]]).collect();
        let n = terms.len();
        RdfGraph {
            spo: Index::build(IndexRoute::Spo, &encoded, n),
            pos: Index::build(IndexRoute::Pos, &encoded, n),
            osp: Index::build(IndexRoute::Osp, &encoded, n),
            terms,
            ids,
        }
    }

    /// Number of triples.
    pub fn len(&self) -> usize {
        self.spo.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spo.rows.is_empty()
    }

    /// Number of distinct constants, i.e. `|adom(G)|`.
    pub fn node_count(&self) -> usize {
        self.terms.len()
    }

    /// The active domain: every constant in subject, predicate or object
    /// position.
    pub fn adom(&self) -> BTreeSet<Constant> {
        self.terms.iter().cloned().collect()
    }

    /// Active domain in id order (which is also lexicographic order).
    pub fn terms(&self) -> &[Constant] {
        &self.terms
    }

    pub fn id_of(&self, c: &str) -> Option<NodeId> {
        self.ids.get(c).copied()
    }

    pub fn term(&self, id: NodeId) -> &Constant {
        &self.terms[id as usize]
    }

    pub fn contains(&self, t: &Triple) -> bool {
        match (self.id_of(t.s.as_str()), self.id_of(t.p.as_str()), self.id_of(t.o.as_str())) {
            (Some(s), Some(p), Some(o)) => self.contains_ids(s, p, o),
            _ => false,
        }
    }

    pub fn contains_ids(&self, s: NodeId, p: NodeId, o: NodeId) -> bool {
        self.spo.probe(s).binary_search(&[s, p, o]).is_ok()
    }

    /// Iterate all triples in SPO order.
    pub fn triples(&self) -> impl Iterator<Item = Triple> + '_ {
        self.spo.rows.iter().map(|&[s, p, o]| self.decode([s, p, o]))
    }

    /// Serialize in the format read by [`load_graph`], one triple per line in
    /// index order.
    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        for t in self.triples() {
            writeln!(w, "{} {} {} .", write_term(&t.s)?, write_term(&t.p)?, write_term(&t.o)?)?;
        }
        w.flush()
    }

    pub(crate) fn encoded_triples(&self) -> &[[NodeId; 3]] {
        &self.spo.rows
    }

    fn decode(&self, [s, p, o]: [NodeId; 3]) -> Triple {
        Triple { s: self.term(s).clone(), p: self.term(p).clone(), o: self.term(o).clone() }
    }

    /// Rows `[s, p, o]` with the given subject.
    pub(crate) fn by_subject(&self, s: NodeId) -> &[[NodeId; 3]] {
        self.spo.probe(s)
    }

    /// Rows `[p, o, s]` with the given predicate.
    pub(crate) fn by_predicate(&self, p: NodeId) -> &[[NodeId; 3]] {
        self.pos.probe(p)
    }

    /// Rows `[o, s, p]` with the given object.
    pub(crate) fn by_object(&self, o: NodeId) -> &[[NodeId; 3]] {
        self.osp.probe(o)
    }

    fn index(&self, route: IndexRoute) -> &Index {
        match route {
            IndexRoute::Spo => &self.spo,
            IndexRoute::Pos => &self.pos,
            IndexRoute::Osp => &self.osp,
        }
    }

    /// All triples whose leading component on `route` is `key`.
    pub fn probe(&self, route: IndexRoute, key: &Constant) -> Vec<Triple> {
        let Some(k) = self.id_of(key.as_str()) else {
            return Vec::new();
        };
        self.index(route).probe(k).iter().map(|&row| self.decode(route.unpermute(row))).collect()
    }

    /// Triples agreeing with every bound position. Any bound position routes
    /// the lookup through an index; only the fully unbound pattern scans.
    pub fn match_triples(
        &self,
        s: Option<&Constant>,
        p: Option<&Constant>,
        o: Option<&Constant>,
    ) -> BTreeSet<Triple> {
        let lookup = |c: Option<&Constant>| match c {
            None => Ok(None),
            Some(c) => self.id_of(c.as_str()).map(Some).ok_or(()),
        };
        let (Ok(s), Ok(p), Ok(o)) = (lookup(s), lookup(p), lookup(o)) else {
            return BTreeSet::new();
        };
        let keep = |[ts, tp, to]: [NodeId; 3]| {
            s.is_none_or(|s| s == ts) && p.is_none_or(|p| p == tp) && o.is_none_or(|o| o == to)
        };
        let (route, key) = match (s, p, o) {
            (Some(s), Some(_), _) | (Some(s), None, None) => (IndexRoute::Spo, s),
            (Some(_), None, Some(o)) | (None, None, Some(o)) => (IndexRoute::Osp, o),
            (None, Some(p), _) => (IndexRoute::Pos, p),
            (None, None, None) => return self.triples().collect(),
        };
        self.index(route)
            .probe(key)
            .iter()
            .map(|&row| route.unpermute(row))
            .filter(|&t| keep(t))
            .map(|t| self.decode(t))
            .collect()
    }

    /// Whether `a` and `b` co-occur in some triple (in any positions). For
    /// `a == b` this asks whether `a` occurs at all.
    pub fn co_occur(&self, a: &Constant, b: &Constant) -> bool {
        !self.labels_between(a, b).is_empty()
    }

    /// Every trace label of the step `(a, b)`.
    pub fn labels_between(&self, a: &Constant, b: &Constant) -> BTreeSet<TraceLabel> {
        let mut labels = BTreeSet::new();
        let (Some(ai), Some(bi)) = (self.id_of(a.as_str()), self.id_of(b.as_str())) else {
            return labels;
        };
        if ai == bi {
            labels.insert(TraceLabel::new(Axis::SELF, None));
            labels.insert(TraceLabel::new(Axis::SELF, Some(a.clone())));
        }
        for base in [AxisBase::Next, AxisBase::Edge, AxisBase::Node] {
            for inverted in [false, true] {
                let axis = Axis::new(base, inverted);
                let (from, to) = if inverted { (bi, ai) } else { (ai, bi) };
                let mut found = false;
                for c in self.axis_labels(base, from, to) {
                    found = true;
                    labels.insert(TraceLabel::new(axis, Some(self.term(c).clone())));
                }
                if found {
                    labels.insert(TraceLabel::new(axis, None));
                }
            }
        }
        labels
    }

    /// Constants `c` with `(from, to)` in the forward `base::c` relation.
    fn axis_labels(&self, base: AxisBase, from: NodeId, to: NodeId) -> Vec<NodeId> {
        match base {
            // (from, c, to)
            AxisBase::Next => self.by_subject(from).iter().filter(|r| r[2] == to).map(|r| r[1]).collect(),
            // (from, to, c)
            AxisBase::Edge => self.by_subject(from).iter().filter(|r| r[1] == to).map(|r| r[2]).collect(),
            // (c, from, to)
            AxisBase::Node => self.by_predicate(from).iter().filter(|r| r[1] == to).map(|r| r[2]).collect(),
            AxisBase::Self_ => Vec::new(),
        }
    }

    /// All traces of `path`. A single-node path has exactly the empty trace.
    pub fn traces_of_path(&self, path: &Path) -> Result<BTreeSet<Vec<TraceLabel>>, GraphError> {
        let nodes = path.nodes();
        if nodes.is_empty() {
            return Err(GraphError::EmptyPath);
        }
        let mut steps = Vec::with_capacity(nodes.len().saturating_sub(1));
        for (index, pair) in nodes.windows(2).enumerate() {
            let labels = self.labels_between(&pair[0], &pair[1]);
            if labels.is_empty() {
                return Err(GraphError::NotAPath { index, from: pair[0].clone(), to: pair[1].clone() });
            }
            steps.push(labels);
        }
        if nodes.len() == 1 && !self.ids.contains_key(nodes[0].as_str()) {
            return Err(GraphError::NotAPath { index: 0, from: nodes[0].clone(), to: nodes[0].clone() });
        }
        let mut traces: BTreeSet<Vec<TraceLabel>> = BTreeSet::from([Vec::new()]);
        for labels in steps {
            traces = traces
                .into_iter()
                .flat_map(|prefix| {
                    labels.iter().map(move |l| {
                        let mut t = prefix.clone();
                        t.push(l.clone());
                        t
                    })
                })
                .collect();
        }
        Ok(traces)
    }
}

/// A non-empty sequence of constants, consecutive ones co-occurring in some
/// triple of the host graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path(Vec<Constant>);

impl Path {
    pub fn new<I, C>(nodes: I) -> Self
    where
        I: IntoIterator<Item = C>,
        C: Into<Constant>,
    {
        Path(nodes.into_iter().map(Into::into).collect())
    }

    pub fn nodes(&self) -> &[Constant] {
        &self.0
    }
}

/// One symbol of a trace: an axis, optionally qualified by a constant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TraceLabel {
    pub axis: Axis,
    pub constant: Option<Constant>,
}

impl TraceLabel {
    pub fn new(axis: Axis, constant: Option<Constant>) -> Self {
        TraceLabel { axis: axis.normalized(), constant }
    }
}

impl fmt::Display for TraceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.constant {
            Some(c) => write!(f, "{}::{}", self.axis, c),
            None => write!(f, "{}", self.axis),
        }
    }
}

fn is_bare_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | ':' | '+' | '-')
}

fn write_term(c: &Constant) -> io::Result<String> {
    let s = c.as_str();
    if !s.is_empty() && s.chars().all(is_bare_char) && !s.ends_with('.') && !s.starts_with('<') {
        Ok(s.to_string())
    } else if s.contains(['>', '\n', '\r']) {
        Err(io::Error::new(io::ErrorKind::InvalidData, format!("constant {s:?} has no triple-file spelling")))
    } else {
        Ok(format!("<{s}>"))
    }
}

/// Parse the line-oriented triple format: `S P O .` where each term is `<iri>`
/// or a bare token. Blank lines and `#` comments are skipped and the final
/// `.` is optional.
pub fn load_graph<R: BufRead>(source: R) -> Result<RdfGraph, GraphError> {
    let mut triples = Vec::new();
    for (i, line) in source.lines().enumerate() {
        let line = line?;
        if let Some(t) = parse_triple_line(&line).map_err(|message| GraphError::Parse { line: i + 1, message })? {
            triples.push(t);
        }
    }
    Ok(RdfGraph::from_triples(triples))
}

pub fn parse_graph_str(text: &str) -> Result<RdfGraph, GraphError> {
    load_graph(text.as_bytes())
}

fn parse_triple_line(line: &str) -> Result<Option<Triple>, String> {
    let trimmed = line.trim();
    if trimmed.is_empty() || trimmed.starts_with('#') {
        return Ok(None);
    }
    let mut terms: Vec<String> = Vec::with_capacity(3);
    let mut rest = trimmed;
    let mut terminated = false;
    loop {
        rest = rest.trim_start();
        if rest.is_empty() {
            break;
        }
        if terminated {
            if rest.starts_with('#') {
                break;
            }
            return Err(format!("unexpected text after '.': {rest:?}"));
        }
        if let Some(body) = rest.strip_prefix('<') {
            let end = body.find('>').ok_or_else(|| "unterminated '<'".to_string())?;
            let iri = &body[..end];
            if iri.is_empty() {
                return Err("empty IRI".to_string());
            }
            if terms.len() == 3 {
                return Err("more than three terms".to_string());
            }
            terms.push(iri.to_string());
            rest = &body[end + 1..];
        } else if rest.starts_with('#') && terms.len() == 3 {
            break;
        } else {
            let end = rest.find(|c: char| !is_bare_char(c)).unwrap_or(rest.len());
            if end == 0 {
                return Err(format!("unexpected character {:?}", rest.chars().next().unwrap()));
            }
            let token = &rest[..end];
            rest = &rest[end..];
            if token == "." && terms.len() == 3 {
                terminated = true;
                continue;
            }
            if terms.len() == 3 {
                return Err("more than three terms".to_string());
            }
            let mut token = token;
            // `o.` at the end of the line is the terminator glued to the object.
            if terms.len() == 2 && rest.trim().is_empty() && token.len() > 1 && token.ends_with('.') {
                token = &token[..token.len() - 1];
                terminated = true;
            }
            terms.push(token.to_string());
        }
    }
    match <[String; 3]>::try_from(terms) {
        Ok([s, p, o]) => Ok(Some(Triple::new(s, p, o))),
        Err(terms) => Err(format!("expected three terms, found {}", terms.len())),
    }
}

#[cfg(test)]
mod tests {
    #[test]
    fn written_graphs_load_back() {
        let graph = g(&[("a", "p", "b."), ("http://x/y z", "p", "-1.5"), ("a", "<q", "c")]);
        let mut out = Vec::new();
        graph.write_to(&mut out).unwrap();
        let back = load_graph(out.as_slice()).unwrap();
        assert_eq!(back.triples().collect::<Vec<_>>(), graph.triples().collect::<Vec<_>>());
        assert!(g(&[("a>", "p", "b")]).write_to(Vec::new()).is_err());
    }

    use super::*;

    fn g(triples: &[(&str, &str, &str)]) -> RdfGraph {
        RdfGraph::from_triples(triples.iter().map(|&(s, p, o)| Triple::new(s, p, o)))
    }

    fn consts(items: &[&str]) -> BTreeSet<Constant> {
        items.iter().map(|&c| Constant::from(c)).collect()
    }

    #[test]
    fn load_single_line() {
        let graph = parse_graph_str("<a> <p> <b> .").unwrap();
        assert_eq!(graph.triples().collect::<Vec<_>>(), vec![Triple::new("a", "p", "b")]);
    }

    #[test]
    fn load_empty_file() {
        let graph = parse_graph_str("").unwrap();
        assert!(graph.is_empty());
        assert!(graph.adom().is_empty());
    }

    #[test]
    fn load_collapses_duplicates() {
        let graph = parse_graph_str("<a> <p> <b> .\n<a> <p> <b> .\n").unwrap();
        assert_eq!(graph.len(), 1);
    }

    #[test]
    fn load_bare_tokens_comments_and_optional_dot() {
        let text = "# map data\n\nn1 lat 40.7128\nn1 lon -74.0060 .\n<x y> <p> n1.\n";
        let graph = parse_graph_str(text).unwrap();
        assert_eq!(graph.len(), 3);
        assert!(graph.contains(&Triple::new("n1", "lat", "40.7128")));
        assert!(graph.contains(&Triple::new("n1", "lon", "-74.0060")));
        assert!(graph.contains(&Triple::new("x y", "p", "n1")));
    }

    #[test]
    fn load_reports_line_numbers() {
        let err = parse_graph_str("<a> <p> <b> .\n<a> <p>\n").unwrap_err();
        match err {
            GraphError::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
        assert!(matches!(parse_graph_str("a p b c"), Err(GraphError::Parse { line: 1, .. })));
        assert!(matches!(parse_graph_str("a p <b"), Err(GraphError::Parse { line: 1, .. })));
        assert!(matches!(parse_graph_str("a p {b}"), Err(GraphError::Parse { line: 1, .. })));
    }

    #[test]
    fn adom_includes_predicates() {
        assert_eq!(g(&[("a", "p", "b")]).adom(), consts(&["a", "p", "b"]));
        assert_eq!(g(&[("a", "a", "a")]).adom(), consts(&["a"]));
        assert!(g(&[]).adom().is_empty());
    }

    #[test]
    fn match_triples_by_position() {
        let graph = g(&[("a", "p", "b"), ("b", "q", "c")]);
        let a = Constant::from("a");
        let c = Constant::from("c");
        assert_eq!(graph.match_triples(Some(&a), None, None), BTreeSet::from([Triple::new("a", "p", "b")]));
        assert_eq!(graph.match_triples(None, None, Some(&c)), BTreeSet::from([Triple::new("b", "q", "c")]));
        assert_eq!(graph.match_triples(None, None, None).len(), 2);
        let missing = Constant::from("zz");
        assert!(graph.match_triples(Some(&missing), None, None).is_empty());
    }

    #[test]
    fn match_triples_every_binding_combination() {
        let graph = g(&[("a", "p", "b"), ("a", "q", "b"), ("b", "p", "a"), ("a", "p", "a")]);
        let all: Vec<Triple> = graph.triples().collect();
        let terms: Vec<Option<Constant>> =
            std::iter::once(None).chain(graph.terms().iter().cloned().map(Some)).collect();
        for s in &terms {
            for p in &terms {
                for o in &terms {
                    let expected: BTreeSet<Triple> = all
                        .iter()
                        .filter(|t| {
                            s.as_ref().is_none_or(|s| *s == t.s)
                                && p.as_ref().is_none_or(|p| *p == t.p)
                                && o.as_ref().is_none_or(|o| *o == t.o)
                        })
                        .cloned()
                        .collect();
                    assert_eq!(graph.match_triples(s.as_ref(), p.as_ref(), o.as_ref()), expected);
                }
            }
        }
    }

    #[test]
    fn trace_example_from_two_triples() {
        let graph = g(&[("a", "b", "c"), ("a", "c", "b")]);
        let traces = graph.traces_of_path(&Path::new(["a", "b", "c"])).unwrap();
        let edge_c = TraceLabel::new(Axis::new(AxisBase::Edge, false), Some("c".into()));
        let node_a = TraceLabel::new(Axis::new(AxisBase::Node, false), Some("a".into()));
        let next_c = TraceLabel::new(Axis::new(AxisBase::Next, false), Some("c".into()));
        let node_inv_a = TraceLabel::new(Axis::new(AxisBase::Node, true), Some("a".into()));
        assert!(traces.contains(&vec![edge_c, node_a]));
        assert!(traces.contains(&vec![next_c, node_inv_a]));
    }

    #[test]
    fn trace_of_self_loop_step() {
        // Labels of (a, a) over {(a, p, a)}: self, self::a, next, next::p and
        // their inverses (self^-1 folds into self).
        let graph = g(&[("a", "p", "a")]);
        let labels = graph.labels_between(&"a".into(), &"a".into());
        let next = Axis::new(AxisBase::Next, false);
        let next_inv = Axis::new(AxisBase::Next, true);
        let expected = BTreeSet::from([
            TraceLabel::new(Axis::SELF, None),
            TraceLabel::new(Axis::SELF, Some("a".into())),
            TraceLabel::new(next, None),
            TraceLabel::new(next, Some("p".into())),
            TraceLabel::new(next_inv, None),
            TraceLabel::new(next_inv, Some("p".into())),
        ]);
        assert_eq!(labels, expected);
        let traces = graph.traces_of_path(&Path::new(["a", "a"])).unwrap();
        assert_eq!(traces.len(), 6);
    }

    #[test]
    fn single_node_path_has_empty_trace() {
        let graph = g(&[("a", "p", "b")]);
        let traces = graph.traces_of_path(&Path::new(["p"])).unwrap();
        assert_eq!(traces, BTreeSet::from([Vec::new()]));
    }

    #[test]
    fn non_path_is_rejected() {
        let graph = g(&[("a", "p", "b"), ("c", "q", "d")]);
        assert!(matches!(
            graph.traces_of_path(&Path::new(["a", "c"])),
            Err(GraphError::NotAPath { index: 0, .. })
        ));
        assert!(graph.traces_of_path(&Path::new(["zz"])).is_err());
    }
}
