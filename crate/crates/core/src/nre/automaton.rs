//! Product-automaton evaluation.
//!
//! An expression compiles to a Thompson ε-NFA whose transitions are graph
//! steps. Evaluating from one seed is a BFS over (node, state) pairs, so each
//! seed costs O(|G|·|e|). Nested sub-expressions are evaluated first, each as
//! the node set "has an e-successor", and referenced from steps by index.

use std::collections::{HashMap, VecDeque};

use crate::graph::{NodeId, RdfGraph};
use crate::model::{Axis, AxisBase, NreExpr, PpExpr};

use super::Direction;

/// Which labels a move step accepts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum LabelFilter {
    Any,
    Exactly(NodeId),
    /// Label must belong to nested test `n`.
    InTest(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Step {
    Identity,
    IdentityAt(NodeId),
    IdentityIf(usize),
    Move { axis: Axis, filter: LabelFilter },
    /// Property-path negated set. Forward polarity relates `a` to `b` when
    /// some triple `(a, _, b)` exists and no `(a, f, b)` with `f` excluded;
    /// inverted polarity is the converse.
    Negated { inverted: bool, excluded: Box<[NodeId]> },
    Never,
}

impl Step {
    fn reversed(&self) -> Step {
        match self {
            Step::Move { axis, filter } => Step::Move { axis: axis.inverse(), filter: filter.clone() },
            Step::Negated { inverted, excluded } => Step::Negated { inverted: !inverted, excluded: excluded.clone() },
            other => other.clone(),
        }
    }
}

type StateId = u32;

/// One traversal direction of a compiled NFA, with ε-closures precomputed.
#[derive(Clone, Debug)]
struct Automaton {
    entry: StateId,
    exit: StateId,
    closure: Vec<Box<[StateId]>>,
    /// Labelled transitions out of each state: (index into `steps`, target).
    moves: Vec<Vec<(usize, StateId)>>,
    steps: Vec<Step>,
}

#[derive(Default)]
struct Builder {
    eps: Vec<Vec<StateId>>,
    moves: Vec<Vec<(usize, StateId)>>,
    steps: Vec<Step>,
}

impl Builder {
    fn state(&mut self) -> StateId {
        self.eps.push(Vec::new());
        self.moves.push(Vec::new());
        (self.eps.len() - 1) as StateId
    }

    fn eps(&mut self, from: StateId, to: StateId) {
        self.eps[from as usize].push(to);
    }

    fn step(&mut self, step: Step) -> (StateId, StateId) {
        let s = self.state();
        let f = self.state();
        self.steps.push(step);
        self.moves[s as usize].push((self.steps.len() - 1, f));
        (s, f)
    }

    fn concat(&mut self, l: (StateId, StateId), r: (StateId, StateId)) -> (StateId, StateId) {
        self.eps(l.1, r.0);
        (l.0, r.1)
    }

    fn alt(&mut self, l: (StateId, StateId), r: (StateId, StateId)) -> (StateId, StateId) {
        let s = self.state();
        let f = self.state();
        self.eps(s, l.0);
        self.eps(s, r.0);
        self.eps(l.1, f);
        self.eps(r.1, f);
        (s, f)
    }

    fn star(&mut self, inner: (StateId, StateId)) -> (StateId, StateId) {
        let s = self.state();
        let f = self.state();
        self.eps(s, inner.0);
        self.eps(s, f);
        self.eps(inner.1, inner.0);
        self.eps(inner.1, f);
        (s, f)
    }

    fn plus(&mut self, inner: (StateId, StateId)) -> (StateId, StateId) {
        let s = self.state();
        let f = self.state();
        self.eps(s, inner.0);
        self.eps(inner.1, inner.0);
        self.eps(inner.1, f);
        (s, f)
    }

    fn finish(self, (start, accept): (StateId, StateId)) -> (Automaton, Automaton) {
        let n = self.eps.len();
        let mut rev_eps = vec![Vec::new(); n];
        let mut rev_moves = vec![Vec::new(); n];
        for (from, tos) in self.eps.iter().enumerate() {
            for &to in tos {
                rev_eps[to as usize].push(from as StateId);
            }
        }
        for (from, edges) in self.moves.iter().enumerate() {
            for &(step, to) in edges {
                rev_moves[to as usize].push((step, from as StateId));
            }
        }
        let rev_steps = self.steps.iter().map(Step::reversed).collect();
        let forward = Automaton {
            entry: start,
            exit: accept,
            closure: closures(&self.eps),
            moves: self.moves,
            steps: self.steps,
        };
        let backward = Automaton {
            entry: accept,
            exit: start,
            closure: closures(&rev_eps),
            moves: rev_moves,
            steps: rev_steps,
        };
        (forward, backward)
    }
}

/// Per-state ε-closure, including the state itself.
fn closures(eps: &[Vec<StateId>]) -> Vec<Box<[StateId]>> {
    let n = eps.len();
    let mut seen = vec![usize::MAX; n];
    (0..n)
        .map(|q| {
            let mut out = Vec::new();
            let mut stack = vec![q as StateId];
            seen[q] = q;
            while let Some(r) = stack.pop() {
                out.push(r);
                for &t in &eps[r as usize] {
                    if seen[t as usize] != q {
                        seen[t as usize] = q;
                        stack.push(t);
                    }
                }
            }
            out.sort_unstable();
            out.into_boxed_slice()
        })
        .collect()
}

/// Reusable BFS bookkeeping: generation-stamped visited marks.
pub(crate) struct Scratch {
    generation: u32,
    visited: Vec<u32>,
    emitted: Vec<u32>,
    queue: VecDeque<(NodeId, StateId)>,
    buf: Vec<NodeId>,
}

impl Scratch {
    fn new(nodes: usize, states: usize) -> Self {
        Scratch {
            generation: 0,
            visited: vec![0; nodes * states],
            emitted: vec![0; nodes],
            queue: VecDeque::new(),
            buf: Vec::new(),
        }
    }

    fn bump(&mut self) {
        self.generation = self.generation.wrapping_add(1);
        if self.generation == 0 {
            self.visited.fill(0);
            self.emitted.fill(0);
            self.generation = 1;
        }
    }
}

/// A compiled expression bound to one graph.
pub(crate) struct Plan<'g> {
    graph: &'g RdfGraph,
    forward: Automaton,
    backward: Automaton,
    tests: Vec<Vec<bool>>,
}

impl<'g> Plan<'g> {
    pub(crate) fn for_nre(graph: &'g RdfGraph, e: &NreExpr) -> Self {
        let mut tests = Tests::new(graph);
        let mut b = Builder::default();
        let frag = tests.build_nre(&mut b, e);
        let (forward, backward) = b.finish(frag);
        Plan { graph, forward, backward, tests: tests.sets }
    }

    pub(crate) fn for_pp(graph: &'g RdfGraph, e: &PpExpr) -> Self {
        let mut b = Builder::default();
        let frag = build_pp(graph, &mut b, e, false);
        let (forward, backward) = b.finish(frag);
        Plan { graph, forward, backward, tests: Vec::new() }
    }

    pub(crate) fn graph(&self) -> &'g RdfGraph {
        self.graph
    }

    pub(crate) fn scratch(&self) -> Scratch {
        Scratch::new(self.graph.node_count(), self.forward.closure.len())
    }

    fn automaton(&self, dir: Direction) -> &Automaton {
        match dir {
            Direction::Forward => &self.forward,
            Direction::Backward => &self.backward,
        }
    }

    /// Nodes reachable from `seed` in direction `dir`: for forward, every `b`
    /// with `(seed, b)` in the relation; for backward, every `a` with
    /// `(a, seed)`. Appends to `out` without duplicates.
    pub(crate) fn reach(&self, seed: NodeId, dir: Direction, scratch: &mut Scratch, out: &mut Vec<NodeId>) {
        let aut = self.automaton(dir);
        let states = aut.closure.len();
        scratch.bump();
        let gen = scratch.generation;
        scratch.queue.clear();
        scratch.queue.push_back((seed, aut.entry));
        scratch.visited[seed as usize * states + aut.entry as usize] = gen;
        let mut buf = std::mem::take(&mut scratch.buf);
        while let Some((x, q)) = scratch.queue.pop_front() {
            for &r in aut.closure[q as usize].iter() {
                if r == aut.exit && scratch.emitted[x as usize] != gen {
                    scratch.emitted[x as usize] = gen;
                    out.push(x);
                }
                for &(step, t) in &aut.moves[r as usize] {
                    buf.clear();
                    successors(self.graph, &self.tests, &aut.steps[step], x, &mut buf);
                    for &y in &buf {
                        let slot = y as usize * states + t as usize;
                        if scratch.visited[slot] != gen {
                            scratch.visited[slot] = gen;
                            scratch.queue.push_back((y, t));
                        }
                    }
                }
            }
        }
        scratch.buf = buf;
    }

    /// A superset of the nodes that can start a non-empty traversal in
    /// direction `dir`, in increasing order.
    pub(crate) fn candidates(&self, dir: Direction) -> Vec<NodeId> {
        let aut = self.automaton(dir);
        let n = self.graph.node_count();
        let entry = &aut.closure[aut.entry as usize];
        if entry.contains(&aut.exit) {
            return (0..n as NodeId).collect();
        }
        let mut mark = vec![false; n];
        for &r in entry.iter() {
            for &(step, _) in &aut.moves[r as usize] {
                if !self.mark_sources(&aut.steps[step], &mut mark) {
                    return (0..n as NodeId).collect();
                }
            }
        }
        (0..n as NodeId).filter(|&i| mark[i as usize]).collect()
    }

    /// Mark nodes that have a successor under `step`. Returns false when the
    /// step is not cheaply enumerable and every node should be tried.
    fn mark_sources(&self, step: &Step, mark: &mut [bool]) -> bool {
        let g = self.graph;
        match step {
            Step::Never => {}
            Step::Identity => return false,
            Step::IdentityAt(c) => mark[*c as usize] = true,
            Step::IdentityIf(t) => {
                for (m, &inside) in mark.iter_mut().zip(&self.tests[*t]) {
                    *m |= inside;
                }
            }
            Step::Move { axis, filter: LabelFilter::Exactly(c) } => {
                // Column of the labelled lookup holding the source node.
                let (rows, col) = match (axis.base(), axis.is_inverted()) {
                    (AxisBase::Next, false) => (g.by_predicate(*c), 2),
                    (AxisBase::Next, true) => (g.by_predicate(*c), 1),
                    (AxisBase::Edge, false) => (g.by_object(*c), 1),
                    (AxisBase::Edge, true) => (g.by_object(*c), 2),
                    (AxisBase::Node, false) => (g.by_subject(*c), 1),
                    (AxisBase::Node, true) => (g.by_subject(*c), 2),
                    (AxisBase::Self_, _) => return false,
                };
                for r in rows {
                    mark[r[col] as usize] = true;
                }
            }
            Step::Move { axis, .. } => {
                for (i, m) in mark.iter_mut().enumerate() {
                    *m |= !axis_rows(g, *axis, i as NodeId).is_empty();
                }
            }
            Step::Negated { inverted, .. } => {
                for t in g.encoded_triples() {
                    mark[if *inverted { t[2] } else { t[0] } as usize] = true;
                }
            }
        }
        true
    }
}

/// Index rows used to step from `x` along `axis`; see [`successors`] for the
/// column layout.
fn axis_rows(g: &RdfGraph, axis: Axis, x: NodeId) -> &[[NodeId; 3]] {
    match (axis.base(), axis.is_inverted()) {
        (AxisBase::Next, false) | (AxisBase::Edge, false) => g.by_subject(x),
        (AxisBase::Next, true) | (AxisBase::Node, true) => g.by_object(x),
        (AxisBase::Edge, true) | (AxisBase::Node, false) => g.by_predicate(x),
        (AxisBase::Self_, _) => &[],
    }
}

fn successors(g: &RdfGraph, tests: &[Vec<bool>], step: &Step, x: NodeId, out: &mut Vec<NodeId>) {
    match step {
        Step::Identity => out.push(x),
        Step::IdentityAt(c) => {
            if *c == x {
                out.push(x)
            }
        }
        Step::IdentityIf(t) => {
            if tests[*t][x as usize] {
                out.push(x)
            }
        }
        Step::Never => {}
        Step::Move { axis, filter } => {
            if axis.is_self() {
                // self::c and self::[e] compile to identity steps.
                unreachable!("self axis compiled as a move");
            }
            // (label column, destination column) within the rows.
            //   next:    spo [x,p,o]  label p, dest o
            //   next⁻¹:  osp [x,s,p]  label p, dest s
            //   edge:    spo [x,p,o]  label o, dest p
            //   edge⁻¹:  pos [x,o,s]  label o, dest s
            //   node:    pos [x,o,s]  label s, dest o
            //   node⁻¹:  osp [x,s,p]  label s, dest p
            let (label, dest) = match (axis.base(), axis.is_inverted()) {
                (AxisBase::Next, false) => (1, 2),
                (AxisBase::Next, true) => (2, 1),
                (AxisBase::Edge, false) => (2, 1),
                (AxisBase::Edge, true) => (1, 2),
                (AxisBase::Node, false) => (2, 1),
                (AxisBase::Node, true) => (1, 2),
                (AxisBase::Self_, _) => unreachable!(),
            };
            let rows = axis_rows(g, *axis, x);
            match filter {
                LabelFilter::Any => out.extend(rows.iter().map(|r| r[dest])),
                LabelFilter::Exactly(c) if label == 1 => {
                    let lo = rows.partition_point(|r| r[1] < *c);
                    let hi = lo + rows[lo..].partition_point(|r| r[1] == *c);
                    out.extend(rows[lo..hi].iter().map(|r| r[dest]));
                }
                LabelFilter::Exactly(c) => {
                    out.extend(rows.iter().filter(|r| r[label] == *c).map(|r| r[dest]))
                }
                LabelFilter::InTest(t) => {
                    let set = &tests[*t];
                    out.extend(rows.iter().filter(|r| set[r[label] as usize]).map(|r| r[dest]))
                }
            }
        }
        Step::Negated { inverted, excluded } => {
            // Forward: triples (x, p, o), candidate o. Inverted: triples
            // (s, p, x), candidate s.
            let (rows, other) = if *inverted { (g.by_object(x), 1) } else { (g.by_subject(x), 2) };
            let start = out.len();
            for r in rows {
                let y = r[other];
                let blocked = excluded.iter().any(|&f| {
                    if *inverted {
                        g.contains_ids(y, f, x)
                    } else {
                        g.contains_ids(x, f, y)
                    }
                });
                if !blocked {
                    out.push(y);
                }
            }
            out[start..].sort_unstable();
            let mut keep = start;
            for i in start..out.len() {
                if i == start || out[i] != out[keep - 1] {
                    out[keep] = out[i];
                    keep += 1;
                }
            }
            out.truncate(keep);
        }
    }
}

/// Nested-test materialization, shared across one compilation and keyed by
/// the sub-expression.
struct Tests<'g> {
    graph: &'g RdfGraph,
    sets: Vec<Vec<bool>>,
    index: HashMap<NreExpr, usize>,
}

impl<'g> Tests<'g> {
    fn new(graph: &'g RdfGraph) -> Self {
        Tests { graph, sets: Vec::new(), index: HashMap::new() }
    }

    fn test_for(&mut self, e: &NreExpr) -> usize {
        if let Some(&i) = self.index.get(e) {
            return i;
        }
        let mut b = Builder::default();
        let frag = self.build_nre(&mut b, e);
        let (_, backward) = b.finish(frag);
        let set = self.has_successor(&backward);
        self.sets.push(set);
        let i = self.sets.len() - 1;
        self.index.insert(e.clone(), i);
        i
    }

    /// Nodes `a` with some `(a, c)` in the relation: multi-source backward
    /// BFS from every node at the accepting state.
    fn has_successor(&self, backward: &Automaton) -> Vec<bool> {
        let n = self.graph.node_count();
        let states = backward.closure.len();
        let mut visited = vec![false; n * states];
        let mut found = vec![false; n];
        let mut queue: VecDeque<(NodeId, StateId)> = VecDeque::new();
        for x in 0..n as NodeId {
            visited[x as usize * states + backward.entry as usize] = true;
            queue.push_back((x, backward.entry));
        }
        let mut buf = Vec::new();
        while let Some((x, q)) = queue.pop_front() {
            for &r in backward.closure[q as usize].iter() {
                if r == backward.exit {
                    found[x as usize] = true;
                }
                for &(step, t) in &backward.moves[r as usize] {
                    buf.clear();
                    successors(self.graph, &self.sets, &backward.steps[step], x, &mut buf);
                    for &y in &buf {
                        let slot = y as usize * states + t as usize;
                        if !visited[slot] {
                            visited[slot] = true;
                            queue.push_back((y, t));
                        }
                    }
                }
            }
        }
        found
    }

    fn build_nre(&mut self, b: &mut Builder, e: &NreExpr) -> (StateId, StateId) {
        let g = self.graph;
        match e {
            NreExpr::Axis(a) if a.is_self() => b.step(Step::Identity),
            NreExpr::Axis(a) => b.step(Step::Move { axis: *a, filter: LabelFilter::Any }),
            NreExpr::AxisConst(a, c) => match g.id_of(c.as_str()) {
                None => b.step(Step::Never),
                Some(id) if a.is_self() => b.step(Step::IdentityAt(id)),
                Some(id) => b.step(Step::Move { axis: *a, filter: LabelFilter::Exactly(id) }),
            },
            NreExpr::AxisNest(a, inner) => {
                let t = self.test_for(inner);
                if a.is_self() {
                    b.step(Step::IdentityIf(t))
                } else {
                    b.step(Step::Move { axis: *a, filter: LabelFilter::InTest(t) })
                }
            }
            NreExpr::Concat(l, r) => {
                let l = self.build_nre(b, l);
                let r = self.build_nre(b, r);
                b.concat(l, r)
            }
            NreExpr::Alt(l, r) => {
                let l = self.build_nre(b, l);
                let r = self.build_nre(b, r);
                b.alt(l, r)
            }
            NreExpr::Star(inner) => {
                let inner = self.build_nre(b, inner);
                b.star(inner)
            }
        }
    }
}

/// Compile a property path; `inverted` pushes `^` inward.
fn build_pp(g: &RdfGraph, b: &mut Builder, e: &PpExpr, inverted: bool) -> (StateId, StateId) {
    match e {
        PpExpr::Iri(c) => match g.id_of(c.as_str()) {
            None => b.step(Step::Never),
            Some(id) => {
                let axis = if inverted { Axis::NEXT_INV } else { Axis::NEXT };
                b.step(Step::Move { axis, filter: LabelFilter::Exactly(id) })
            }
        },
        PpExpr::Seq(l, r) => {
            let (first, second) = if inverted { (r, l) } else { (l, r) };
            let first = build_pp(g, b, first, inverted);
            let second = build_pp(g, b, second, inverted);
            b.concat(first, second)
        }
        PpExpr::Alt(l, r) => {
            let l = build_pp(g, b, l, inverted);
            let r = build_pp(g, b, r, inverted);
            b.alt(l, r)
        }
        PpExpr::Inv(inner) => build_pp(g, b, inner, !inverted),
        PpExpr::Opt(inner) => {
            let id = b.step(Step::Identity);
            let inner = build_pp(g, b, inner, inverted);
            b.alt(id, inner)
        }
        PpExpr::Plus(inner) => {
            let inner = build_pp(g, b, inner, inverted);
            b.plus(inner)
        }
        PpExpr::Star(inner) => {
            let inner = build_pp(g, b, inner, inverted);
            b.star(inner)
        }
        PpExpr::NegSet { forward, inverse } => {
            let ids = |set: &std::collections::BTreeSet<crate::graph::Constant>| -> Box<[NodeId]> {
                set.iter().filter_map(|c| g.id_of(c.as_str())).collect()
            };
            let mut parts = Vec::new();
            if !forward.is_empty() {
                parts.push(b.step(Step::Negated { inverted, excluded: ids(forward) }));
            }
            if !inverse.is_empty() {
                parts.push(b.step(Step::Negated { inverted: !inverted, excluded: ids(inverse) }));
            }
            match parts.as_slice() {
                [one] => *one,
                [l, r] => b.alt(*l, *r),
                _ => b.step(Step::Never),
            }
        }
    }
}
