use std::collections::BTreeSet;
use std::fmt;

use crate::graph::Constant;
use crate::parser::write_constant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AxisBase {
    Self_,
    Next,
    Edge,
    Node,
}

impl AxisBase {
    pub fn keyword(self) -> &'static str {
        match self {
            AxisBase::Self_ => "self",
            AxisBase::Next => "next",
            AxisBase::Edge => "edge",
            AxisBase::Node => "node",
        }
    }
}

/// A navigation axis. `self^-1` is the same relation as `self` and is
/// normalized on construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Axis {
    base: AxisBase,
    inverted: bool,
}

impl Axis {
    pub const SELF: Axis = Axis { base: AxisBase::Self_, inverted: false };
    pub const NEXT: Axis = Axis { base: AxisBase::Next, inverted: false };
    pub const NEXT_INV: Axis = Axis { base: AxisBase::Next, inverted: true };
    pub const EDGE: Axis = Axis { base: AxisBase::Edge, inverted: false };
    pub const EDGE_INV: Axis = Axis { base: AxisBase::Edge, inverted: true };
    pub const NODE: Axis = Axis { base: AxisBase::Node, inverted: false };
    pub const NODE_INV: Axis = Axis { base: AxisBase::Node, inverted: true };

    /// The seven distinct axes.
    pub const ALL: [Axis; 7] = [
        Axis::SELF,
        Axis::NEXT,
        Axis::NEXT_INV,
        Axis::EDGE,
        Axis::EDGE_INV,
        Axis::NODE,
        Axis::NODE_INV,
    ];

    pub fn new(base: AxisBase, inverted: bool) -> Self {
        Axis { base, inverted: inverted && base != AxisBase::Self_ }
    }

    pub fn base(self) -> AxisBase {
        self.base
    }

    pub fn is_inverted(self) -> bool {
        self.inverted
    }

    pub fn is_self(self) -> bool {
        self.base == AxisBase::Self_
    }

    pub fn inverse(self) -> Self {
        Axis::new(self.base, !self.inverted)
    }

    pub(crate) fn normalized(self) -> Self {
        Axis::new(self.base, self.inverted)
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.base.keyword())?;
        if self.inverted {
            f.write_str("^-1")?;
        }
        Ok(())
    }
}

/// Nested regular expression.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NreExpr {
    Axis(Axis),
    AxisConst(Axis, Constant),
    AxisNest(Axis, Box<NreExpr>),
    Concat(Box<NreExpr>, Box<NreExpr>),
    Alt(Box<NreExpr>, Box<NreExpr>),
    Star(Box<NreExpr>),
}

impl NreExpr {
    pub fn axis(axis: Axis) -> Self {
        NreExpr::Axis(axis)
    }

    pub fn axis_const(axis: Axis, c: impl Into<Constant>) -> Self {
        NreExpr::AxisConst(axis, c.into())
    }

    pub fn nest(axis: Axis, inner: NreExpr) -> Self {
        NreExpr::AxisNest(axis, Box::new(inner))
    }

    pub fn concat(l: NreExpr, r: NreExpr) -> Self {
        NreExpr::Concat(Box::new(l), Box::new(r))
    }

    pub fn alt(l: NreExpr, r: NreExpr) -> Self {
        NreExpr::Alt(Box::new(l), Box::new(r))
    }

    pub fn star(inner: NreExpr) -> Self {
        NreExpr::Star(Box::new(inner))
    }

    /// Node count of the syntax tree.
    pub fn size(&self) -> usize {
        match self {
            NreExpr::Axis(_) | NreExpr::AxisConst(..) => 1,
            NreExpr::AxisNest(_, e) | NreExpr::Star(e) => 1 + e.size(),
            NreExpr::Concat(l, r) | NreExpr::Alt(l, r) => 1 + l.size() + r.size(),
        }
    }

    pub fn constants(&self) -> BTreeSet<Constant> {
        let mut out = BTreeSet::new();
        self.visit(&mut |e| {
            if let NreExpr::AxisConst(_, c) = e {
                out.insert(c.clone());
            }
        });
        out
    }

    /// Pre-order traversal over every sub-expression.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a NreExpr)) {
        f(self);
        match self {
            NreExpr::Axis(_) | NreExpr::AxisConst(..) => {}
            NreExpr::AxisNest(_, e) | NreExpr::Star(e) => e.visit(f),
            NreExpr::Concat(l, r) | NreExpr::Alt(l, r) => {
                l.visit(f);
                r.visit(f);
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            NreExpr::Alt(..) => 0,
            NreExpr::Concat(..) => 1,
            NreExpr::Star(_) => 2,
            _ => 3,
        }
    }
}

fn write_operand<T: fmt::Display>(f: &mut fmt::Formatter<'_>, e: &T, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for NreExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NreExpr::Axis(a) => write!(f, "{a}"),
            NreExpr::AxisConst(a, c) => {
                write!(f, "{a}::")?;
                write_constant(f, c.as_str())
            }
            NreExpr::AxisNest(a, e) => write!(f, "{a}::[{e}]"),
            // Binary nodes are right-folded by the parser, so a left operand
            // of the same operator needs parentheses.
            NreExpr::Concat(l, r) => {
                write_operand(f, l, l.precedence() <= 1)?;
                f.write_str("/")?;
                write_operand(f, r, r.precedence() < 1)
            }
            NreExpr::Alt(l, r) => {
                write_operand(f, l, l.precedence() == 0)?;
                f.write_str("|")?;
                write_operand(f, r, false)
            }
            NreExpr::Star(e) => {
                write_operand(f, e, e.precedence() < 2)?;
                f.write_str("*")
            }
        }
    }
}

/// SPARQL 1.1 property path.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PpExpr {
    Iri(Constant),
    Seq(Box<PpExpr>, Box<PpExpr>),
    Alt(Box<PpExpr>, Box<PpExpr>),
    Inv(Box<PpExpr>),
    Opt(Box<PpExpr>),
    Plus(Box<PpExpr>),
    Star(Box<PpExpr>),
    /// `!(iri_1 | ... | ^iri_n+1 | ...)`; at least one member is present.
    NegSet { forward: BTreeSet<Constant>, inverse: BTreeSet<Constant> },
}

impl PpExpr {
    pub fn iri(c: impl Into<Constant>) -> Self {
        PpExpr::Iri(c.into())
    }

    pub fn seq(l: PpExpr, r: PpExpr) -> Self {
        PpExpr::Seq(Box::new(l), Box::new(r))
    }

    pub fn alt(l: PpExpr, r: PpExpr) -> Self {
        PpExpr::Alt(Box::new(l), Box::new(r))
    }

    pub fn inv(e: PpExpr) -> Self {
        PpExpr::Inv(Box::new(e))
    }

    pub fn opt(e: PpExpr) -> Self {
        PpExpr::Opt(Box::new(e))
    }

    pub fn plus(e: PpExpr) -> Self {
        PpExpr::Plus(Box::new(e))
    }

    pub fn star(e: PpExpr) -> Self {
        PpExpr::Star(Box::new(e))
    }

    pub fn has_negation(&self) -> bool {
        match self {
            PpExpr::Iri(_) => false,
            PpExpr::NegSet { .. } => true,
            PpExpr::Seq(l, r) | PpExpr::Alt(l, r) => l.has_negation() || r.has_negation(),
            PpExpr::Inv(e) | PpExpr::Opt(e) | PpExpr::Plus(e) | PpExpr::Star(e) => e.has_negation(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            PpExpr::Alt(..) => 0,
            PpExpr::Seq(..) => 1,
            PpExpr::Inv(_) => 2,
            PpExpr::Opt(_) | PpExpr::Plus(_) | PpExpr::Star(_) => 3,
            PpExpr::Iri(_) | PpExpr::NegSet { .. } => 4,
        }
    }
}

impl fmt::Display for PpExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PpExpr::Iri(c) => write_constant(f, c.as_str()),
            PpExpr::Seq(l, r) => {
                write_operand(f, l, l.precedence() <= 1)?;
                f.write_str("/")?;
                write_operand(f, r, r.precedence() < 1)
            }
            PpExpr::Alt(l, r) => {
                write_operand(f, l, l.precedence() == 0)?;
                f.write_str("|")?;
                write_operand(f, r, false)
            }
            PpExpr::Inv(e) => {
                f.write_str("^")?;
                write_operand(f, e, e.precedence() < 3)
            }
            PpExpr::Opt(e) | PpExpr::Plus(e) | PpExpr::Star(e) => {
                write_operand(f, e, e.precedence() < 3)?;
                f.write_str(match self {
                    PpExpr::Opt(_) => "?",
                    PpExpr::Plus(_) => "+",
                    _ => "*",
                })
            }
            PpExpr::NegSet { forward, inverse } => {
                f.write_str("!(")?;
                let members = forward.iter().map(|c| (false, c)).chain(inverse.iter().map(|c| (true, c)));
                for (i, (inv, c)) in members.enumerate() {
                    if i > 0 {
                        f.write_str("|")?;
                    }
                    if inv {
                        f.write_str("^")?;
                    }
                    write_constant(f, c.as_str())?;
                }
                f.write_str(")")
            }
        }
    }
}
