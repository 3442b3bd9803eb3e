use std::fmt;

use crate::model::{NreExpr, Query};

/// Operators syntactically present in a query.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct FragmentFlags {
    /// `|` inside some expression.
    pub alt: bool,
    /// `axis::[e]` inside some expression.
    pub nest: bool,
    /// Some rule conjoins more than one atom.
    pub conj: bool,
    /// Some rule has a relational atom.
    pub rel: bool,
    /// More than one rule.
    pub union: bool,
    /// `*` inside some expression. Reported apart from the other flags.
    pub star: bool,
}

impl FragmentFlags {
    /// The lattice flags in display order, without `*`.
    pub fn operators(&self) -> Vec<&'static str> {
        [(self.alt, "|"), (self.nest, "N"), (self.conj, "∧"), (self.rel, "R"), (self.union, "∨")]
            .into_iter()
            .filter_map(|(on, s)| on.then_some(s))
            .collect()
    }
}

impl fmt::Display for FragmentFlags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.operators().join(", "))?;
        if self.star {
            f.write_str(" with *")?;
        } else {
            f.write_str(" star-free")?;
        }
        Ok(())
    }
}

pub fn classify_fragment(q: &Query) -> FragmentFlags {
    let mut flags = FragmentFlags { union: q.rules.len() > 1, ..Default::default() };
    for r in &q.rules {
        flags.conj |= r.atom_count() > 1;
        flags.rel |= !r.rel_atoms.is_empty();
        for t in &r.triple_atoms {
            t.path.visit(&mut |e| match e {
                NreExpr::Alt(..) => flags.alt = true,
                NreExpr::AxisNest(..) => flags.nest = true,
                NreExpr::Star(_) => flags.star = true,
                _ => {}
            });
        }
    }
    flags
}
