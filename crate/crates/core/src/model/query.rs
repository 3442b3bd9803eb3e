use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::graph::Constant;
use crate::model::NreExpr;
use crate::parser::write_constant;
use crate::relation::RelAtom;

/// A query variable. The name is stored without the leading `?`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variable(Arc<str>);

impl Variable {
    pub fn new(name: impl Into<Arc<str>>) -> Self {
        let name = name.into();
        debug_assert!(!name.is_empty() && !name.starts_with('?'));
        Variable(name)
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Variable {
    fn from(name: &str) -> Self {
        Variable::new(name.trim_start_matches('?'))
    }
}

impl fmt::Debug for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.0)
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Variable),
    Const(Constant),
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Var(Variable::from(name))
    }

    pub fn constant(c: impl Into<Constant>) -> Self {
        Term::Const(c.into())
    }

    pub fn as_var(&self) -> Option<&Variable> {
        match self {
            Term::Var(v) => Some(v),
            Term::Const(_) => None,
        }
    }

    pub fn as_const(&self) -> Option<&Constant> {
        match self {
            Term::Const(c) => Some(c),
            Term::Var(_) => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Const(c) => write_constant(f, c.as_str()),
        }
    }
}

/// `(u, e, v)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TriplePattern {
    pub subject: Term,
    pub path: NreExpr,
    pub object: Term,
}

impl TriplePattern {
    pub fn new(subject: Term, path: NreExpr, object: Term) -> Self {
        TriplePattern { subject, path, object }
    }

    pub fn variables(&self) -> impl Iterator<Item = &Variable> {
        self.subject.as_var().into_iter().chain(self.object.as_var())
    }
}

impl fmt::Display for TriplePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.subject, self.path, self.object)
    }
}

/// One conjunctive block `name(u, v) :- atoms`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub name: String,
    pub head: (Term, Term),
    pub triple_atoms: Vec<TriplePattern>,
    pub rel_atoms: Vec<RelAtom>,
}

impl Rule {
    pub fn new(name: impl Into<String>, head: (Term, Term)) -> Self {
        Rule { name: name.into(), head, triple_atoms: Vec::new(), rel_atoms: Vec::new() }
    }

    pub fn with_triple(mut self, t: TriplePattern) -> Self {
        self.triple_atoms.push(t);
        self
    }

    pub fn with_rel(mut self, a: RelAtom) -> Self {
        self.rel_atoms.push(a);
        self
    }

    /// Head variables, `{u, v} ∩ V`, in head order without repetition.
    pub fn head_vars(&self) -> Vec<Variable> {
        let mut out = Vec::with_capacity(2);
        for t in [&self.head.0, &self.head.1] {
            if let Term::Var(v) = t {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
        }
        out
    }

    pub fn body_vars(&self) -> BTreeSet<Variable> {
        let mut vars: BTreeSet<Variable> = self.triple_atoms.iter().flat_map(|t| t.variables().cloned()).collect();
        vars.extend(self.rel_atoms.iter().flat_map(|a| a.variables().cloned()));
        vars
    }

    pub fn atom_count(&self) -> usize {
        self.triple_atoms.len() + self.rel_atoms.len()
    }

    pub fn is_boolean(&self) -> bool {
        self.head_vars().is_empty()
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}, {}) :- ", self.name, self.head.0, self.head.1)?;
        let atoms = self
            .triple_atoms
            .iter()
            .map(ToString::to_string)
            .chain(self.rel_atoms.iter().map(ToString::to_string));
        for (i, a) in atoms.enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(&a)?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ValidationError {
    #[error("{0} unbound")]
    UnboundHeadVariable(Variable),
    #[error("rule {index} has head {found}, expected {expected}")]
    MismatchedHead { index: usize, expected: String, found: String },
    #[error("query has no rules")]
    NoRules,
    #[error("rule {index} has an empty body")]
    EmptyBody { index: usize },
    #[error("relational atom {0} has no arguments")]
    NullaryAtom(String),
}

/// A union of rules sharing one head.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Query {
    pub name: String,
    pub rules: Vec<Rule>,
}

impl Query {
    /// Build and validate.
    pub fn new(rules: Vec<Rule>) -> Result<Self, ValidationError> {
        let name = rules.first().map(|r| r.name.clone()).ok_or(ValidationError::NoRules)?;
        let q = Query { name, rules };
        validate(&q)?;
        Ok(q)
    }

    pub fn head(&self) -> &(Term, Term) {
        &self.rules[0].head
    }

    pub fn head_vars(&self) -> Vec<Variable> {
        self.rules[0].head_vars()
    }

    pub fn is_boolean(&self) -> bool {
        self.head_vars().is_empty()
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rules.iter().enumerate() {
            if i > 0 {
                f.write_str(" ;\n")?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

/// Checks boundedness of every rule and that all rules share the same head.
pub fn validate(q: &Query) -> Result<(), ValidationError> {
    let first = q.rules.first().ok_or(ValidationError::NoRules)?;
    let expected = format!("{}({}, {})", first.name, first.head.0, first.head.1);
    for (index, rule) in q.rules.iter().enumerate() {
        let found = format!("{}({}, {})", rule.name, rule.head.0, rule.head.1);
        if found != expected {
            return Err(ValidationError::MismatchedHead { index, expected, found });
        }
        if rule.atom_count() == 0 {
            return Err(ValidationError::EmptyBody { index });
        }
        if let Some(a) = rule.rel_atoms.iter().find(|a| a.args.is_empty()) {
            return Err(ValidationError::NullaryAtom(a.name.clone()));
        }
        let body = rule.body_vars();
        if let Some(v) = rule.head_vars().into_iter().find(|v| !body.contains(v)) {
            return Err(ValidationError::UnboundHeadVariable(v));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Axis;

    fn next() -> NreExpr {
        NreExpr::axis(Axis::NEXT)
    }

    #[test]
    fn bounded_rule_validates() {
        let r = Rule::new("q", (Term::var("x"), Term::var("y")))
            .with_triple(TriplePattern::new(Term::var("x"), next(), Term::var("y")));
        assert!(Query::new(vec![r]).is_ok());
    }

    #[test]
    fn unbound_head_variable_is_named() {
        let r = Rule::new("q", (Term::var("x"), Term::var("z")))
            .with_triple(TriplePattern::new(Term::var("x"), next(), Term::var("y")));
        let err = Query::new(vec![r]).unwrap_err();
        assert_eq!(err, ValidationError::UnboundHeadVariable(Variable::from("z")));
        assert_eq!(err.to_string(), "?z unbound");
    }

    #[test]
    fn boolean_query_validates() {
        let r = Rule::new("q", (Term::constant("a"), Term::constant("b")))
            .with_triple(TriplePattern::new(Term::constant("a"), next(), Term::constant("b")));
        let q = Query::new(vec![r]).unwrap();
        assert!(q.is_boolean());
    }

    #[test]
    fn mismatched_heads_rejected() {
        let r1 = Rule::new("q", (Term::var("x"), Term::var("y")))
            .with_triple(TriplePattern::new(Term::var("x"), next(), Term::var("y")));
        let r2 = Rule::new("q", (Term::var("y"), Term::var("x")))
            .with_triple(TriplePattern::new(Term::var("x"), next(), Term::var("y")));
        assert!(matches!(Query::new(vec![r1, r2]), Err(ValidationError::MismatchedHead { index: 1, .. })));
    }

    #[test]
    fn head_vars_deduplicate() {
        let r = Rule::new("q", (Term::var("x"), Term::var("x")));
        assert_eq!(r.head_vars(), vec![Variable::from("x")]);
    }

    #[test]
    fn empty_query_rejected() {
        assert_eq!(Query::new(vec![]), Err(ValidationError::NoRules));
    }
}
