//! Concrete syntax for nested regular expressions, property paths and
//! federated queries.
//!
//! ```text
//! query   := rule (";" rule)* ;
//! rule    := NAME "(" term "," term ")" ":-" atom ("," atom)* ;
//! atom    := "(" term "," nre "," term ")" | NAME "(" term ("," term)* ")" ;
//! term    := VAR | CONST ;            VAR := "?" IDENT ;
//! nre     := alt ;  alt := seq ("|" seq)* ;  seq := star ("/" star)* ;
//! star    := base "*"* ;
//! base    := axis ["::" (CONST | "[" nre "]")] | "(" nre ")" ;
//! axis    := ("self"|"next"|"edge"|"node") ["^-1"] ;
//! CONST   := IDENT | "<" not-gt* ">" | quoted-string ;
//! ```
//!
//! Whitespace is insignificant and `#` starts a comment running to the end of
//! the line. Binary operators fold to the right.

use std::fmt;

use thiserror::Error;

use crate::graph::Constant;
use crate::model::{Axis, AxisBase, NreExpr, PpExpr, Query, Rule, Term, TriplePattern, ValidationError, Variable};
use crate::relation::RelAtom;

/// Location of a token in the source text. Offsets are in bytes, `line` and
/// `column` are 1-based (column counts characters).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("{span}: expected {expected}, found {found}")]
    Syntax { span: SourceSpan, expected: String, found: String },
    #[error(transparent)]
    Invalid(#[from] ValidationError),
}

impl ParseError {
    pub fn span(&self) -> Option<SourceSpan> {
        match self {
            ParseError::Syntax { span, .. } => Some(*span),
            ParseError::Invalid(_) => None,
        }
    }
}

/// Parse a nested regular expression.
pub fn parse_nre(text: &str) -> Result<NreExpr, ParseError> {
    let mut p = Parser::new(text, Mode::Query)?;
    let e = p.nre()?;
    p.expect_eof()?;
    Ok(e)
}

/// Parse and validate a union of rules.
pub fn parse_query(text: &str) -> Result<Query, ParseError> {
    let mut p = Parser::new(text, Mode::Query)?;
    let mut rules = vec![p.rule()?];
    while p.eat(&Tok::Semi) {
        rules.push(p.rule()?);
    }
    p.expect_eof()?;
    Ok(Query::new(rules)?)
}

/// Parse a property path in the SPARQL 1.1 surface syntax (IRIs are bare
/// tokens or `<...>`; prefixed names are not expanded).
pub fn parse_pp(text: &str) -> Result<PpExpr, ParseError> {
    let mut p = Parser::new(text, Mode::Path)?;
    let e = p.pp_alt()?;
    p.expect_eof()?;
    Ok(e)
}

fn is_plain_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-')
}

/// Write `c` so that both the query and the path lexer read it back as one
/// constant token.
pub(crate) fn write_constant(f: &mut fmt::Formatter<'_>, c: &str) -> fmt::Result {
    if !c.is_empty() && c.chars().all(is_plain_char) {
        f.write_str(c)
    } else if !c.contains('>') {
        write!(f, "<{c}>")
    } else {
        f.write_str("\"")?;
        for ch in c.chars() {
            if matches!(ch, '"' | '\\') {
                f.write_str("\\")?;
            }
            write!(f, "{ch}")?;
        }
        f.write_str("\"")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    Query,
    Path,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    /// `<...>` or a quoted string.
    Literal(String),
    Var(String),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Semi,
    Turnstile,
    DoubleColon,
    Slash,
    Pipe,
    Star,
    Plus,
    Question,
    InvSuffix,
    Caret,
    Bang,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Literal(s) => format!("constant `{s}`"),
            Tok::Var(s) => format!("variable `?{s}`"),
            Tok::Eof => "end of input".to_string(),
            other => format!("`{}`", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrack => "[",
            Tok::RBrack => "]",
            Tok::Comma => ",",
            Tok::Semi => ";",
            Tok::Turnstile => ":-",
            Tok::DoubleColon => "::",
            Tok::Slash => "/",
            Tok::Pipe => "|",
            Tok::Star => "*",
            Tok::Plus => "+",
            Tok::Question => "?",
            Tok::InvSuffix => "^-1",
            Tok::Caret => "^",
            Tok::Bang => "!",
            _ => "",
        }
    }
}

struct Lexer<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
    column: usize,
    mode: Mode,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str, mode: Mode) -> Self {
        Lexer { text, pos: 0, line: 1, column: 1, mode }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn span_from(&self, start: usize, line: usize, column: usize) -> SourceSpan {
        SourceSpan { start, end: self.pos, line, column }
    }

    fn is_ident_char(&self, c: char) -> bool {
        match self.mode {
            Mode::Query => is_plain_char(c) || c == '+',
            Mode::Path => is_plain_char(c) || c == ':',
        }
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self.peek().is_some_and(|c| self.is_ident_char(c)) {
            self.bump();
        }
        self.text[start..self.pos].to_string()
    }

    fn tokenize(mut self) -> Result<Vec<(Tok, SourceSpan)>, ParseError> {
        let mut out = Vec::new();
        loop {
            self.skip_trivia();
            let (start, line, column) = (self.pos, self.line, self.column);
            let err = |this: &Self, expected: &str, found: String| ParseError::Syntax {
                span: this.span_from(start, line, column),
                expected: expected.to_string(),
                found,
            };
            let Some(c) = self.peek() else {
                out.push((Tok::Eof, self.span_from(start, line, column)));
                return Ok(out);
            };
            let tok = if self.is_ident_char(c) {
                Tok::Ident(self.ident())
            } else {
                self.bump();
                match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '[' => Tok::LBrack,
                    ']' => Tok::RBrack,
                    ',' => Tok::Comma,
                    ';' => Tok::Semi,
                    '/' => Tok::Slash,
                    '|' => Tok::Pipe,
                    '*' => Tok::Star,
                    '!' if self.mode == Mode::Path => Tok::Bang,
                    '+' if self.mode == Mode::Path => Tok::Plus,
                    '?' if self.mode == Mode::Path => Tok::Question,
                    '^' if self.mode == Mode::Path => Tok::Caret,
                    '?' => {
                        let name = self.ident();
                        if name.is_empty() {
                            return Err(err(&self, "variable name after `?`", describe_char(self.peek())));
                        }
                        Tok::Var(name)
                    }
                    '^' => {
                        if self.text[self.pos..].starts_with("-1") {
                            self.bump();
                            self.bump();
                            Tok::InvSuffix
                        } else {
                            return Err(err(&self, "`^-1`", describe_char(self.peek())));
                        }
                    }
                    ':' => match self.peek() {
                        Some(':') => {
                            self.bump();
                            Tok::DoubleColon
                        }
                        Some('-') => {
                            self.bump();
                            Tok::Turnstile
                        }
                        other => return Err(err(&self, "`::` or `:-`", describe_char(other))),
                    },
                    '<' => {
                        let body_start = self.pos;
                        loop {
                            match self.bump() {
                                Some('>') => break,
                                Some(_) => {}
                                None => return Err(err(&self, "`>`", "end of input".to_string())),
                            }
                        }
                        let body = &self.text[body_start..self.pos - 1];
                        if body.is_empty() {
                            return Err(err(&self, "non-empty constant", "`<>`".to_string()));
                        }
                        Tok::Literal(body.to_string())
                    }
                    '"' => {
                        let mut body = String::new();
                        loop {
                            match self.bump() {
                                Some('"') => break,
                                Some('\\') => match self.bump() {
                                    Some(e @ ('"' | '\\')) => body.push(e),
                                    other => return Err(err(&self, "`\\\"` or `\\\\`", describe_char(other))),
                                },
                                Some(ch) => body.push(ch),
                                None => return Err(err(&self, "closing `\"`", "end of input".to_string())),
                            }
                        }
                        if body.is_empty() {
                            return Err(err(&self, "non-empty constant", "`\"\"`".to_string()));
                        }
                        Tok::Literal(body)
                    }
                    other => return Err(err(&self, "a token", describe_char(Some(other)))),
                }
            };
            out.push((tok, self.span_from(start, line, column)));
        }
    }
}

fn describe_char(c: Option<char>) -> String {
    match c {
        Some(c) => format!("`{c}`"),
        None => "end of input".to_string(),
    }
}

struct Parser {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
}

impl Parser {
    fn new(text: &str, mode: Mode) -> Result<Self, ParseError> {
        Ok(Parser { toks: Lexer::new(text, mode).tokenize()?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.advance();
            true
        } else {
            false
        }
    }

    fn error(&self, expected: &str) -> ParseError {
        let (tok, span) = &self.toks[self.pos];
        ParseError::Syntax { span: *span, expected: expected.to_string(), found: tok.describe() }
    }

    fn expect(&mut self, t: Tok) -> Result<(), ParseError> {
        if self.eat(&t) {
            Ok(())
        } else {
            Err(self.error(&format!("`{}`", t.symbol())))
        }
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.error("end of input"))
        }
    }

    fn name(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Tok::Ident(_) => match self.advance() {
                Tok::Ident(s) => Ok(s),
                _ => unreachable!(),
            },
            _ => Err(self.error(what)),
        }
    }

    fn constant(&mut self) -> Result<Constant, ParseError> {
        match self.peek() {
            Tok::Ident(_) | Tok::Literal(_) => match self.advance() {
                Tok::Ident(s) | Tok::Literal(s) => Ok(Constant::from(s)),
                _ => unreachable!(),
            },
            _ => Err(self.error("constant")),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        if let Tok::Var(_) = self.peek() {
            let Tok::Var(v) = self.advance() else { unreachable!() };
            return Ok(Term::Var(Variable::new(v)));
        }
        match self.constant() {
            Ok(c) => Ok(Term::Const(c)),
            Err(_) => Err(self.error("variable or constant")),
        }
    }

    fn rule(&mut self) -> Result<Rule, ParseError> {
        let name = self.name("rule name")?;
        self.expect(Tok::LParen)?;
        let u = self.term()?;
        self.expect(Tok::Comma)?;
        let v = self.term()?;
        self.expect(Tok::RParen)?;
        self.expect(Tok::Turnstile)?;
        let mut rule = Rule::new(name, (u, v));
        loop {
            self.atom(&mut rule)?;
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        Ok(rule)
    }

    fn atom(&mut self, rule: &mut Rule) -> Result<(), ParseError> {
        match self.peek() {
            Tok::LParen => {
                self.advance();
                let s = self.term()?;
                self.expect(Tok::Comma)?;
                let e = self.nre()?;
                self.expect(Tok::Comma)?;
                let o = self.term()?;
                self.expect(Tok::RParen)?;
                rule.triple_atoms.push(TriplePattern::new(s, e, o));
            }
            Tok::Ident(_) => {
                let name = self.name("relation name")?;
                self.expect(Tok::LParen)?;
                let mut args = vec![self.term()?];
                while self.eat(&Tok::Comma) {
                    args.push(self.term()?);
                }
                self.expect(Tok::RParen)?;
                rule.rel_atoms.push(RelAtom::new(name, args));
            }
            _ => return Err(self.error("`(` or relation name")),
        }
        Ok(())
    }

    fn nre(&mut self) -> Result<NreExpr, ParseError> {
        let first = self.nre_seq()?;
        if self.eat(&Tok::Pipe) {
            Ok(NreExpr::alt(first, self.nre()?))
        } else {
            Ok(first)
        }
    }

    fn nre_seq(&mut self) -> Result<NreExpr, ParseError> {
        let first = self.nre_star()?;
        if self.eat(&Tok::Slash) {
            Ok(NreExpr::concat(first, self.nre_seq()?))
        } else {
            Ok(first)
        }
    }

    fn nre_star(&mut self) -> Result<NreExpr, ParseError> {
        let mut e = self.nre_base()?;
        while self.eat(&Tok::Star) {
            e = NreExpr::star(e);
        }
        Ok(e)
    }

    fn nre_base(&mut self) -> Result<NreExpr, ParseError> {
        if self.eat(&Tok::LParen) {
            let e = self.nre()?;
            self.expect(Tok::RParen)?;
            return Ok(e);
        }
        let base = match self.peek() {
            Tok::Ident(s) => match s.as_str() {
                "self" => AxisBase::Self_,
                "next" => AxisBase::Next,
                "edge" => AxisBase::Edge,
                "node" => AxisBase::Node,
                _ => return Err(self.error("axis (`self`, `next`, `edge`, `node`) or `(`")),
            },
            _ => return Err(self.error("axis (`self`, `next`, `edge`, `node`) or `(`")),
        };
        self.advance();
        let axis = Axis::new(base, self.eat(&Tok::InvSuffix));
        if !self.eat(&Tok::DoubleColon) {
            return Ok(NreExpr::axis(axis));
        }
        if self.eat(&Tok::LBrack) {
            let inner = self.nre()?;
            self.expect(Tok::RBrack)?;
            return Ok(NreExpr::nest(axis, inner));
        }
        match self.constant() {
            Ok(c) => Ok(NreExpr::axis_const(axis, c)),
            Err(_) => Err(self.error("constant or `[`")),
        }
    }

    fn pp_alt(&mut self) -> Result<PpExpr, ParseError> {
        let first = self.pp_seq()?;
        if self.eat(&Tok::Pipe) {
            Ok(PpExpr::alt(first, self.pp_alt()?))
        } else {
            Ok(first)
        }
    }

    fn pp_seq(&mut self) -> Result<PpExpr, ParseError> {
        let first = self.pp_elt()?;
        if self.eat(&Tok::Slash) {
            Ok(PpExpr::seq(first, self.pp_seq()?))
        } else {
            Ok(first)
        }
    }

    fn pp_elt(&mut self) -> Result<PpExpr, ParseError> {
        if self.eat(&Tok::Caret) {
            return Ok(PpExpr::inv(self.pp_elt()?));
        }
        let mut e = self.pp_primary()?;
        loop {
            e = match self.peek() {
                Tok::Star => PpExpr::star(e),
                Tok::Plus => PpExpr::plus(e),
                Tok::Question => PpExpr::opt(e),
                _ => return Ok(e),
            };
            self.advance();
        }
    }

    fn pp_primary(&mut self) -> Result<PpExpr, ParseError> {
        if self.eat(&Tok::LParen) {
            let e = self.pp_alt()?;
            self.expect(Tok::RParen)?;
            return Ok(e);
        }
        if self.eat(&Tok::Bang) {
            let mut forward = std::collections::BTreeSet::new();
            let mut inverse = std::collections::BTreeSet::new();
            if self.eat(&Tok::LParen) {
                loop {
                    let (inv, c) = self.pp_negated_member()?;
                    if inv { inverse.insert(c) } else { forward.insert(c) };
                    if !self.eat(&Tok::Pipe) {
                        break;
                    }
                }
                self.expect(Tok::RParen)?;
            } else {
                let (inv, c) = self.pp_negated_member()?;
                if inv { inverse.insert(c) } else { forward.insert(c) };
            }
            return Ok(PpExpr::NegSet { forward, inverse });
        }
        match self.constant() {
            Ok(c) => Ok(PpExpr::Iri(c)),
            Err(_) => Err(self.error("IRI, `!`, `^` or `(`")),
        }
    }

    fn pp_negated_member(&mut self) -> Result<(bool, Constant), ParseError> {
        let inv = self.eat(&Tok::Caret);
        match self.constant() {
            Ok(c) => Ok((inv, c)),
            Err(_) => Err(self.error("IRI in negated set")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn nc(axis: Axis, c: &str) -> NreExpr {
        NreExpr::axis_const(axis, c)
    }

    #[test]
    fn concat_of_lookups() {
        assert_eq!(
            parse_nre("next^-1::lon/next::lat").unwrap(),
            NreExpr::concat(nc(Axis::NEXT_INV, "lon"), nc(Axis::NEXT, "lat"))
        );
    }

    #[test]
    fn alt_binds_looser_than_concat() {
        assert_eq!(
            parse_nre("next::a|next::b/next::c").unwrap(),
            NreExpr::alt(nc(Axis::NEXT, "a"), NreExpr::concat(nc(Axis::NEXT, "b"), nc(Axis::NEXT, "c")))
        );
    }

    #[test]
    fn parenthesized_star() {
        assert_eq!(parse_nre("(next)*").unwrap(), NreExpr::star(NreExpr::axis(Axis::NEXT)));
        assert_eq!(parse_nre("next**").unwrap(), NreExpr::star(NreExpr::star(NreExpr::axis(Axis::NEXT))));
    }

    #[test]
    fn nesting_and_literals() {
        let e = parse_nre("self::[next::<8:15 AM>] / edge^-1::\"a\\\"b\"").unwrap();
        assert_eq!(
            e,
            NreExpr::concat(
                NreExpr::nest(Axis::SELF, nc(Axis::NEXT, "8:15 AM")),
                nc(Axis::EDGE_INV, "a\"b")
            )
        );
        assert_eq!(parse_nre("self^-1").unwrap(), NreExpr::axis(Axis::SELF));
    }

    #[test]
    fn comments_and_whitespace() {
        let e = parse_nre("next # first\n /\n node").unwrap();
        assert_eq!(e, NreExpr::concat(NreExpr::axis(Axis::NEXT), NreExpr::axis(Axis::NODE)));
    }

    #[test]
    fn syntax_errors_carry_spans() {
        let err = parse_nre("next/\n  foo").unwrap_err();
        let span = err.span().unwrap();
        assert_eq!((span.line, span.column, span.start, span.end), (2, 3, 8, 11));
        assert!(err.to_string().contains("expected axis"), "{err}");
        assert!(parse_nre("next::").is_err());
        assert!(parse_nre("next^2").is_err());
        assert!(parse_nre("(next").is_err());
        assert!(parse_nre("next)").is_err());
        assert!(parse_nre("").is_err());
        assert!(parse_nre("next::<>").is_err());
    }

    #[test]
    fn example_cnrpq() {
        let q = parse_query("q(?x,?y) :- (?x, (next::p)/(next::q), ?y), (?x, next::r, ?y)").unwrap();
        assert_eq!(q.rules.len(), 1);
        let r = &q.rules[0];
        assert_eq!(r.triple_atoms.len(), 2);
        assert_eq!(r.triple_atoms[0].path, NreExpr::concat(nc(Axis::NEXT, "p"), nc(Axis::NEXT, "q")));
        assert_eq!(r.triple_atoms[1].path, nc(Axis::NEXT, "r"));
        assert_eq!(q.head_vars(), vec![Variable::from("x"), Variable::from("y")]);
    }

    #[test]
    fn two_rule_union() {
        let q = parse_query("q(?x,?y) :- (?x, next, ?y) ; q(?x,?y) :- (?x, next^-1, ?y)").unwrap();
        assert_eq!(q.rules.len(), 2);
        assert_eq!(q.rules[1].triple_atoms[0].path, NreExpr::axis(Axis::NEXT_INV));
    }

    #[test]
    fn federated_rule() {
        let q = parse_query("q(?x,?y) :- (?x, next^-1::lon/next::lat, ?y), Orders(?d, ?x, ?y)").unwrap();
        let r = &q.rules[0];
        assert_eq!(r.rel_atoms.len(), 1);
        assert_eq!(r.rel_atoms[0].name, "Orders");
        assert_eq!(r.rel_atoms[0].args, vec![Term::var("d"), Term::var("x"), Term::var("y")]);
    }

    #[test]
    fn boolean_and_constant_terms() {
        let q = parse_query("q(a, <8:15 AM>) :- (a, next, <8:15 AM>), R(-74.0060)").unwrap();
        assert!(q.is_boolean());
        assert_eq!(q.rules[0].rel_atoms[0].args, vec![Term::constant("-74.0060")]);
    }

    #[test]
    fn validation_errors_propagate() {
        let err = parse_query("q(?x,?z) :- (?x, next, ?y)").unwrap_err();
        assert_eq!(err, ParseError::Invalid(ValidationError::UnboundHeadVariable(Variable::from("z"))));
        assert_eq!(err.to_string(), "?z unbound");
    }

    #[test]
    fn query_syntax_errors() {
        assert!(parse_query("q(?x,?y) :- ").is_err());
        assert!(parse_query("q(?x) :- (?x, next, ?y)").is_err());
        assert!(parse_query("q(?x,?y) (?x, next, ?y)").is_err());
        assert!(parse_query("q(?,?y) :- (?x, next, ?y)").is_err());
        assert!(parse_query("q(?x,?y) :- R()").is_err());
    }

    #[test]
    fn pp_examples() {
        assert_eq!(
            parse_pp("!p").unwrap(),
            PpExpr::NegSet { forward: ["p".into()].into(), inverse: Default::default() }
        );
        assert_eq!(
            parse_pp("^p/q*").unwrap(),
            PpExpr::seq(PpExpr::inv(PpExpr::iri("p")), PpExpr::star(PpExpr::iri("q")))
        );
        assert_eq!(
            parse_pp("!(p|^q)").unwrap(),
            PpExpr::NegSet { forward: ["p".into()].into(), inverse: ["q".into()].into() }
        );
        assert_eq!(parse_pp("^p*").unwrap(), PpExpr::inv(PpExpr::star(PpExpr::iri("p"))));
        assert_eq!(parse_pp("ex:p+?").unwrap(), PpExpr::opt(PpExpr::plus(PpExpr::iri("ex:p"))));
        assert_eq!(
            parse_pp("a|b|c").unwrap(),
            PpExpr::alt(PpExpr::iri("a"), PpExpr::alt(PpExpr::iri("b"), PpExpr::iri("c")))
        );
        assert!(parse_pp("!()").is_err());
        assert!(parse_pp("p/").is_err());
    }

    const CONSTS: &[&str] = &["a", "b", "lon", "8:15 AM", "x>y", "q\"r\\s", "-1.5", "self", "a+b", "ex:p"];

    fn arb_const() -> impl Strategy<Value = Constant> {
        prop::sample::select(CONSTS).prop_map(Constant::from)
    }

    fn arb_axis() -> impl Strategy<Value = Axis> {
        prop::sample::select(Axis::ALL.to_vec())
    }

    pub(crate) fn arb_nre() -> impl Strategy<Value = NreExpr> {
        let leaf = prop_oneof![
            arb_axis().prop_map(NreExpr::axis),
            (arb_axis(), arb_const()).prop_map(|(a, c)| NreExpr::axis_const(a, c)),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                (arb_axis(), inner.clone()).prop_map(|(a, e)| NreExpr::nest(a, e)),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| NreExpr::concat(l, r)),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| NreExpr::alt(l, r)),
                inner.prop_map(NreExpr::star),
            ]
        })
    }

    fn arb_pp() -> impl Strategy<Value = PpExpr> {
        let leaf = prop_oneof![
            arb_const().prop_map(PpExpr::Iri),
            (
                proptest::collection::btree_set(arb_const(), 0..3),
                proptest::collection::btree_set(arb_const(), 0..3)
            )
                .prop_filter("non-empty", |(f, i)| !f.is_empty() || !i.is_empty())
                .prop_map(|(forward, inverse)| PpExpr::NegSet { forward, inverse }),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(l, r)| PpExpr::seq(l, r)),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| PpExpr::alt(l, r)),
                inner.clone().prop_map(PpExpr::inv),
                inner.clone().prop_map(PpExpr::opt),
                inner.clone().prop_map(PpExpr::plus),
                inner.prop_map(PpExpr::star),
            ]
        })
    }

    /// Strings produced directly from the grammar, with random spacing.
    fn grammar_nre() -> impl Strategy<Value = String> {
        let ws = prop::sample::select(vec!["", " ", "\n", " # c\n"]);
        let axis = (prop::sample::select(vec!["self", "next", "edge", "node"]), any::<bool>())
            .prop_map(|(a, inv)| if inv { format!("{a}^-1") } else { a.to_string() });
        let konst = prop::sample::select(vec!["p", "<x y>", "\"q>r\"", "12.5", "a_b"]);
        let base = prop_oneof![
            axis.clone(),
            (axis.clone(), ws.clone(), konst).prop_map(|(a, w, c)| format!("{a}{w}::{w}{c}")),
        ];
        base.prop_recursive(4, 32, 3, move |inner| {
            prop_oneof![
                (axis.clone(), inner.clone()).prop_map(|(a, e)| format!("{a}::[{e}]")),
                (inner.clone(), ws.clone(), inner.clone()).prop_map(|(l, w, r)| format!("{l}{w}/{w}{r}")),
                (inner.clone(), ws.clone(), inner.clone()).prop_map(|(l, w, r)| format!("{l}{w}|{w}{r}")),
                inner.clone().prop_map(|e| format!("({e})*")),
                inner.prop_map(|e| format!("( {e} )")),
            ]
        })
    }

    proptest! {
        #[test]
        fn nre_round_trip(e in arb_nre()) {
            let printed = e.to_string();
            prop_assert_eq!(parse_nre(&printed).unwrap(), e, "{}", printed);
        }

        #[test]
        fn pp_round_trip(e in arb_pp()) {
            let printed = e.to_string();
            prop_assert_eq!(parse_pp(&printed).unwrap(), e, "{}", printed);
        }

        #[test]
        fn grammar_strings_parse(s in grammar_nre()) {
            prop_assert!(parse_nre(&s).is_ok(), "{}", s);
        }

        #[test]
        fn query_round_trip(e in arb_nre(), f in arb_nre(), c in arb_const()) {
            let r1 = Rule::new("q", (Term::var("x"), Term::var("y")))
                .with_triple(TriplePattern::new(Term::var("x"), e, Term::var("y")))
                .with_rel(RelAtom::new("R", vec![Term::var("y"), Term::Const(c.clone())]));
            let r2 = Rule::new("q", (Term::var("x"), Term::var("y")))
                .with_triple(TriplePattern::new(Term::Const(c), f, Term::var("x")))
                .with_triple(TriplePattern::new(Term::var("x"), NreExpr::axis(Axis::NEXT), Term::var("y")));
            let q = Query::new(vec![r1, r2]).unwrap();
            let printed = q.to_string();
            prop_assert_eq!(parse_query(&printed).unwrap(), q, "{}", printed);
        }

        #[test]
        fn parser_never_panics(s in "[a-z?:^()\\[\\]/|*<>\", ;-]{0,30}") {
            let _ = parse_nre(&s);
            let _ = parse_query(&s);
            let _ = parse_pp(&s);
        }
    }
}
