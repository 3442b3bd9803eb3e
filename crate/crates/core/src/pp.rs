//! SPARQL 1.1 property paths: evaluation over the same product automaton as
//! nre, and translation of negation-free paths into nre.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::graph::{Constant, RdfGraph};
use crate::model::{Axis, NreExpr, PpExpr};
use crate::nre::{all_pairs, Plan};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PpError {
    #[error("negated property set {0} has no nre counterpart")]
    Negation(String),
}

/// `⟦elt⟧_G` as a set of pairs.
///
/// A negated set `!(f_1|...|f_n|^i_1|...|^i_m)` is the union of a forward
/// part `{(a, b) | some (a, c, b) ∈ G and no (a, f_k, b) ∈ G}` and the
/// converse of the analogous part over the `i_k`; a part is dropped when it
/// has no members.
pub fn eval_pp(g: &RdfGraph, elt: &PpExpr) -> BTreeSet<(Constant, Constant)> {
    let plan = Plan::for_pp(g, elt);
    all_pairs(&plan).into_iter().map(|(a, b)| (g.term(a).clone(), g.term(b).clone())).collect()
}

/// Translate a negation-free path: `c ↦ next::c`, `^` pushed down to the
/// atoms, `e+ ↦ T(e)/T(e)*` and `e? ↦ self|T(e)`.
pub fn pp_to_nre(elt: &PpExpr) -> Result<NreExpr, PpError> {
    translate(elt, false)
}

fn translate(elt: &PpExpr, inverted: bool) -> Result<NreExpr, PpError> {
    Ok(match elt {
        PpExpr::Iri(c) => NreExpr::axis_const(if inverted { Axis::NEXT_INV } else { Axis::NEXT }, c.clone()),
        PpExpr::Seq(l, r) => {
            let (first, second) = if inverted { (r, l) } else { (l, r) };
            NreExpr::concat(translate(first, inverted)?, translate(second, inverted)?)
        }
        PpExpr::Alt(l, r) => NreExpr::alt(translate(l, inverted)?, translate(r, inverted)?),
        PpExpr::Inv(e) => translate(e, !inverted)?,
        PpExpr::Opt(e) => NreExpr::alt(NreExpr::axis(Axis::SELF), translate(e, inverted)?),
        PpExpr::Plus(e) => {
            let t = translate(e, inverted)?;
            NreExpr::concat(t.clone(), NreExpr::star(t))
        }
        PpExpr::Star(e) => NreExpr::star(translate(e, inverted)?),
        neg @ PpExpr::NegSet { .. } => return Err(PpError::Negation(neg.to_string())),
    })
}
