//! Abstract syntax for expressions and queries, and the mapping algebra shared
//! by every evaluator.

mod expr;
mod mapping;
mod query;

pub use expr::{Axis, AxisBase, NreExpr, PpExpr};
pub use mapping::{Mapping, MappingSet};
pub use query::{validate, Query, Rule, Term, TriplePattern, ValidationError, Variable};
