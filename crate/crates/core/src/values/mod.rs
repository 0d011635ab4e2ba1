//! Runtime values and the pure semantic kernel: evaluation, well-sortedness,
//! pattern matching, substitution, joins and aggregation.

mod eval;
mod multiset;
pub mod relational;
pub mod sorts;
pub mod subst;
mod value;

pub use eval::{eval_expr, eval_pred, eval_tuple, EvalErr, EvalOutcome};
pub use multiset::Multiset;
pub use relational::{
    aggr_signature, apply_aggr, join_rows, join_schemas, minimal, project_schema, resolve_refs,
};
pub use sorts::{well_sorted_template, well_sorted_tuple};
pub use subst::{match_tuple, Binding, Subst, Substitute};
pub use value::{Value, ValueTuple};
