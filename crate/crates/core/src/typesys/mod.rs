//! Static type system over `Γ` (variables) and `∇` (table schemas).

mod checker;
mod env;
mod error;
mod rules;

pub use checker::{check_net_with, check_system, collect_schemas, Checker};
pub use env::{SType, SchemaMap, TypeEnv};
pub use error::{TypeError, TypeErrorKind};
pub use rules::{type_expr, type_loc, type_pred, type_table, type_table_literal, type_template, type_tuple};
