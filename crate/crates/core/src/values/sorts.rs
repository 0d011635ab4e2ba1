//! The well-sortedness relation `⊩` on evaluated tuples and templates.

use super::ValueTuple;
use crate::syntax::ast::{Field, MType, Schema, Template};

/// `et ⊩ sk`
pub fn well_sorted_tuple(et: &ValueTuple, sk: &Schema) -> bool {
    et.arity() == sk.arity() && et.0.iter().zip(&sk.0).all(|(v, ty)| v.inhabits(*ty))
}

/// `T ⊩ sk`: data binders accept every column type except `Loc`, locality
/// binders accept only `Loc`.
pub fn well_sorted_template(t: &Template, sk: &Schema) -> bool {
    t.arity() == sk.arity()
        && t.0.iter().zip(&sk.0).all(|(w, ty)| match w {
            Field::Data(_) => *ty != MType::LOC,
            Field::Loc(_) => *ty == MType::LOC,
        })
}
