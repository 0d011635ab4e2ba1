//! Schema projection, joins, minimal elements and aggregation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::{Multiset, Value, ValueTuple};
use crate::syntax::ast::{
    AggrFn, LocTerm, Loc, MType, OrderSpec, Schema, Table, TableId, TableRef, Template, Tuple,
};
use crate::typesys::{type_expr, SType, TypeEnv};

/// `sk ↓^T_t`: the schema of the rows produced by instantiating `t` with
/// bindings obtained by matching rows of `sk` against `T`.
///
/// Variables bound by `T` take the type of their column; constants take
/// the sort of their value. Compound expressions over bound variables are
/// typed under the bindings of `T`. Returns `None` when some component has
/// no type (unbound variable, ill-formed expression, or `T` does not fit
/// `sk`).
pub fn project_schema(sk: &Schema, template: &Template, t: &Tuple) -> Option<Schema> {
    if template.arity() != sk.arity() {
        return None;
    }
    let mut env = TypeEnv::new();
    for (name, ty) in template.names().zip(&sk.0) {
        env.bind(name, SType::Data(*ty));
    }
    t.0.iter().map(|e| type_expr(&env, e).ok()).collect::<Option<Vec<_>>>().map(Schema)
}

/// Resolves the table list of a selection against the located tables in
/// scope. `None` when some reference is a table variable, has an unbound
/// locality, or names a table that is not present.
pub fn resolve_refs<'a>(
    refs: &'a [TableRef],
    lookup: impl Fn(&Loc, &TableId) -> Option<&'a Table>,
) -> Option<Vec<&'a Table>> {
    refs.iter()
        .map(|r| match r {
            TableRef::ByName { tid, loc: LocTerm::Lit(l) } => lookup(l, tid),
            TableRef::Literal(t) => Some(t),
            TableRef::ByName { .. } | TableRef::ByVar(_) => None,
        })
        .collect()
}

/// `flatten_s(τ1 × … × τn)`
pub fn join_schemas(tables: &[&Table]) -> Schema {
    Schema(tables.iter().flat_map(|t| t.iface.schema.0.iter().copied()).collect())
}

/// `flatten_d(R1 × … × Rn)`; multiplicities multiply.
pub fn join_rows(tables: &[&Table]) -> Multiset<ValueTuple> {
    let mut acc: Vec<(Vec<Value>, usize)> = vec![(Vec::new(), 1)];
    for table in tables {
        let mut next = Vec::with_capacity(acc.len() * table.rows.support_len());
        for (prefix, n) in &acc {
            for (row, m) in table.rows.iter() {
                let mut joined = prefix.clone();
                joined.extend(row.0.iter().cloned());
                next.push((joined, n * m));
            }
        }
        acc = next;
    }
    let mut out = Multiset::new();
    for (row, n) in acc {
        out.insert_n(ValueTuple(row), n);
    }
    out
}

/// `t1 ⪯ t2` under the concrete order families.
fn precedes(order: OrderSpec, a: &ValueTuple, b: &ValueTuple) -> bool {
    if a == b {
        return true;
    }
    match order {
        OrderSpec::Unordered => false,
        OrderSpec::Lex => a < b,
        OrderSpec::Asc(c) => matches!((a.column(c), b.column(c)), (Some(x), Some(y)) if x < y),
        OrderSpec::Desc(c) => matches!((a.column(c), b.column(c)), (Some(x), Some(y)) if x > y),
    }
}

/// `Minimal(R, ⪯) = { t ∈ R | ∀t' ∈ R: t' ⪯ t ⇒ t' = t }`, as distinct
/// tuples in ascending order.
pub fn minimal(rows: &Multiset<ValueTuple>, order: OrderSpec) -> Vec<ValueTuple> {
    rows.support()
        .filter(|t| rows.support().all(|other| other == *t || !precedes(order, other, t)))
        .cloned()
        .collect()
}

/// Result schema of an aggregator over rows of schema `sk`, or `None` when
/// the aggregator does not apply (column out of range or not `Int`).
pub fn aggr_signature(f: AggrFn, sk: &Schema) -> Option<Schema> {
    if let Some(c) = f.column() {
        let ty = c.checked_sub(1).and_then(|i| sk.0.get(i))?;
        if *ty != MType::INT {
            return None;
        }
    }
    Some(Schema(vec![MType::INT]))
}

fn int_column(rows: &Multiset<ValueTuple>, col: usize) -> Option<Vec<(&BigInt, usize)>> {
    rows.iter()
        .map(|(row, &n)| match row.column(col) {
            Some(Value::Int(v)) => Some((v, n)),
            _ => None,
        })
        .collect()
}

/// Applies an aggregator to a multiset of rows, producing a unary tuple.
/// Averages round toward negative infinity; `avg`, `min` and `max` of the
/// empty multiset are 0. `None` when a row lacks an integer in the column.
pub fn apply_aggr(f: AggrFn, rows: &Multiset<ValueTuple>) -> Option<ValueTuple> {
    let result = match f {
        AggrFn::Count => BigInt::from(rows.len()),
        AggrFn::Sum(c) => sum(&int_column(rows, c)?),
        AggrFn::Avg(c) => {
            let col = int_column(rows, c)?;
            let n = rows.len();
            if n == 0 {
                BigInt::zero()
            } else {
                sum(&col).div_floor(&BigInt::from(n))
            }
        }
        AggrFn::Min(c) => int_column(rows, c)?.into_iter().map(|(v, _)| v).min().cloned().unwrap_or_default(),
        AggrFn::Max(c) => int_column(rows, c)?.into_iter().map(|(v, _)| v).max().cloned().unwrap_or_default(),
    };
    Some(ValueTuple(vec![Value::Int(result)]))
}

fn sum(col: &[(&BigInt, usize)]) -> BigInt {
    col.iter().map(|(v, n)| *v * BigInt::from(*n)).sum()
}
