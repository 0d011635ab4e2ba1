//! Typing of expressions, predicates, tuples, templates and tables.

use super::{SType, SchemaMap, TypeEnv, TypeError, TypeErrorKind as K};
use crate::syntax::ast::*;
use crate::syntax::render;
use crate::values::well_sorted_tuple;

type R<T> = Result<T, TypeError>;

fn show<T: crate::syntax::Render>(x: &T) -> String {
    render(x)
}

pub fn type_expr(env: &TypeEnv, e: &Expr) -> R<MType> {
    match &e.kind {
        ExprKind::IntLit(_) => Ok(MType::INT),
        ExprKind::StrLit(_) => Ok(MType::STRING),
        ExprKind::TidLit(_) => Ok(MType::ID),
        ExprKind::LocLit(_) => Ok(MType::LOC),
        ExprKind::DataVar(x) => match env.lookup(x) {
            Some(SType::Data(t)) if *t != MType::LOC => Ok(*t),
            Some(SType::Data(_)) => {
                Err(TypeError::new(e.span, K::Mismatch, format!("locality variable `{x}` used as data")))
            }
            Some(SType::Table(_)) => {
                Err(TypeError::new(e.span, K::Mismatch, format!("table variable `{x}` used as data")))
            }
            None => Err(TypeError::new(e.span, K::Unbound, format!("unbound variable `{x}`"))),
        },
        ExprKind::LocVar(u) => match env.lookup(u) {
            Some(SType::Data(t)) if *t == MType::LOC => Ok(MType::LOC),
            Some(_) => Err(TypeError::new(e.span, K::Mismatch, format!("`{u}` is not a locality variable"))),
            None => Err(TypeError::new(e.span, K::Unbound, format!("unbound variable `{u}`"))),
        },
        ExprKind::Concat(a, b) => {
            expect_expr(env, a, MType::STRING, "concatenation")?;
            expect_expr(env, b, MType::STRING, "concatenation")?;
            Ok(MType::STRING)
        }
        ExprKind::Arith(_, a, b) => {
            expect_expr(env, a, MType::INT, "arithmetic")?;
            expect_expr(env, b, MType::INT, "arithmetic")?;
            Ok(MType::INT)
        }
        ExprKind::MultisetLit(items) => {
            let mut kind: Option<BaseType> = None;
            for item in items {
                let t = type_expr(env, item)?;
                let MType::Base(b) = t else {
                    return Err(TypeError::new(item.span, K::Mismatch, "multiset elements must be scalars"));
                };
                match kind {
                    Some(k) if k != b => {
                        return Err(TypeError::new(
                            item.span,
                            K::Mismatch,
                            format!("multiset mixes {} and {}", show(&k), show(&b)),
                        ))
                    }
                    _ => kind = Some(b),
                }
            }
            Ok(kind.map_or(MType::AnySet, MType::MSet))
        }
    }
}

fn expect_expr(env: &TypeEnv, e: &Expr, want: MType, ctx: &str) -> R<()> {
    let t = type_expr(env, e)?;
    if t == want {
        Ok(())
    } else {
        Err(TypeError::new(
            e.span,
            K::Mismatch,
            format!("{ctx} expects {}, found {}", show(&want), show(&t)),
        ))
    }
}

pub fn type_pred(env: &TypeEnv, p: &Pred) -> R<()> {
    match &p.kind {
        PredKind::True => Ok(()),
        PredKind::Cmp(op, a, b) => {
            let (ta, tb) = (type_expr(env, a)?, type_expr(env, b)?);
            let MType::Base(base) = ta else {
                return Err(TypeError::new(a.span, K::Mismatch, "comparison operands must be scalars"));
            };
            if ta != tb {
                return Err(TypeError::new(
                    p.span,
                    K::Mismatch,
                    format!("cannot compare {} with {}", show(&ta), show(&tb)),
                ));
            }
            if op.is_ordering() && !matches!(base, BaseType::Int | BaseType::String) {
                return Err(TypeError::new(
                    p.span,
                    K::Mismatch,
                    format!("ordering is not defined on {}", show(&ta)),
                ));
            }
            Ok(())
        }
        PredKind::Member(a, b) => {
            let (ta, tb) = (type_expr(env, a)?, type_expr(env, b)?);
            match (ta, tb) {
                (MType::Base(x), MType::MSet(y)) if x == y => Ok(()),
                (MType::Base(_), MType::AnySet) => Ok(()),
                _ => Err(TypeError::new(
                    p.span,
                    K::Mismatch,
                    format!("membership of {} in {}", show(&ta), show(&tb)),
                )),
            }
        }
        PredKind::Subset(a, b) => {
            let (ta, tb) = (type_expr(env, a)?, type_expr(env, b)?);
            match (ta, tb) {
                (MType::MSet(x), MType::MSet(y)) if x == y => Ok(()),
                (MType::AnySet, MType::MSet(_) | MType::AnySet) | (MType::MSet(_), MType::AnySet) => Ok(()),
                _ => Err(TypeError::new(
                    p.span,
                    K::Mismatch,
                    format!("subset of {} and {}", show(&ta), show(&tb)),
                )),
            }
        }
        PredKind::Not(q) => type_pred(env, q),
        PredKind::And(q, r) => {
            type_pred(env, q)?;
            type_pred(env, r)
        }
    }
}

pub fn type_tuple(env: &TypeEnv, t: &Tuple) -> R<Schema> {
    t.0.iter().map(|e| type_expr(env, e)).collect::<R<Vec<_>>>().map(Schema)
}

/// `sk ⊢ T ▷ Γ'`
pub fn type_template(sk: &Schema, t: &Template, span: Span) -> R<Vec<(String, SType)>> {
    if sk.arity() != t.arity() {
        return Err(TypeError::new(
            span,
            K::TemplateMismatch,
            format!("template {} has {} fields but schema {} has {}", show(t), t.arity(), show(sk), sk.arity()),
        ));
    }
    t.0.iter()
        .zip(&sk.0)
        .map(|(f, ty)| match f {
            Field::Data(x) if *ty != MType::LOC => Ok((x.clone(), SType::Data(*ty))),
            Field::Loc(u) if *ty == MType::LOC => Ok((u.clone(), SType::Data(MType::LOC))),
            _ => Err(TypeError::new(
                span,
                K::TemplateMismatch,
                format!("field {} does not fit column type {}", show(f), show(ty)),
            )),
        })
        .collect()
}

pub fn type_loc(env: &TypeEnv, l: &LocTerm, span: Span) -> R<()> {
    match l {
        LocTerm::Lit(_) => Ok(()),
        LocTerm::Var(u) => match env.lookup(u) {
            Some(SType::Data(t)) if *t == MType::LOC => Ok(()),
            Some(_) => Err(TypeError::new(span, K::Mismatch, format!("`{u}` is not a locality"))),
            None => Err(TypeError::new(span, K::Unbound, format!("unbound locality variable `{u}`"))),
        },
    }
}

pub fn schema_of(nabla: &SchemaMap, tid: &TableId, span: Span) -> R<Schema> {
    nabla
        .get(tid)
        .cloned()
        .ok_or_else(|| TypeError::new(span, K::UnknownTable, format!("no schema for table `{tid}`")))
}

/// Checks a constant table against its interface and `∇`.
pub fn type_table_literal(nabla: &SchemaMap, t: &Table, span: Span) -> R<Schema> {
    let sk = &t.iface.schema;
    if let Some(tid) = &t.iface.tid {
        let declared = schema_of(nabla, tid, span)?;
        if declared != *sk {
            return Err(TypeError::new(
                span,
                K::SchemaConflict,
                format!("table `{tid}` declared as {} but schema is {}", show(sk), show(&declared)),
            ));
        }
    }
    for row in t.rows.support() {
        if !well_sorted_tuple(row, sk) {
            return Err(TypeError::new(span, K::BadTableRow, format!("row {row} does not fit {}", show(sk))));
        }
    }
    Ok(sk.clone())
}

/// `Γ, ∇ ⊢ TB ▷ sk`
pub fn type_table(env: &TypeEnv, nabla: &SchemaMap, tb: &TableRef, span: Span) -> R<Schema> {
    match tb {
        TableRef::ByName { tid, loc } => {
            type_loc(env, loc, span)?;
            schema_of(nabla, tid, span)
        }
        TableRef::ByVar(v) => match env.lookup(v) {
            Some(SType::Table(sk)) => Ok(sk.clone()),
            Some(_) => Err(TypeError::new(span, K::Mismatch, format!("`{v}` is not a table variable"))),
            None => Err(TypeError::new(span, K::Unbound, format!("unbound table variable `{v}`"))),
        },
        TableRef::Literal(t) => type_table_literal(nabla, t, span),
    }
}
