//! Evaluation of closed expressions, predicates and tuples.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use super::{Multiset, Value, ValueTuple};
use crate::syntax::ast::{ArithOp, BaseType, CmpOp, Expr, ExprKind, Pred, PredKind, Tuple};

/// The evaluation error `err`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("evaluation error")]
pub struct EvalErr;

pub type EvalOutcome<T> = Result<T, EvalErr>;

pub fn eval_expr(e: &Expr) -> EvalOutcome<Value> {
    match &e.kind {
        ExprKind::IntLit(n) => Ok(Value::Int(n.clone())),
        ExprKind::StrLit(s) => Ok(Value::Str(s.clone())),
        ExprKind::TidLit(t) => Ok(Value::Tid(t.clone())),
        ExprKind::LocLit(l) => Ok(Value::Loc(l.clone())),
        ExprKind::DataVar(_) | ExprKind::LocVar(_) => Err(EvalErr),
        ExprKind::Concat(a, b) => match (eval_expr(a)?, eval_expr(b)?) {
            (Value::Str(mut x), Value::Str(y)) => {
                x.push_str(&y);
                Ok(Value::Str(x))
            }
            _ => Err(EvalErr),
        },
        ExprKind::Arith(op, a, b) => match (eval_expr(a)?, eval_expr(b)?) {
            (Value::Int(x), Value::Int(y)) => Ok(Value::Int(arith(*op, x, y))),
            _ => Err(EvalErr),
        },
        ExprKind::MultisetLit(items) => {
            let mut kind: Option<BaseType> = None;
            let mut out = Multiset::new();
            for item in items {
                let v = eval_expr(item)?;
                let b = v.base_type().ok_or(EvalErr)?;
                match kind {
                    None => kind = Some(b),
                    Some(k) if k != b => return Err(EvalErr),
                    Some(_) => {}
                }
                out.insert(v);
            }
            Ok(Value::Set(out))
        }
    }
}

/// Exact integer arithmetic. Division truncates toward zero and division by
/// zero yields zero.
fn arith(op: ArithOp, x: BigInt, y: BigInt) -> BigInt {
    match op {
        ArithOp::Add => x + y,
        ArithOp::Sub => x - y,
        ArithOp::Mul => x * y,
        ArithOp::Div if y.is_zero() => BigInt::zero(),
        ArithOp::Div => x / y,
    }
}

pub fn eval_pred(p: &Pred) -> EvalOutcome<bool> {
    match &p.kind {
        PredKind::True => Ok(true),
        PredKind::Cmp(op, a, b) => {
            let (x, y) = (eval_expr(a)?, eval_expr(b)?);
            let (bx, by) = (x.base_type().ok_or(EvalErr)?, y.base_type().ok_or(EvalErr)?);
            if bx != by {
                return Err(EvalErr);
            }
            if op.is_ordering() && !matches!(bx, BaseType::Int | BaseType::String) {
                return Err(EvalErr);
            }
            Ok(match op {
                CmpOp::Eq => x == y,
                CmpOp::Ne => x != y,
                CmpOp::Lt => x < y,
                CmpOp::Le => x <= y,
                CmpOp::Gt => x > y,
                CmpOp::Ge => x >= y,
            })
        }
        PredKind::Member(a, b) => {
            let x = eval_expr(a)?;
            let kind = x.base_type().ok_or(EvalErr)?;
            match eval_expr(b)? {
                Value::Set(items) if items.support().all(|v| v.base_type() == Some(kind)) => {
                    Ok(items.contains(&x))
                }
                _ => Err(EvalErr),
            }
        }
        PredKind::Subset(a, b) => match (eval_expr(a)?, eval_expr(b)?) {
            (Value::Set(x), Value::Set(y)) => {
                let kx = x.support().next().and_then(Value::base_type);
                let ky = y.support().next().and_then(Value::base_type);
                if let (Some(kx), Some(ky)) = (kx, ky) {
                    if kx != ky {
                        return Err(EvalErr);
                    }
                }
                Ok(x.is_submultiset(&y) && x != y)
            }
            _ => Err(EvalErr),
        },
        PredKind::Not(inner) => Ok(!eval_pred(inner)?),
        PredKind::And(l, r) => {
            // error-strict in both operands
            let (x, y) = (eval_pred(l), eval_pred(r));
            Ok(x? & y?)
        }
    }
}

pub fn eval_tuple(t: &Tuple) -> EvalOutcome<ValueTuple> {
    t.0.iter().map(eval_expr).collect::<Result<Vec<_>, _>>().map(ValueTuple)
}
