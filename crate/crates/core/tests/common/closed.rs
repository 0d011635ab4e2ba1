//! Random closed expressions, predicates and tuples with no regard for
//! typing, so that many of them are ill-typed.

use klaimdb::syntax::ast::*;
use klaimdb::typesys::{type_expr, type_pred, type_tuple, TypeEnv};
use klaimdb::values::{eval_expr, eval_pred, eval_tuple};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn expr(rng: &mut ChaCha8Rng, depth: u32) -> Expr {
    let leaf = depth == 0 || rng.gen_ratio(2, 5);
    if leaf {
        return match rng.gen_range(0..8) {
            0..=2 => Expr::int(rng.gen_range(-5..6)),
            3..=4 => Expr::str(*["", "a", "b", "ab"].choose(rng).unwrap()),
            5 => Expr::new(ExprKind::TidLit(TableId::new(*["KLD", "SH"].choose(rng).unwrap()))),
            6 => Expr::new(ExprKind::LocLit(Loc::new(*["l0", "l1"].choose(rng).unwrap()))),
            _ => Expr::new(ExprKind::MultisetLit(Vec::new())),
        };
    }
    match rng.gen_range(0..4) {
        0 => {
            let (a, b) = (expr(rng, depth - 1), expr(rng, depth - 1));
            Expr::new(ExprKind::Concat(Box::new(a), Box::new(b)))
        }
        1 | 2 => {
            let op = *[ArithOp::Add, ArithOp::Sub, ArithOp::Mul, ArithOp::Div].choose(rng).unwrap();
            let (a, b) = (expr(rng, depth - 1), expr(rng, depth - 1));
            Expr::new(ExprKind::Arith(op, Box::new(a), Box::new(b)))
        }
        _ => {
            let n = rng.gen_range(0..4);
            Expr::new(ExprKind::MultisetLit((0..n).map(|_| expr(rng, depth - 1)).collect()))
        }
    }
}

pub fn pred(rng: &mut ChaCha8Rng, depth: u32) -> Pred {
    let leaf = depth == 0 || rng.gen_ratio(1, 2);
    if leaf {
        let (a, b) = (expr(rng, 2), expr(rng, 2));
        return Pred::new(match rng.gen_range(0..6) {
            0 => PredKind::True,
            1 => PredKind::Member(a, b),
            2 => PredKind::Subset(a, b),
            _ => {
                let op = *[CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge].choose(rng).unwrap();
                PredKind::Cmp(op, a, b)
            }
        });
    }
    if rng.gen_bool(0.4) {
        Pred::new(PredKind::Not(Box::new(pred(rng, depth - 1))))
    } else {
        let (a, b) = (pred(rng, depth - 1), pred(rng, depth - 1));
        Pred::new(PredKind::And(Box::new(a), Box::new(b)))
    }
}

pub fn tuple(rng: &mut ChaCha8Rng) -> Tuple {
    let n = rng.gen_range(1..4);
    Tuple((0..n).map(|_| expr(rng, 2)).collect())
}

/// One agreement case: the checker accepts exactly when evaluation
/// succeeds, and the value inhabits the derived type. `Err` describes a
/// disagreement. The returned flag says whether the item was well-typed.
pub fn agreement_case(rng: &mut ChaCha8Rng) -> Result<bool, String> {
    let env = TypeEnv::new();
    match rng.gen_range(0..3) {
        0 => {
            let e = expr(rng, 3);
            match (type_expr(&env, &e), eval_expr(&e)) {
                (Ok(ty), Ok(v)) if v.inhabits(ty) => Ok(true),
                (Ok(ty), Ok(v)) => Err(format!("{e:?}: value {v:?} does not inhabit {ty:?}")),
                (Err(_), Err(_)) => Ok(false),
                (t, v) => Err(format!("{e:?}: typed {t:?}, evaluated {v:?}")),
            }
        }
        1 => {
            let p = pred(rng, 3);
            match (type_pred(&env, &p), eval_pred(&p)) {
                (Ok(()), Ok(_)) => Ok(true),
                (Err(_), Err(_)) => Ok(false),
                (t, v) => Err(format!("{p:?}: typed {t:?}, evaluated {v:?}")),
            }
        }
        _ => {
            let t = tuple(rng);
            match (type_tuple(&env, &t), eval_tuple(&t)) {
                (Ok(sk), Ok(vs)) if vs.0.len() == sk.0.len() && vs.0.iter().zip(&sk.0).all(|(v, ty)| v.inhabits(*ty)) => {
                    Ok(true)
                }
                (Ok(sk), Ok(vs)) => Err(format!("{t:?}: {vs:?} not of {sk:?}")),
                (Err(_), Err(_)) => Ok(false),
                (ty, v) => Err(format!("{t:?}: typed {ty:?}, evaluated {v:?}")),
            }
        }
    }
}
