use std::fmt;

use num_bigint::BigInt;

use super::Multiset;
use crate::syntax::ast::{BaseType, Expr, ExprKind, Loc, MType, TableId};

/// Runtime values.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Int(BigInt),
    Str(String),
    Tid(TableId),
    Loc(Loc),
    /// Multiset of scalars of one kind.
    Set(Multiset<Value>),
}

impl Value {
    pub fn int(n: i64) -> Self {
        Value::Int(BigInt::from(n))
    }

    pub fn str(s: impl Into<String>) -> Self {
        Value::Str(s.into())
    }

    pub fn loc(name: impl Into<String>) -> Self {
        Value::Loc(Loc::new(name))
    }

    pub fn tid(name: impl Into<String>) -> Self {
        Value::Tid(TableId::new(name))
    }

    /// Scalar kind, `None` for multisets.
    pub fn base_type(&self) -> Option<BaseType> {
        match self {
            Value::Int(_) => Some(BaseType::Int),
            Value::Str(_) => Some(BaseType::String),
            Value::Tid(_) => Some(BaseType::Id),
            Value::Loc(_) => Some(BaseType::Loc),
            Value::Set(_) => None,
        }
    }

    /// The most precise column type this value inhabits.
    pub fn sort(&self) -> MType {
        match self {
            Value::Set(items) => match items.support().next().and_then(Value::base_type) {
                Some(b) => MType::MSet(b),
                None => MType::AnySet,
            },
            v => MType::Base(v.base_type().expect("scalar")),
        }
    }

    /// `v ⊩ τ`
    pub fn inhabits(&self, ty: MType) -> bool {
        match (self, ty) {
            (Value::Set(items), MType::MSet(b)) => {
                items.support().all(|x| x.base_type() == Some(b))
            }
            (Value::Set(items), MType::AnySet) => items.is_empty(),
            (Value::Set(_), MType::Base(_)) => false,
            (v, MType::Base(b)) => v.base_type() == Some(b),
            (_, _) => false,
        }
    }

    /// The literal expression denoting this value.
    pub fn to_expr(&self) -> Expr {
        Expr::new(match self {
            Value::Int(n) => ExprKind::IntLit(n.clone()),
            Value::Str(s) => ExprKind::StrLit(s.clone()),
            Value::Tid(t) => ExprKind::TidLit(t.clone()),
            Value::Loc(l) => ExprKind::LocLit(l.clone()),
            Value::Set(items) => ExprKind::MultisetLit(items.expanded().map(Value::to_expr).collect()),
        })
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Str(s) => write!(f, "{}", crate::syntax::render::quote(s)),
            Value::Tid(t) => write!(f, "{t}"),
            Value::Loc(l) => write!(f, "{l}"),
            Value::Set(items) => {
                f.write_str("{")?;
                for (i, v) in items.expanded().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_str("}")
            }
        }
    }
}

/// An evaluated tuple, i.e. one row of a table.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ValueTuple(pub Vec<Value>);

impl ValueTuple {
    pub fn arity(&self) -> usize {
        self.0.len()
    }

    /// 1-based column access.
    pub fn column(&self, col: usize) -> Option<&Value> {
        col.checked_sub(1).and_then(|i| self.0.get(i))
    }
}

impl fmt::Display for ValueTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

impl From<Vec<Value>> for ValueTuple {
    fn from(v: Vec<Value>) -> Self {
        ValueTuple(v)
    }
}

/// Builds a row from a list of values: `row![Value::int(1), Value::str("a")]`.
#[macro_export]
macro_rules! row {
    ($($v:expr),* $(,)?) => {
        $crate::values::ValueTuple(vec![$($v),*])
    };
}
